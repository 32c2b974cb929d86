"""Discrete entropy estimators and treebank-level entropy estimation.

Plug-in (maximum-likelihood) entropy estimates are negatively biased on
small samples.  Two corrections from the species-richness literature are
provided: the coverage-adjusted estimator (CAE) of Chao and Shen, which
plugs Good-Turing-discounted probabilities into a coverage-corrected sum,
and the accumulation-curve estimator (CWJ) of Chao, Wang and Jost, which is
less biased still and converges faster.

Treebank entropy estimation composes these with grammar induction: the
expected-counts matrix of the induced grammar is kept as-is (its entries are
plain frequency ratios and need no correction, and leaving it untouched
keeps its spectral radius below one), while the vector of local expansion
entropies is replaced component-wise by a bias-corrected estimate computed
from each non-terminal's observed expansion frequencies.  Solving the usual
linear system then yields the smoothed induced treebank entropy (SITE).
With the plain ML smoother the composition reproduces the exact entropy of
the induced grammar bit for bit.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import digamma

from .entropy import characteristic_matrix, entropy_from_probs, solve_system
from .errors import EmptyInputError, OutOfGrammarError
from .grammar import FreqTable, Pcfg, induce, rule_freq_tables, tree_probability
from .trees import Corpus

_LN2 = math.log(2.0)

#: Truncation threshold for geometric tail series (relative term size).
_SERIES_EPS = 1e-18
_SERIES_MAX_TERMS = 2_000_000


class SmootherKind(str, enum.Enum):
    """Local-entropy smoothers available to SITE."""

    ML = "ml"
    CAE = "cae"
    CWJ = "cwj"


@dataclass(frozen=True)
class EstimateResult:
    value: float
    method: str
    sample_size: int


def ml_entropy(table: FreqTable) -> float:
    """Plug-in entropy in bits of the relative frequencies."""
    counts = np.asarray(table.counts, dtype=np.float64)
    return entropy_from_probs(counts / table.n)


def gt_degenerate(table: FreqTable) -> bool:
    """True when every observed type is a singleton (the Good-Turing
    discount would wipe out all probability mass)."""
    f1 = sum(1 for c in table.counts if c == 1)
    return f1 == table.n


def good_turing_probs(table: FreqTable) -> np.ndarray:
    """Good-Turing-discounted probabilities: ML estimates scaled by one
    minus the singleton share.

    In the all-singletons case the discount factor is zero; the undiscounted
    ML probabilities are returned instead (see :func:`gt_degenerate`).
    """
    counts = np.asarray(table.counts, dtype=np.float64)
    n = table.n
    ml = counts / n
    f1 = int(np.count_nonzero(counts == 1))
    if f1 == n:
        return ml
    return (1.0 - f1 / n) * ml


def cae_entropy(table: FreqTable) -> float:
    """Coverage-adjusted entropy estimate in bits.

    Each Good-Turing-weighted entropy term is inflated by the probability of
    the type appearing at least once in a sample of size n, compensating for
    types that were never observed.
    """
    probs = good_turing_probs(table)
    n = table.n
    coverage = 1.0 - np.power(1.0 - probs, n)
    terms = np.where(probs < 1.0, -probs * np.log2(np.maximum(probs, 1e-300)), 0.0)
    return float(np.sum(terms / coverage))


def _tail_series(u: float, offset: int) -> float:
    """Sum of u**k / (offset + k) over k >= 1, for 0 <= u < 1."""
    if u <= 0.0:
        return 0.0
    needed = math.log(_SERIES_EPS) / math.log(u)
    if needed <= _SERIES_MAX_TERMS:
        k = np.arange(1, int(needed) + 2, dtype=np.float64)
        return float(np.sum(np.power(u, k) / (offset + k)))
    # u is so close to one that the series is impractical; fall back to the
    # Lerch transcendent, of which this sum is u * phi(u, 1, offset + 1).
    import mpmath

    return float(u * mpmath.lerchphi(u, 1, offset + 1))


def cwj_entropy(table: FreqTable) -> float:
    """Accumulation-curve entropy estimate in bits.

    The first part sums, over types seen at most n-1 times, harmonic-number
    differences weighted by relative frequency; the second extrapolates the
    unseen tail from the singleton and doubleton counts.  Evaluated in nats
    and converted once at the end.  The extrapolation term is computed from
    its all-positive series expansion, which is exactly equal to the
    (1-A)**(1-n) * [log A + sum] form but avoids its catastrophic
    cancellation.
    """
    counts = np.asarray(table.counts, dtype=np.float64)
    n = table.n
    seen = counts[counts <= n - 1]
    first = float(np.sum((seen / n) * (digamma(n) - digamma(seen))))
    f1 = int(np.count_nonzero(counts == 1))
    f2 = int(np.count_nonzero(counts == 2))
    if f2 > 0:
        a = 2.0 * f2 / ((n - 1) * f1 + 2.0 * f2)
    elif f1 > 0:
        a = 2.0 / ((n - 1) * (f1 - 1) + 2.0)
    else:
        a = 1.0
    nats = first
    if f1 > 0 and a < 1.0:
        nats += (f1 / n) * _tail_series(1.0 - a, n - 1)
    return nats / _LN2


_SMOOTHERS = {
    SmootherKind.ML: ml_entropy,
    SmootherKind.CAE: cae_entropy,
    SmootherKind.CWJ: cwj_entropy,
}


def smoothed_local_entropies(grammar: Pcfg, smoother: SmootherKind) -> np.ndarray:
    """Per-non-terminal local expansion entropies after bias correction."""
    estimator = _SMOOTHERS[SmootherKind(smoother)]
    tables = rule_freq_tables(grammar)
    return np.array([estimator(tables[nt]) for nt in grammar.nonterminals])


def site_from_grammar(grammar: Pcfg, smoother: SmootherKind = SmootherKind.CWJ) -> float:
    """SITE value of an induced grammar (frequency counts required)."""
    h0 = smoothed_local_entropies(grammar, smoother)
    x = solve_system(characteristic_matrix(grammar), h0)
    return float(x[grammar.nt_index[grammar.root]])


def site(corpus: Corpus, smoother: SmootherKind = SmootherKind.CWJ) -> EstimateResult:
    """Smoothed induced treebank entropy of a corpus, in bits."""
    smoother = SmootherKind(smoother)
    grammar = induce(corpus)
    value = site_from_grammar(grammar, smoother)
    return EstimateResult(value, f"site-{smoother.value}", len(corpus))


def ml_exact(corpus: Corpus) -> EstimateResult:
    """Exact derivational entropy of the ML-induced grammar."""
    grammar = induce(corpus)
    value = site_from_grammar(grammar, SmootherKind.ML)
    return EstimateResult(value, "ml-exact", len(corpus))


def monte_carlo_cross_entropy(train: Corpus, test: Corpus) -> float:
    """Cross-entropy in bits of the train-induced grammar on the test trees.

    Every occurrence in the test multiset counts once.  A test tree using a
    rule absent from the training grammar raises
    :class:`OutOfGrammarError` listing the offending rules.
    """
    if not test.sentences:
        raise EmptyInputError("empty test corpus")
    grammar = induce(train)
    total = 0.0
    missing: list[str] = []
    for tree in test.sentences:
        try:
            total += tree_probability(grammar, tree).log2
        except OutOfGrammarError as err:
            missing.extend(err.rules)
    if missing:
        raise OutOfGrammarError(
            "test trees use rules absent from the training grammar",
            rules=sorted(set(missing)),
        )
    return -total / len(test.sentences)
