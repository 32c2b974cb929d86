"""Exact derivational entropy, expected length, and entropy rate of a PCFG.

The expected-counts (characteristic) matrix M of a grammar has one row per
non-terminal; entry (i, j) is the expected number of occurrences of
non-terminal j produced by a single expansion of non-terminal i.  When the
spectral radius of M is below one, I - M is a non-singular M-matrix with a
non-negative inverse, and solving

    (I - M) x = v

with v the vector of local expansion entropies (respectively, of expected
terminal emissions per expansion) yields the per-non-terminal derivational
entropies (respectively, expected string lengths).  The root components are
the grammar's derivational entropy and mean length of utterance; their ratio
is the derivational entropy rate in bits per emitted symbol.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DivergentGrammarError, NumericalError, StructuralError
from .grammar import Pcfg

#: Relative residual bound for the linear solve, in the infinity norm.
SOLVE_RESIDUAL_TOL = 1e-8

POWER_ITERATION_TOL = 1e-10
POWER_ITERATION_LIMIT = 100_000


def entropy_from_probs(probs: np.ndarray) -> float:
    """Plug-in entropy in bits, with the 0 log 0 = 0 convention."""
    probs = np.asarray(probs, dtype=np.float64)
    positive = probs[probs > 0.0]
    return float(-(positive @ np.log2(positive)))


def characteristic_matrix(grammar: Pcfg) -> np.ndarray:
    """Expected non-terminal production counts per single expansion.

    Rows and columns follow `grammar.nonterminals` order.
    """
    index = grammar.nt_index
    n = len(grammar.nonterminals)
    matrix = np.zeros((n, n))
    for rule in grammar.rules:
        row = index[rule.lhs]
        for sym in rule.rhs:
            col = index.get(sym)
            if col is not None:
                matrix[row, col] += rule.prob
    return matrix


def local_entropies(grammar: Pcfg) -> np.ndarray:
    """Entropy in bits of each non-terminal's rule-choice distribution."""
    out = np.empty(len(grammar.nonterminals))
    for i, nt in enumerate(grammar.nonterminals):
        probs = np.array([r.prob for r in grammar.rules_for(nt)])
        out[i] = entropy_from_probs(probs)
    return out


def local_lengths(grammar: Pcfg) -> np.ndarray:
    """Expected number of terminal symbols emitted per single expansion."""
    index = grammar.nt_index
    out = np.zeros(len(grammar.nonterminals))
    for rule in grammar.rules:
        emitted = sum(1 for sym in rule.rhs if sym not in index)
        out[index[rule.lhs]] += rule.prob * emitted
    return out


def spectral_radius(matrix: np.ndarray) -> float:
    """Largest eigenvalue modulus of a non-negative square matrix.

    Power iteration with a deterministic positive start vector and relative
    tolerance 1e-10; dimension 1 is returned exactly.  The iteration runs on
    M + I, which shifts the dominant eigenvalue by exactly one while making
    cyclic structures aperiodic; nilpotent matrices are detected separately
    (repeated multiplication must reach exact zero within n steps).
    """
    m = np.asarray(matrix, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise StructuralError("expected a square matrix")
    if (m < 0).any():
        raise StructuralError("expected a non-negative matrix")
    n = m.shape[0]
    if n == 1:
        return float(m[0, 0])
    # Nilpotent case: the zero set of M^k 1 must grow strictly every step,
    # reaching everything within n steps; any stall means a cycle exists.
    v = np.ones(n)
    zeros = 0
    for _ in range(n):
        v = m @ v
        if not v.any():
            return 0.0
        now = int(np.count_nonzero(v == 0.0))
        if now <= zeros:
            break
        zeros = now
    shifted = m + np.eye(n)
    v = np.full(n, 1.0 / np.sqrt(n))
    previous = 0.0
    for _ in range(POWER_ITERATION_LIMIT):
        w = shifted @ v
        estimate = float(np.linalg.norm(w))
        v = w / estimate
        if abs(estimate - previous) <= POWER_ITERATION_TOL * max(1.0, estimate):
            return estimate - 1.0
        previous = estimate
    raise NumericalError(
        f"power iteration did not converge in {POWER_ITERATION_LIMIT} steps"
    )


def _radius_for_check(matrix: np.ndarray) -> float:
    # Divergence checks use the dense eigensolver: unlike power iteration it
    # cannot stall on defective matrices, which valid grammars can produce.
    return float(np.max(np.abs(np.linalg.eigvals(matrix))))


def solve_system(matrix: np.ndarray, vector: np.ndarray) -> np.ndarray:
    """Solve (I - M) x = v for a non-negative M with spectral radius < 1.

    The residual is refined until its infinity norm is at most
    ``1e-8 * max|v|``; failing that, the condition estimate is reported.
    A spectral radius of one or more raises :class:`DivergentGrammarError`.
    """
    m = np.asarray(matrix, dtype=np.float64)
    v = np.asarray(vector, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise StructuralError("expected a square matrix")
    if v.shape[0] != m.shape[0]:
        raise StructuralError("matrix and vector dimensions disagree")
    radius = _radius_for_check(m)
    if radius >= 1.0:
        raise DivergentGrammarError(
            f"spectral radius {radius:.12g} >= 1: expected subtree measures diverge"
        )
    a = np.eye(m.shape[0]) - m
    try:
        x = np.linalg.solve(a, v)
    except np.linalg.LinAlgError:
        raise NumericalError(
            f"I - M is singular to working precision "
            f"(condition estimate {np.linalg.cond(a, 1):.3e})"
        ) from None
    bound = SOLVE_RESIDUAL_TOL * float(np.max(np.abs(v)))
    for _ in range(3):
        residual = a @ x - v
        if float(np.max(np.abs(residual))) <= bound:
            return x
        x = x - np.linalg.solve(a, residual)
    raise NumericalError(
        f"residual {np.max(np.abs(a @ x - v)):.3e} exceeds {bound:.3e} "
        f"(condition estimate {np.linalg.cond(a, 1):.3e})"
    )


def entropy_vector(grammar: Pcfg) -> np.ndarray:
    """Derivational entropy in bits of the subtrees rooted at each
    non-terminal, in `grammar.nonterminals` order."""
    return solve_system(characteristic_matrix(grammar), local_entropies(grammar))


def mlu_vector(grammar: Pcfg) -> np.ndarray:
    """Expected frontier length of the subtrees rooted at each non-terminal."""
    return solve_system(characteristic_matrix(grammar), local_lengths(grammar))


def derivational_entropy(grammar: Pcfg) -> float:
    """Entropy in bits of the distribution over the trees the grammar
    generates."""
    return float(entropy_vector(grammar)[grammar.nt_index[grammar.root]])


def grammar_mlu(grammar: Pcfg) -> float:
    """Expected length in terminal symbols of a generated sentence."""
    return float(mlu_vector(grammar)[grammar.nt_index[grammar.root]])


@dataclass(frozen=True)
class RateReport:
    """Entropy, expected length, their ratio, and the spectral radius."""

    entropy: float
    mlu: float
    rate: float
    spectral_radius: float


def entropy_rate(grammar: Pcfg) -> RateReport:
    """Derivational entropy rate: bits of tree entropy per emitted symbol."""
    matrix = characteristic_matrix(grammar)
    radius = _radius_for_check(matrix)
    entropy = float(
        solve_system(matrix, local_entropies(grammar))[grammar.nt_index[grammar.root]]
    )
    mlu = float(
        solve_system(matrix, local_lengths(grammar))[grammar.nt_index[grammar.root]]
    )
    if mlu <= 0.0:
        raise NumericalError(f"expected length {mlu} is not positive")
    return RateReport(entropy, mlu, entropy / mlu, radius)
