"""Corpus experiments: convergence sweeps, incremental entropy, regressions.

Replication sweeps draw every (replication, size) task from its own random
stream derived from the master seed, merge results in task order, and are
therefore byte-identical however many workers run them.  The worker count is
capped by the ``SITE_THREADS`` environment variable.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .entropy import characteristic_matrix, solve_system
from .errors import EmptyInputError, InputError
from .estimators import (
    SmootherKind,
    monte_carlo_cross_entropy,
    site,
    smoothed_local_entropies,
)
from .grammar import Pcfg, Sampler, induce
from .trees import Corpus, corpus_mlu

#: Sweep sizes spanning 1 to 15,000 sentences, evenly spaced in log scale.
DEFAULT_SIZES = (
    1, 2, 3, 5, 7, 11, 17, 25, 37, 55, 82, 122, 183, 273, 407, 608, 908,
    1355, 2023, 3020, 4509, 6731, 10048, 15000,
)

DEFAULT_ESTIMATORS = ("ml", "mc", "site-cae", "site-cwj")

#: Percentage-coverage curves reported alongside the entropy estimators.
COVERAGE_SERIES = ("coverage-rules", "coverage-nonterminals")


@dataclass(frozen=True)
class ConvergenceRow:
    sample_size: int
    estimator: str
    mean: float
    ci95_low: float
    ci95_high: float
    replications: int


@dataclass(frozen=True)
class FileReport:
    file_id: str
    sentences: int
    mlu: float
    entropy: float
    log_n: float


@dataclass(frozen=True)
class IncrementalPoint:
    step: int
    label: str
    cumulative_sentences: int
    entropy: float


@dataclass(frozen=True)
class RegressionFit:
    slope: float
    slope_stderr: float
    slope_t: float
    intercept: float | None
    intercept_stderr: float | None
    intercept_t: float | None
    r: float
    n: int
    with_intercept: bool


def _corpus_estimates(corpus: Corpus, estimators) -> dict[str, float]:
    """All requested estimates of one sampled corpus, sharing one induction
    and one matrix factorization."""
    grammar = induce(corpus)
    matrix = characteristic_matrix(grammar)
    root = grammar.nt_index[grammar.root]
    smoother_of = {
        "ml": SmootherKind.ML,
        "site-ml": SmootherKind.ML,
        "site-cae": SmootherKind.CAE,
        "site-cwj": SmootherKind.CWJ,
    }
    columns = []
    col_ids = []
    out = {}
    for est in estimators:
        if est == "mc":
            out[est] = monte_carlo_cross_entropy(corpus, corpus)
        elif est in smoother_of:
            col_ids.append(est)
            columns.append(smoothed_local_entropies(grammar, smoother_of[est]))
        else:
            raise InputError(f"unknown estimator id '{est}'")
    if columns:
        solution = solve_system(matrix, np.column_stack(columns))
        for i, est in enumerate(col_ids):
            out[est] = float(solution[root, i])
    return out, grammar


def _coverage(sample_grammar: Pcfg, true_rules, true_nts) -> dict[str, float]:
    rules = {(r.lhs, r.rhs) for r in sample_grammar.rules}
    nts = set(sample_grammar.nonterminals)
    return {
        "coverage-rules": 100.0 * len(rules & true_rules) / len(true_rules),
        "coverage-nonterminals": 100.0 * len(nts & true_nts) / len(true_nts),
    }


def _worker_count(threads: int | None) -> int:
    if threads is not None:
        return max(1, threads)
    return max(1, int(os.environ.get("SITE_THREADS", "1")))


def converge(
    grammar_source: Corpus,
    sizes=DEFAULT_SIZES,
    replications: int = 100,
    estimators=DEFAULT_ESTIMATORS,
    seed: int = 0,
    threads: int | None = None,
    coverage: bool = True,
) -> list[ConvergenceRow]:
    """Estimator accuracy as a function of sample size.

    A grammar is induced from `grammar_source`; for every replication and
    size an artificial corpus of that many trees is sampled from it and each
    estimator applied.  Rows aggregate the replications with normal 95%
    confidence intervals.  Coverage rows report the percentage of the true
    grammar's rules and non-terminals observed.
    """
    sizes = sorted(sizes)
    if not sizes or sizes[0] < 1:
        raise InputError("sample sizes must be positive")
    truth = induce(grammar_source)
    sampler = Sampler(truth)
    true_rules = frozenset((r.lhs, r.rhs) for r in truth.rules)
    true_nts = frozenset(truth.nonterminals)
    estimators = tuple(estimators)
    series = estimators + (COVERAGE_SERIES if coverage else ())

    tasks = [(rep, size) for rep in range(replications) for size in sizes]

    def run(task):
        rep, size = task
        rng = np.random.default_rng(np.random.SeedSequence((seed, rep, size)))
        corpus = sampler.sample_corpus(size, rng)
        values, sample_grammar = _corpus_estimates(corpus, estimators)
        if coverage:
            values.update(_coverage(sample_grammar, true_rules, true_nts))
        return values

    workers = _worker_count(threads)
    if workers == 1:
        results = [run(t) for t in tasks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, tasks))

    by_task = dict(zip(tasks, results))
    rows = []
    for size in sizes:
        for est in series:
            values = np.array([by_task[rep, size][est] for rep in range(replications)])
            mean = float(np.mean(values))
            if replications > 1:
                half = 1.96 * float(np.std(values, ddof=1)) / math.sqrt(replications)
            else:
                half = 0.0
            rows.append(
                ConvergenceRow(size, est, mean, mean - half, mean + half, replications)
            )
    return rows


def incremental(
    files: list[Corpus],
    order: str = "original",
    seed: int | None = None,
    smoother: SmootherKind = SmootherKind.CWJ,
) -> list[IncrementalPoint]:
    """Cumulative treebank entropy, file by file.

    With ``order='original'`` the files accumulate as given; with
    ``order='shuffled'`` all sentences are pooled, permuted with a seeded
    generator, and re-cut into chunks matching the original file sizes.  The
    endpoint is order-independent because the estimate only depends on the
    accumulated multiset of trees.
    """
    if len(files) < 2:
        raise InputError("incremental analysis needs at least two files")
    if order == "original":
        parts = [(c.source_id or f"file{i + 1:02d}", c.sentences) for i, c in enumerate(files)]
    elif order == "shuffled":
        pool = [t for c in files for t in c.sentences]
        rng = np.random.default_rng(seed)
        permuted = [pool[i] for i in rng.permutation(len(pool))]
        parts = []
        start = 0
        for i, c in enumerate(files):
            chunk = permuted[start:start + len(c.sentences)]
            start += len(c.sentences)
            parts.append((f"chunk{i + 1:02d}", chunk))
    else:
        raise InputError(f"unknown order '{order}'")
    points = []
    accumulated: list = []
    for step, (label, sentences) in enumerate(parts, start=1):
        accumulated.extend(sentences)
        estimate = site(Corpus(list(accumulated)), smoother)
        points.append(
            IncrementalPoint(step, label, len(accumulated), estimate.value)
        )
    return points


def file_reports(
    files: list[Corpus], smoother: SmootherKind = SmootherKind.CWJ
) -> list[FileReport]:
    """Per-file sentence count, MLU, treebank entropy, and log size."""
    reports = []
    for i, corpus in enumerate(files):
        if not corpus.sentences:
            raise EmptyInputError(f"file {corpus.source_id or i + 1} is empty")
        estimate = site(corpus, smoother)
        reports.append(
            FileReport(
                file_id=corpus.source_id or f"file{i + 1:02d}",
                sentences=len(corpus),
                mlu=corpus_mlu(corpus),
                entropy=estimate.value,
                log_n=math.log(len(corpus)),
            )
        )
    return reports


def fit(x, y, with_intercept: bool = True) -> RegressionFit:
    """Ordinary least squares of y on x, with or without an intercept.

    Reports the classical standard errors and t statistics, plus the plain
    Pearson correlation of x and y.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise InputError("x and y must be one-dimensional and equally long")
    n = x.size
    if n < 3:
        raise InputError("need at least three points")
    r = _pearson(x, y)
    if with_intercept:
        sxx = float(np.sum((x - x.mean()) ** 2))
        if sxx == 0.0:
            raise InputError("x has zero variance")
        slope = float(np.sum((x - x.mean()) * (y - y.mean())) / sxx)
        intercept = float(y.mean() - slope * x.mean())
        resid = y - slope * x - intercept
        sigma2 = float(np.sum(resid**2)) / (n - 2)
        slope_se = math.sqrt(sigma2 / sxx)
        int_se = math.sqrt(sigma2 * (1.0 / n + x.mean() ** 2 / sxx))
        return RegressionFit(
            slope, slope_se, _ratio(slope, slope_se),
            intercept, int_se, _ratio(intercept, int_se),
            r, n, True,
        )
    sxx = float(np.sum(x**2))
    if sxx == 0.0:
        raise InputError("x is identically zero")
    slope = float(np.sum(x * y) / sxx)
    resid = y - slope * x
    sigma2 = float(np.sum(resid**2)) / (n - 1)
    slope_se = math.sqrt(sigma2 / sxx)
    return RegressionFit(
        slope, slope_se, _ratio(slope, slope_se), None, None, None, r, n, False
    )


def _pearson(x, y) -> float:
    sx = float(np.std(x))
    sy = float(np.std(y))
    if sx == 0.0 or sy == 0.0:
        return 0.0
    return float(np.mean((x - x.mean()) * (y - y.mean())) / (sx * sy))


def _ratio(a: float, b: float) -> float:
    if b == 0.0:
        return math.inf if a != 0.0 else 0.0
    return a / b


def residualize(y, log_n) -> np.ndarray:
    """Residuals of an intercept-included regression of y on log corpus size.

    Removes the approximately logarithmic size bias of small-sample entropy
    estimates; the residuals sum to zero.
    """
    y = np.asarray(y, dtype=np.float64)
    log_n = np.asarray(log_n, dtype=np.float64)
    if y.shape != log_n.shape or y.ndim != 1:
        raise InputError("vectors must be one-dimensional and equally long")
    if y.size < 3:
        raise InputError("need at least three points")
    if float(np.std(log_n)) == 0.0:
        raise InputError("log sizes have zero variance")
    design = np.column_stack([np.ones_like(log_n), log_n])
    coeffs, *_ = np.linalg.lstsq(design, y, rcond=None)
    return y - design @ coeffs


def spearman_size_check(residuals, log_n) -> tuple[float, float]:
    """Rank correlation of residualized entropies with log size.

    Reported (not asserted): a small rho indicates no leftover nonlinear
    size effect.
    """
    rho, p = stats.spearmanr(residuals, log_n)
    return float(rho), float(p)


def mlu_agreement(corpus: Corpus) -> tuple[float, float]:
    """Corpus MLU and induced-grammar MLU (they agree for ML induction)."""
    from .entropy import grammar_mlu

    return corpus_mlu(corpus), grammar_mlu(induce(corpus))
