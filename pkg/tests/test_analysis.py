import math

import numpy as np
import pytest

from treebank_entropy.analysis import (
    DEFAULT_SIZES,
    converge,
    file_reports,
    fit,
    incremental,
    mlu_agreement,
    residualize,
    spearman_size_check,
)
from treebank_entropy.errors import InputError
from treebank_entropy.estimators import site
from treebank_entropy.grammar import Pcfg, Rule, Sampler
from treebank_entropy.trees import Corpus, corpus_mlu, parse_bracketed


def corpus_of(*texts):
    return Corpus([parse_bracketed(t)[0] for t in texts])


def sampled_corpus(grammar, size, seed):
    return Sampler(grammar).sample_corpus(size, np.random.default_rng(seed))


LOW_ENTROPY = Pcfg(
    "S", [Rule("S", ("a", "S"), 0.05, 1), Rule("S", ("a",), 0.95, 19)]
)
HIGH_ENTROPY = Pcfg(
    "S",
    [
        Rule("S", ("x", "S"), 0.2, 1),
        Rule("S", ("y", "S"), 0.2, 1),
        Rule("S", ("x",), 0.2, 1),
        Rule("S", ("y",), 0.2, 1),
        Rule("S", ("z",), 0.2, 1),
    ],
)


class TestConverge:
    def test_default_sizes(self):
        assert DEFAULT_SIZES == (
            1, 2, 3, 5, 7, 11, 17, 25, 37, 55, 82, 122, 183, 273, 407, 608,
            908, 1355, 2023, 3020, 4509, 6731, 10048, 15000,
        )

    def test_deterministic_grammar_all_zero(self):
        corpus = corpus_of("(S (A a) (B b))", "(S (A a) (B b))")
        rows = converge(
            corpus, sizes=[1, 2], replications=5, seed=3, coverage=False
        )
        for row in rows:
            assert row.mean == 0.0
            assert row.ci95_low == row.ci95_high == 0.0

    def test_rows_cover_all_series(self):
        corpus = sampled_corpus(HIGH_ENTROPY, 60, 1)
        rows = converge(corpus, sizes=[2, 5], replications=4, seed=0)
        series = {(r.sample_size, r.estimator) for r in rows}
        for size in (2, 5):
            for est in ("ml", "mc", "site-cae", "site-cwj",
                        "coverage-rules", "coverage-nonterminals"):
                assert (size, est) in series

    def test_ci_bounds_ordered(self):
        corpus = sampled_corpus(HIGH_ENTROPY, 60, 2)
        rows = converge(corpus, sizes=[3, 9], replications=8, seed=1)
        for row in rows:
            assert row.ci95_low <= row.mean <= row.ci95_high

    def test_coverage_grows_with_size(self):
        corpus = sampled_corpus(HIGH_ENTROPY, 200, 3)
        rows = converge(corpus, sizes=[2, 60], replications=10, seed=2)
        cov = {
            (r.sample_size, r.estimator): r.mean
            for r in rows
            if r.estimator.startswith("coverage")
        }
        assert cov[60, "coverage-rules"] > cov[2, "coverage-rules"]
        assert all(0.0 <= v <= 100.0 for v in cov.values())

    def test_thread_count_does_not_change_results(self):
        corpus = sampled_corpus(HIGH_ENTROPY, 80, 4)
        rows1 = converge(corpus, sizes=[2, 7], replications=6, seed=9, threads=1)
        rows4 = converge(corpus, sizes=[2, 7], replications=6, seed=9, threads=4)
        assert rows1 == rows4

    def test_ml_and_mc_agree(self):
        corpus = sampled_corpus(HIGH_ENTROPY, 100, 5)
        rows = converge(
            corpus, sizes=[20], replications=10, seed=7, coverage=False
        )
        by_est = {r.estimator: r.mean for r in rows}
        assert by_est["ml"] == pytest.approx(by_est["mc"], rel=1e-9)

    def test_unknown_estimator_rejected(self):
        corpus = sampled_corpus(HIGH_ENTROPY, 30, 6)
        with pytest.raises(InputError, match="estimator"):
            converge(corpus, sizes=[2], replications=2, estimators=("bogus",))


class TestIncremental:
    def test_two_identical_files(self):
        file_a = sampled_corpus(HIGH_ENTROPY, 40, 11)
        file_b = Corpus(list(file_a.sentences), source_id="copy")
        points = incremental([file_a, file_b])
        assert [p.step for p in points] == [1, 2]
        assert points[1].cumulative_sentences == 80

    def test_endpoint_order_invariant(self):
        files = [
            sampled_corpus(LOW_ENTROPY, 30, 21),
            sampled_corpus(HIGH_ENTROPY, 50, 22),
            sampled_corpus(LOW_ENTROPY, 20, 23),
        ]
        original = incremental(files, order="original")
        shuffled = incremental(files, order="shuffled", seed=99)
        assert shuffled[-1].entropy == pytest.approx(
            original[-1].entropy, abs=1e-9
        )
        assert [p.cumulative_sentences for p in shuffled] == [
            p.cumulative_sentences for p in original
        ]

    def test_heterogeneous_original_order_non_monotone(self):
        files = [
            sampled_corpus(LOW_ENTROPY, 60, 31),
            sampled_corpus(HIGH_ENTROPY, 60, 32),
            sampled_corpus(LOW_ENTROPY, 60, 33),
        ]
        points = incremental(files, order="original")
        values = [p.entropy for p in points]
        assert not all(a <= b for a, b in zip(values, values[1:]))
        assert not all(a >= b for a, b in zip(values, values[1:]))

    def test_needs_two_files(self):
        with pytest.raises(InputError):
            incremental([sampled_corpus(LOW_ENTROPY, 5, 41)])


class TestFileReports:
    def test_single_sentence_file(self):
        (report,) = file_reports([corpus_of("(S (A a) (B b))")])
        assert report.sentences == 1
        assert report.entropy >= 0.0
        assert report.log_n == 0.0

    def test_negation_tree_file(self):
        tree = (
            "(S (NP-SBJ PRP) (VP VBP RB (VP VB (NP DT NNS))))"
        )
        corpus = corpus_of(tree)
        (report,) = file_reports([corpus])
        assert report.mlu == 6.0
        assert report.entropy == site(corpus).value

    def test_mlu_matches_corpus_mlu(self):
        files = [sampled_corpus(HIGH_ENTROPY, n, 50 + n) for n in (3, 12, 30)]
        for report, corpus in zip(file_reports(files), files):
            assert report.mlu == corpus_mlu(corpus)
            assert report.log_n == pytest.approx(math.log(len(corpus)))


class TestFit:
    def test_exact_line(self):
        x = np.array([1.0, 2.0, 3.0, 4.0])
        result = fit(x, 2 * x)
        assert result.slope == pytest.approx(2.0)
        assert result.slope_stderr == pytest.approx(0.0, abs=1e-12)
        assert result.r == pytest.approx(1.0)

    def test_no_intercept_slope(self):
        x = np.array([1.0, 2.0, 3.0])
        result = fit(x, x + 1.0, with_intercept=False)
        assert result.slope == pytest.approx(10 / 7)
        assert result.intercept is None

    def test_intercept_recovered(self):
        rng = np.random.default_rng(0)
        x = rng.uniform(0, 10, 50)
        y = 3.0 * x + 4.0 + rng.normal(0, 0.1, 50)
        result = fit(x, y)
        assert result.slope == pytest.approx(3.0, abs=0.05)
        assert result.intercept == pytest.approx(4.0, abs=0.25)
        assert abs(result.intercept_t) > 10

    def test_degenerate_x_rejected(self):
        with pytest.raises(InputError):
            fit([2.0, 2.0, 2.0], [1.0, 2.0, 3.0])
        with pytest.raises(InputError):
            fit([0.0, 0.0, 0.0], [1.0, 2.0, 3.0], with_intercept=False)

    def test_too_few_points(self):
        with pytest.raises(InputError):
            fit([1.0, 2.0], [1.0, 2.0])


class TestResidualize:
    def test_perfect_line_zero_residuals(self):
        log_n = np.log([10, 20, 40, 80.0])
        y = 5.0 * log_n + 2.0
        assert residualize(y, log_n) == pytest.approx(np.zeros(4), abs=1e-12)

    def test_constant_y_zero_residuals(self):
        log_n = np.log([10, 20, 40, 80.0])
        assert residualize(np.full(4, 3.0), log_n) == pytest.approx(
            np.zeros(4), abs=1e-12
        )

    def test_residuals_sum_to_zero_and_orthogonal(self):
        rng = np.random.default_rng(1)
        log_n = np.log(rng.integers(2, 500, 60).astype(float))
        y = 1.7 * log_n + rng.normal(0, 1.0, 60)
        res = residualize(y, log_n)
        assert abs(res.sum()) < 1e-9
        assert abs(np.corrcoef(res, log_n)[0, 1]) < 1e-9

    def test_degenerate_rejected(self):
        with pytest.raises(InputError):
            residualize([1.0, 2.0, 3.0], np.log([5.0, 5.0, 5.0]))

    def test_spearman_check_reports(self):
        rng = np.random.default_rng(2)
        log_n = np.log(rng.integers(2, 500, 60).astype(float))
        y = 1.7 * log_n + rng.normal(0, 1.0, 60)
        rho, p = spearman_size_check(residualize(y, log_n), log_n)
        assert -1.0 <= rho <= 1.0
        assert 0.0 <= p <= 1.0


class TestMluAgreement:
    def test_induced_grammar_preserves_mlu(self):
        corpus = sampled_corpus(HIGH_ENTROPY, 70, 60)
        empirical, from_grammar = mlu_agreement(corpus)
        assert from_grammar == pytest.approx(empirical, abs=1e-9)
