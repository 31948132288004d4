import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bayesmc import (
    Alphabet,
    BetaParams,
    CountTable,
    HyperTable,
    SymbolSequence,
    confidence_region,
    count_words,
    golden_mean,
    log_evidence,
    log_predictive,
    marginal,
    posterior,
    posterior_mean,
    posterior_variance,
    prior_moments,
    reg_inc_beta,
    sample_posterior,
    uniform_hyper,
)
from bayesmc import average_counts
from bayesmc.core import ShapeMismatchError
from bayesmc.inference import density_grid, region_mass, summary_rows

from util import quad_evidence_binary, quad_evidence_binary_k1_tensor, random_tables

BINARY = Alphabet.binary()
FLAT1 = uniform_hyper(1, BINARY, 1.0)


def table(rows, k=1, alphabet=BINARY):
    return CountTable(k, alphabet, np.asarray(rows, dtype=float))


count_tables = st.integers(0, 8).flatmap(
    lambda seed: st.lists(st.integers(0, 12), min_size=4, max_size=4).map(
        lambda v: table(np.array(v, dtype=float).reshape(2, 2))
    )
)


class TestPosterior:
    def test_zero_counts_gives_prior(self):
        post = posterior(table([[0, 0], [0, 0]]), FLAT1)
        np.testing.assert_array_equal(post.params, FLAT1.table)

    def test_single_count(self):
        post = posterior(table([[0, 1], [0, 0]]), FLAT1)
        np.testing.assert_array_equal(post.params, [[1, 2], [1, 1]])

    def test_forbidden_word_keeps_prior_mass(self):
        counts = average_counts(golden_mean(), 100, 1)
        post = posterior(counts, FLAT1)
        assert post.params[0, 0] == 1.0  # word 00 never occurs

    def test_shape_mismatch(self):
        with pytest.raises(ShapeMismatchError):
            posterior(table([[0, 0], [0, 0]]), uniform_hyper(2, BINARY))


class TestPointSummaries:
    def test_prior_mean_is_uniform(self):
        post = posterior(table([[0, 0], [0, 0]]), FLAT1)
        np.testing.assert_allclose(posterior_mean(post), 0.5)

    def test_mean_single_count(self):
        post = posterior(table([[0, 1], [0, 0]]), FLAT1)
        assert posterior_mean(post)[0, 1] == pytest.approx(2.0 / 3.0)

    def test_golden_mean_converges(self):
        counts = average_counts(golden_mean(), 10_000, 1)
        mean = posterior_mean(posterior(counts, FLAT1))
        assert mean[0, 1] == pytest.approx(1.0, abs=1e-3)  # p(1|0)
        assert mean[1, 0] == pytest.approx(0.5, abs=1e-3)  # p(0|1)

    def test_variance_flat(self):
        post = posterior(table([[0, 0], [0, 0]]), FLAT1)
        np.testing.assert_allclose(posterior_variance(post), 1.0 / 12.0)

    def test_variance_single_count(self):
        post = posterior(table([[0, 1], [0, 0]]), FLAT1)
        assert posterior_variance(post)[0, 1] == pytest.approx(1.0 / 18.0)

    def test_variance_matches_beta_marginal(self):
        rng = np.random.default_rng(7)
        for counts, hyper in random_tables(rng, 20):
            post = posterior(counts, hyper)
            var = posterior_variance(post)
            for w in range(post.params.shape[0]):
                for s in range(post.alphabet.size):
                    assert var[w, s] == pytest.approx(
                        marginal(post, w, s).variance(), abs=1e-15
                    )

    def test_variance_shrinks_with_data(self):
        sizes = [50, 200, 800, 3200, 12_800]
        vs = []
        for N in sizes:
            post = posterior(average_counts(golden_mean(), N, 1), FLAT1)
            vs.append(posterior_variance(post)[1, 0])
        assert all(b < a for a, b in zip(vs, vs[1:]))

    def test_prior_moments(self):
        mean, var = prior_moments(FLAT1)
        np.testing.assert_allclose(mean, 0.5)
        np.testing.assert_allclose(var, 1.0 / 12.0)
        skew = HyperTable(1, BINARY, np.array([[3.0, 1.0], [1.0, 1.0]]))
        mean, var = prior_moments(skew)
        assert mean[0, 0] == pytest.approx(3.0 / 4.0)
        assert var[0, 0] == pytest.approx(3.0 / 80.0)

    def test_prior_mean_ternary(self):
        mean, _ = prior_moments(uniform_hyper(1, Alphabet(("0", "1", "2"))))
        np.testing.assert_allclose(mean, 1.0 / 3.0)

    @given(count_tables)
    def test_rows_sum_to_one(self, counts):
        mean = posterior_mean(posterior(counts, FLAT1))
        np.testing.assert_allclose(mean.sum(axis=1), 1.0, atol=1e-12)

    @given(count_tables)
    def test_pme_decomposition(self, counts):
        # posterior mean = weighted sum of the MLE and the prior expectation
        post = posterior(counts, FLAT1)
        mean = posterior_mean(post)
        n_w = counts.word_totals
        a_w = FLAT1.word_totals
        prior_mean = FLAT1.table / a_w[:, None]
        for w in np.nonzero(n_w > 0)[0]:
            mle = counts.table[w] / n_w[w]
            expected = (n_w[w] * mle + a_w[w] * prior_mean[w]) / (n_w[w] + a_w[w])
            np.testing.assert_allclose(mean[w], expected, atol=1e-12)


class TestMarginals:
    def test_flat(self):
        post = posterior(table([[0, 0], [0, 0]]), FLAT1)
        m = marginal(post, 0, 1)
        assert (m.a, m.b) == (1.0, 1.0)

    def test_single_count(self):
        post = posterior(table([[0, 1], [0, 0]]), FLAT1)
        m = marginal(post, 0, 1)
        assert (m.a, m.b) == (2.0, 1.0)

    def test_density_integrates_to_one(self):
        from scipy.integrate import quad

        post = posterior(average_counts(golden_mean(), 50, 1), FLAT1)
        m = marginal(post, 0, 1)
        total, _ = quad(m.pdf, 0, 1, epsabs=1e-12)
        assert total == pytest.approx(1.0, abs=1e-8)

    def test_golden_mean_skew_near_boundary(self):
        # p(1|0) marginal: mode at 1, mean below it, visibly left-skewed
        post = posterior(average_counts(golden_mean(), 400, 1), FLAT1)
        m = marginal(post, 0, 1)
        assert m.b == pytest.approx(1.0)
        assert m.mean() < 1.0
        x, dens = density_grid(m, 256)
        assert np.argmax(dens) == len(x) - 1


class TestConfidenceRegions:
    def test_uniform_quartiles(self):
        r = confidence_region(BetaParams(1, 1), 0.5)
        assert r.lower == pytest.approx(0.25, abs=1e-10)
        assert r.upper == pytest.approx(0.75, abs=1e-10)

    def test_beta21(self):
        r = confidence_region(BetaParams(2, 1), 0.5)
        assert r.lower == pytest.approx(0.5, abs=1e-9)
        assert r.upper == pytest.approx(math.sqrt(0.75), abs=1e-9)

    def test_against_quadrature_inversion(self):
        from scipy.integrate import quad
        from scipy.optimize import brentq

        m = BetaParams(34, 67)
        cdf = lambda x: quad(m.pdf, 0.0, x, epsabs=1e-13)[0]
        r = confidence_region(m, 0.95)
        assert r.lower == pytest.approx(brentq(lambda x: cdf(x) - 0.025, 1e-9, 1 - 1e-9, xtol=1e-12), abs=1e-6)
        assert r.upper == pytest.approx(brentq(lambda x: cdf(x) - 0.975, 1e-9, 1 - 1e-9, xtol=1e-12), abs=1e-6)

    def test_captured_mass(self):
        m = BetaParams(5.5, 2.25)
        for level in (0.5, 0.9, 0.99):
            r = confidence_region(m, level)
            assert region_mass(m, r) == pytest.approx(level, abs=1e-8)

    def test_bad_level(self):
        with pytest.raises(ValueError):
            confidence_region(BetaParams(1, 1), 1.2)


class TestEvidence:
    def test_zero_counts(self):
        assert log_evidence(table([[0, 0], [0, 0]]), FLAT1) == pytest.approx(0.0, abs=1e-13)

    def test_two_symbols(self):
        counts = count_words(SymbolSequence.from_string("01", BINARY), 1)
        assert log_evidence(counts, FLAT1) == pytest.approx(math.log(0.5), abs=1e-12)
        # independent route: 2-D quadrature of likelihood x prior
        assert quad_evidence_binary_k1_tensor(counts) == pytest.approx(0.5, rel=1e-10)

    def test_0110_matches_quadrature(self):
        counts = count_words(SymbolSequence.from_string("0110", BINARY), 1)
        closed = math.exp(log_evidence(counts, FLAT1))
        assert closed == pytest.approx(quad_evidence_binary_k1_tensor(counts), rel=1e-6)

    @given(count_tables)
    @settings(max_examples=40)
    def test_quadrature_equivalence_small_tables(self, counts):
        if counts.total > 12:
            counts = table(np.minimum(counts.table, 3))
        closed = math.exp(log_evidence(counts, FLAT1))
        assert closed == pytest.approx(quad_evidence_binary_k1_tensor(counts), rel=1e-6)

    def test_nonuniform_alpha_quadrature(self):
        hyper = HyperTable(1, BINARY, np.array([[0.7, 1.4], [2.0, 0.5]]))
        counts = table([[2, 3], [1, 4]])
        closed = math.exp(log_evidence(counts, hyper))
        oracle = 1.0
        from scipy.integrate import quad

        for w in range(2):
            a, b = hyper.table[w, 1], hyper.table[w, 0]
            n1, n0 = counts.table[w, 1], counts.table[w, 0]
            dens = BetaParams(a, b).pdf
            val, _ = quad(lambda x: dens(x) * x**n1 * (1 - x) ** n0, 0, 1, epsabs=1e-13)
            oracle *= val
        assert closed == pytest.approx(oracle, rel=1e-8)


class TestPredictive:
    def test_no_new_data(self):
        counts = table([[1, 2], [3, 4]])
        zero = table([[0, 0], [0, 0]])
        assert log_predictive(counts, zero, FLAT1) == pytest.approx(0.0, abs=1e-12)

    def test_no_old_data(self):
        zero = table([[0, 0], [0, 0]])
        new = table([[1, 2], [3, 4]])
        assert log_predictive(zero, new, FLAT1) == pytest.approx(
            log_evidence(new, FLAT1), abs=1e-12
        )

    def test_single_new_count(self):
        counts = table([[0, 10], [0, 0]])
        new = table([[0, 1], [0, 0]])
        assert log_predictive(counts, new, FLAT1) == pytest.approx(
            math.log(11.0 / 12.0), abs=1e-12
        )

    def test_chain_rule_identity(self):
        rng = np.random.default_rng(11)
        for (c1, h), (c2, _) in zip(random_tables(rng, 40), random_tables(rng, 40)):
            if c1.order != c2.order or c1.alphabet != c2.alphabet:
                continue
            lhs = log_predictive(c1, c2, h)
            rhs = log_evidence(
                CountTable(c1.order, c1.alphabet, c1.table + c2.table), h
            ) - log_evidence(c1, h)
            assert lhs == pytest.approx(rhs, abs=1e-12 * max(1.0, abs(lhs)))


class TestSampling:
    def test_flat_mean(self):
        post = posterior(table([[0, 0], [0, 0]]), FLAT1)
        draws = np.array([sample_posterior(post, s)[0, 1] for s in range(2)])
        rng = np.random.default_rng(0)
        many = np.stack([sample_posterior(post, rng) for _ in range(100_000)])
        assert many[:, 0, 1].mean() == pytest.approx(0.5, abs=0.005)
        assert draws[0] != draws[1]

    def test_skewed_mean(self):
        post = posterior(table([[0, 1], [0, 0]]), FLAT1)
        rng = np.random.default_rng(1)
        many = np.stack([sample_posterior(post, rng) for _ in range(100_000)])
        assert many[:, 0, 1].mean() == pytest.approx(2.0 / 3.0, abs=0.005)

    def test_rows_normalized(self):
        post = posterior(table([[5, 2], [0, 9]]), FLAT1)
        draw = sample_posterior(post, 123)
        np.testing.assert_allclose(draw.sum(axis=1), 1.0, atol=1e-12)

    def test_seed_determinism(self):
        post = posterior(table([[5, 2], [0, 9]]), FLAT1)
        np.testing.assert_array_equal(sample_posterior(post, 42), sample_posterior(post, 42))


class TestExports:
    def test_summary_rows(self):
        rows = summary_rows(table([[0, 1], [0, 0]]), FLAT1, level=0.9)
        assert len(rows) == 4
        assert {r["word"] for r in rows} == {"0", "1"}
        r01 = next(r for r in rows if r["word"] == "0" and r["symbol"] == "1")
        assert r01["mean"] == pytest.approx(2.0 / 3.0)
        assert reg_inc_beta(BetaParams(2, 1), r01["ci_high"]) - reg_inc_beta(
            BetaParams(2, 1), r01["ci_low"]
        ) == pytest.approx(0.9, abs=1e-8)

    def test_density_grid_shape(self):
        x, dens = density_grid(BetaParams(2, 3), 512)
        assert x.shape == dens.shape == (512,)
        assert np.all(dens >= 0)
