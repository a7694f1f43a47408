import numpy as np
import pytest

from topic_r2.model import ROW_SUM_TOL
from topic_r2.simgen import (
    SimulationConfig,
    draw_topics,
    expected_term_frequencies,
    power_law_beta,
    sample_dirichlet,
    simulate_corpus,
    vocabulary_labels,
    zipf_fit,
)


class TestPowerLawBeta:
    def test_examples(self):
        np.testing.assert_allclose(power_law_beta(3, 1, 1), [1, 0.5, 1 / 3])
        np.testing.assert_allclose(power_law_beta(5, 2, 0.1), [0.1, 0.025, 0.1 / 9, 0.00625, 0.004])

    def test_strictly_decreasing_positive(self):
        b = power_law_beta(500, 0.7, 3.0)
        assert np.all(b > 0) and np.all(np.diff(b) < 0)

    @pytest.mark.parametrize("args", [(4, 0, 1), (4, 1, 0), (0, 1, 1)])
    def test_rejects(self, args):
        with pytest.raises(ValueError):
            power_law_beta(*args)


class TestConfig:
    def test_json_round_trip(self):
        c = SimulationConfig(k=3, d=10, v=20, lam=50, alpha=0.2, beta=[1.0] * 20, seed=9)
        assert SimulationConfig.from_dict(c.to_dict()) == c

    def test_alpha_forms(self):
        assert np.allclose(SimulationConfig(k=4, alpha={"sum": 2.0}).alpha_vector(), 0.5)
        assert np.allclose(SimulationConfig(k=4, alpha=0.3).alpha_vector(), 0.3)
        with pytest.raises(ValueError):
            SimulationConfig(k=4, alpha=[0.1, 0.1])

    def test_default_alpha_is_point_one_at_fifty_topics(self):
        assert np.allclose(SimulationConfig(k=50).alpha_vector(), 0.1)

    @pytest.mark.parametrize(
        "bad", [{"k": 0}, {"d": 0}, {"v": 0}, {"lam": 0.0}, {"alpha": -1.0}, {"beta": 0.0}, {"seed": -1}]
    )
    def test_rejects_invalid(self, bad):
        with pytest.raises(ValueError):
            SimulationConfig(**bad)

    def test_unknown_keys(self):
        with pytest.raises(ValueError, match="unknown"):
            SimulationConfig.from_dict({"k": 3, "topics": 4})


class TestSimulateCorpus:
    def test_shape_contract(self):
        c = SimulationConfig(k=3, d=10, v=20, lam=50, seed=4)
        truth = simulate_corpus(c)
        assert truth.dtm.shape == (10, 20)
        assert (truth.dtm.term_totals() > 0).sum() <= 20
        assert truth.dtm.doc_lengths.min() >= 1
        assert truth.model.theta.shape == (10, 3)
        assert truth.model.phi.shape == (3, 20)
        assert truth.dtm.vocabulary[0] == "t00001" and truth.dtm.vocabulary[-1] == "t00020"

    def test_row_stochastic(self):
        truth = simulate_corpus(SimulationConfig(k=20, d=50, v=300, lam=30, seed=1))
        for mat in (truth.model.theta, truth.model.phi):
            assert np.all(mat >= 0)
            assert np.abs(mat.sum(axis=1) - 1).max() <= ROW_SUM_TOL

    def test_deterministic(self):
        c = SimulationConfig(k=5, d=40, v=100, lam=40, seed=123)
        a, b = simulate_corpus(c), simulate_corpus(c)
        assert a.dtm == b.dtm
        assert np.array_equal(a.model.theta, b.model.theta)
        assert np.array_equal(a.model.phi, b.model.phi)
        other = simulate_corpus(c.replace(seed=124))
        assert not other.dtm == a.dtm

    def test_documents_are_independent_substreams(self):
        # the first documents do not depend on how many come after them
        small = simulate_corpus(SimulationConfig(k=5, d=10, v=100, lam=40, seed=3))
        large = simulate_corpus(SimulationConfig(k=5, d=30, v=100, lam=40, seed=3))
        np.testing.assert_array_equal(large.dtm.dense()[:10], small.dtm.dense())
        np.testing.assert_array_equal(large.model.theta[:10], small.model.theta)

    def test_zero_truncated_lengths(self):
        truth = simulate_corpus(SimulationConfig(k=2, d=300, v=10, lam=0.5, seed=2))
        assert truth.dtm.doc_lengths.min() >= 1

    def test_token_conservation(self):
        truth = simulate_corpus(SimulationConfig(k=4, d=30, v=50, lam=25, seed=8))
        assert truth.dtm.total_tokens == truth.dtm.counts.sum() == truth.dtm.doc_lengths.sum()

    def test_tiny_concentrations_do_not_underflow(self):
        truth = simulate_corpus(SimulationConfig(k=3, d=5, v=50, lam=20, alpha=1e-4, beta=1e-4, seed=0))
        assert np.all(np.isfinite(truth.model.phi))
        assert np.abs(truth.model.phi.sum(axis=1) - 1).max() <= ROW_SUM_TOL

    @pytest.mark.slow
    def test_large_default_scale(self):
        truth = simulate_corpus(SimulationConfig(seed=11))  # K=50, D=2000, V=5000, lambda=500
        assert truth.dtm.shape == (2000, 5000)
        # sd of the mean of 2000 Poisson(500) draws is 0.5
        assert abs(truth.dtm.doc_lengths.mean() - 500) < 1.5


class TestDirichletSampler:
    def test_marginal_means(self):
        beta = np.array([0.5, 2.0, 0.05, 1.0, 3.0])
        g = np.random.default_rng(0)
        u = np.random.default_rng(1)
        draws = np.array([sample_dirichlet(beta, g, u) for _ in range(10_000)])
        mean = beta / beta.sum()
        a0 = beta.sum()
        se = np.sqrt(mean * (1 - mean) / (a0 + 1) / len(draws))
        assert np.all(np.abs(draws.mean(axis=0) - mean) < 3 * se)

    def test_common_random_numbers_across_vocabulary(self):
        # raw gamma draws for the head of the vocabulary are shared, so the
        # head's relative proportions agree exactly across V
        a = draw_topics(SimulationConfig(k=2, v=50, seed=5))
        b = draw_topics(SimulationConfig(k=2, v=80, seed=5))
        ratio_a = a[:, :50] / a[:, :1]
        ratio_b = b[:, :50] / b[:, :1]
        np.testing.assert_allclose(ratio_a, ratio_b, rtol=1e-9)


class TestExpectedTermFrequencies:
    def test_symmetric(self):
        c = SimulationConfig(k=1, v=2, beta=[1.0, 1.0])
        np.testing.assert_allclose(expected_term_frequencies(c, 8), [4, 4])

    def test_monte_carlo_three_to_one(self):
        # oracle: numpy's own Dirichlet/multinomial draws, D=1 document of 8 tokens
        c = SimulationConfig(k=3, v=2, beta=[3.0, 1.0], alpha=0.1)
        rng = np.random.default_rng(2024)
        reps = 200_000
        phi = rng.dirichlet([3.0, 1.0], size=(reps, 3))
        theta = rng.dirichlet([0.1] * 3, size=reps)
        p = np.einsum("rk,rkv->rv", theta, phi)
        counts = rng.multinomial(8, p)
        mc = counts.mean(axis=0)
        expected = expected_term_frequencies(c, 8)
        np.testing.assert_allclose(expected, [6, 2])
        np.testing.assert_allclose(mc, expected, rtol=0.01)

    def test_monte_carlo_power_law(self):
        v = 100
        c = SimulationConfig(k=5, v=v, beta={"power_law": {"exponent": 1.0, "magnitude": 1.0}})
        rng = np.random.default_rng(7)
        beta = c.beta_vector()
        reps = 4000
        phi = rng.dirichlet(beta, size=(reps, 5))
        theta = rng.dirichlet([c.alpha_vector()[0]] * 5, size=reps)
        p = np.einsum("rk,rkv->rv", theta, phi)
        agg = rng.multinomial(250, p).sum(axis=0).astype(float)
        expected = expected_term_frequencies(c, 1e6)
        assert expected.sum() == pytest.approx(1e6)
        np.testing.assert_allclose(expected * np.arange(1, v + 1), expected[0])
        assert np.corrcoef(agg, expected)[0, 1] > 0.999

    @pytest.mark.slow
    @pytest.mark.parametrize("seed", [1, 2, 3, 4, 5])
    def test_unit_magnitude_zipf_slope(self, seed):
        # with magnitude 1 each topic is very sparse, so the realised aggregate
        # only tracks beta once many topics are mixed; K=50 gives slopes near -1.5
        c = SimulationConfig(k=1000, d=2000, v=100, lam=200,
                             beta={"power_law": {"exponent": 1.0, "magnitude": 1.0}}, seed=seed)
        slope, _ = zipf_fit(simulate_corpus(c).dtm.term_totals())
        assert -1.2 <= slope <= -0.8

    def test_rejects_nonpositive_total(self):
        with pytest.raises(ValueError):
            expected_term_frequencies(SimulationConfig(), 0)


class TestZipfFit:
    def test_exact_inverse_rank(self):
        f = 1000.0 / np.arange(1, 51)
        slope, r2 = zipf_fit(np.random.default_rng(0).permutation(f))
        assert abs(slope + 1) < 1e-9 and abs(r2 - 1) < 1e-9

    def test_inverse_square(self):
        slope, _ = zipf_fit(5.0 / np.arange(1, 40) ** 2)
        assert abs(slope + 2) < 1e-9

    def test_flat(self):
        slope, r2 = zipf_fit(np.full(10, 3.0))
        assert slope == 0 and r2 == 1.0

    def test_zeros_dropped(self):
        f = np.concatenate([1.0 / np.arange(1, 11), np.zeros(5)])
        assert zipf_fit(f)[0] == pytest.approx(-1.0, abs=1e-9)

    def test_too_few(self):
        with pytest.raises(ValueError):
            zipf_fit([3, 0, 1])


def test_vocabulary_labels_sort_like_ranks():
    labels = vocabulary_labels(120000)
    assert labels[:2] == ["t000001", "t000002"]
    assert labels == sorted(labels)
