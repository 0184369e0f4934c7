import numpy as np
import pytest

from pglearn.errors import GenerationError
from pglearn.graphs import cartesian_sum, edge_set, validate_laplacian
from pglearn.signals import smoothness_full
from pglearn.synthetic import (
    CommunityGraphConfig,
    apply_mask,
    community_graph,
    default_noise_sigma,
    sample_smooth_signals,
)

from conftest import random_data


class TestCommunityGraph:
    def test_forced_single_edge(self):
        L = community_graph(CommunityGraphConfig(n=2, k=1, p_in=1.0, p_out=1.0, seed=3))
        assert edge_set(L, 0.0) == {(1, 2)}
        w = -L[1, 0]
        assert 0.5 <= w <= 1.5
        assert np.array_equal(L, np.array([[w, -w], [-w, w]]))

    def test_disconnected_cliques_exhaust(self):
        cfg = CommunityGraphConfig(n=10, k=2, p_in=1.0, p_out=0.0, seed=0)
        with pytest.raises(GenerationError):
            community_graph(cfg)

    def test_deterministic(self):
        cfg = CommunityGraphConfig(n=10, k=2, p_in=0.8, p_out=0.05, seed=42)
        assert np.array_equal(community_graph(cfg), community_graph(cfg))

    def test_different_seeds_differ(self):
        a = community_graph(CommunityGraphConfig(n=12, k=3, seed=1))
        b = community_graph(CommunityGraphConfig(n=12, k=3, seed=2))
        assert not np.array_equal(a, b)

    def test_valid_laplacian(self):
        for seed in range(5):
            L = community_graph(CommunityGraphConfig(n=9, k=3, seed=seed))
            assert validate_laplacian(L, 1e-12).ok

    def test_config_validation(self):
        with pytest.raises(ValueError):
            CommunityGraphConfig(n=3, k=5)
        with pytest.raises(ValueError):
            CommunityGraphConfig(n=3, k=1, p_in=0.2, p_out=0.5)
        with pytest.raises(ValueError):
            CommunityGraphConfig(n=3, k=1, weight_low=0.0)


class TestSampleSmoothSignals:
    def test_two_node_spans_difference_vector(self):
        L = np.array([[1.0, -1.0], [-1.0, 1.0]])
        x = sample_smooth_signals(L, 1, 2, 1, sigma=0.0, seed=0).data[:, 0]
        assert abs(x[0] + x[1]) <= 1e-10

    def test_zero_mean_across_seeds(self):
        L = np.array([[1.0, -1.0], [-1.0, 1.0]])
        draws = np.array(
            [sample_smooth_signals(L, 1, 2, 1, sigma=0.0, seed=s).data[:, 0] for s in range(200)]
        )
        # component sd is sqrt(1/2)/sqrt(2); 200-draw mean within 4 sigma
        assert np.max(np.abs(draws.mean(axis=0))) <= 4 * np.sqrt(0.5) / np.sqrt(200)

    def test_smoother_than_white_noise(self):
        # Monte-Carlo comparison against a white-noise baseline
        lp = community_graph(CommunityGraphConfig(n=8, k=2, p_in=0.8, p_out=0.02, seed=5))
        lq = community_graph(CommunityGraphConfig(n=9, k=3, p_in=0.8, p_out=0.02, seed=6))
        ln = cartesian_sum(lp, lq)
        n = 72
        smooth_ratios = []
        white_ratios = []
        for s in range(100):
            x = sample_smooth_signals(ln, 1, 8, 9, sigma=0.0, seed=s).data[:, 0]
            smooth_ratios.append(smoothness_full(x[:, None], ln) / (x @ x))
            g = np.random.default_rng(10_000 + s).standard_normal(n)
            white_ratios.append(smoothness_full(g[:, None], ln) / (g @ g))
        assert np.mean(smooth_ratios) < 0.5 * np.mean(white_ratios)

    def test_expected_energy_matches_rank(self):
        # E[x^T L x] = (number of positive eigenvalues) for noiseless draws
        lp = community_graph(CommunityGraphConfig(n=4, k=2, seed=5))
        lq = community_graph(CommunityGraphConfig(n=6, k=2, seed=6))
        ln = cartesian_sum(lp, lq)
        rank = int(np.sum(np.linalg.eigvalsh(ln) > 1e-9))
        data = sample_smooth_signals(ln, 400, 4, 6, sigma=0.0, seed=7)
        per_snapshot = smoothness_full(data, ln) / data.t
        assert abs(per_snapshot - rank) <= 0.1 * rank

    def test_orthogonal_to_ones_when_connected(self):
        lp = community_graph(CommunityGraphConfig(n=5, k=2, seed=1))
        lq = community_graph(CommunityGraphConfig(n=4, k=2, seed=2))
        data = sample_smooth_signals(cartesian_sum(lp, lq), 10, 5, 4, sigma=0.0, seed=3)
        assert np.max(np.abs(data.data.sum(axis=0))) <= 1e-8

    def test_requires_symmetric(self):
        L = np.array([[1.0, -1.0], [0.0, 1.0]])
        with pytest.raises(ValueError, match="symmetric"):
            sample_smooth_signals(L, 1, 2, 1)

    def test_deterministic(self):
        L = np.array([[1.0, -1.0], [-1.0, 1.0]])
        a = sample_smooth_signals(L, 5, 2, 1, sigma=0.3, seed=11)
        b = sample_smooth_signals(L, 5, 2, 1, sigma=0.3, seed=11)
        assert np.array_equal(a.data, b.data)


def test_default_noise_sigma():
    L = np.array([[1.0, -1.0], [-1.0, 1.0]])
    # positive spectrum {2}: 0.1 * sqrt((1/2) / 2)
    assert default_noise_sigma(L) == pytest.approx(0.1 * np.sqrt(0.25))
    assert default_noise_sigma(np.zeros((3, 3))) == 0.0


class TestApplyMask:
    def test_identity_when_nothing_hidden(self, rng):
        data = random_data(rng, 3, 4, 5)
        masked = apply_mask(data, 0.0, 0.0, seed=0)
        assert np.array_equal(masked.y, data.data)
        assert np.all(masked.mask == 1)

    def test_observed_count_within_binomial_band(self, rng):
        data = random_data(rng, 10, 10, 20)
        masked = apply_mask(data, 0.5, 0.0, seed=4)
        count = int(masked.mask.sum())
        total = 2000
        center = 0.5 * total
        half_width = 2.576 * np.sqrt(total * 0.25)
        assert center - half_width <= count <= center + half_width

    def test_deterministic_mask(self, rng):
        data = random_data(rng, 4, 4, 6)
        a = apply_mask(data, 0.3, 0.1, seed=9)
        b = apply_mask(data, 0.3, 0.1, seed=9)
        assert np.array_equal(a.mask, b.mask)
        assert np.array_equal(a.y, b.y)

    def test_bad_fraction(self, rng):
        data = random_data(rng, 2, 2, 2)
        with pytest.raises(ValueError):
            apply_mask(data, 1.0)
