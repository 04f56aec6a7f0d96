import numpy as np
import pytest

from risd2d import (InvalidGeometryError, InvalidParameterError, build_channels,
                    random_geometry, sample_rician, steering_vector)
from risd2d.channel import build_channel_batch, element_grid, path_loss_linear

from conftest import make_config


class TestSteeringVector:
    def test_single_element_is_one(self):
        np.testing.assert_allclose(steering_vector(1, 1.3, 2.7), [1.0 + 0j])

    def test_zero_azimuth_broadside(self):
        # sin(0) = 0 and cos(pi/2) = 0 kill both exponent terms
        np.testing.assert_allclose(steering_vector(4, 0.0, np.pi / 2),
                                   np.ones(4), atol=1e-12)

    def test_four_elements_quarter_turn(self):
        # az = el = pi/2: phase reduces to pi * x with x = [0, 0, 1, 1]
        expected = np.exp(1j * np.pi * np.array([0, 0, 1, 1]))
        np.testing.assert_allclose(steering_vector(4, np.pi / 2, np.pi / 2),
                                   expected, atol=1e-12)

    def test_unit_modulus(self):
        v = steering_vector(25, 0.7, 1.9)
        np.testing.assert_allclose(np.abs(v), 1.0, rtol=0, atol=3e-16)

    def test_deterministic(self):
        a = steering_vector(16, 0.3, 0.4)
        b = steering_vector(16, 0.3, 0.4)
        assert np.array_equal(a, b)

    def test_rejects_non_square(self):
        with pytest.raises(InvalidGeometryError):
            steering_vector(15, 0.0, 0.0)

    def test_grid_map(self):
        x, y = element_grid(9)
        assert list(x) == [0, 0, 0, 1, 1, 1, 2, 2, 2]
        assert list(y) == [0, 1, 2, 0, 1, 2, 0, 1, 2]


class TestSampleRician:
    def test_infinite_factor_is_los(self, rng):
        los = steering_vector(16, 0.5, 1.1)
        h = sample_rician(los, 1e12, rng)
        np.testing.assert_allclose(h, los, atol=1e-5)

    def test_zero_factor_unit_power(self, rng):
        los = steering_vector(4, 0.5, 1.1)
        h = sample_rician(los, 0.0, rng, size=100_000)
        assert abs(np.mean(np.abs(h) ** 2) - 1.0) < 0.02

    def test_mean_matches_los_weight(self, rng):
        los = steering_vector(4, 0.5, 1.1)
        h = sample_rician(los, 10.0, rng, size=100_000)
        np.testing.assert_allclose(h.mean(axis=0), np.sqrt(10 / 11) * los, atol=0.02)

    def test_entry_variance(self, rng):
        los = steering_vector(4, 0.2, 0.9)
        kappa = 3.0
        h = sample_rician(los, kappa, rng, size=100_000)
        var = np.var(h, axis=0).mean()
        # per-entry variance 1/(kappa+1), within 3 standard errors
        assert abs(var - 1 / (kappa + 1)) < 3 * (1 / (kappa + 1)) / np.sqrt(100_000)

    def test_negative_factor_rejected(self, rng):
        with pytest.raises(InvalidParameterError):
            sample_rician(steering_vector(4, 0, 0), -0.1, rng)


class TestBuildChannels:
    def test_degenerate_los(self, rng):
        cfg = make_config(n_elements=9, n_pairs=1, rician_a=1e12, rician_b=1e12)
        chs = build_channels(cfg, rng)
        geom = cfg.geometry
        los_a = steering_vector(9, geom.arrival_az[0], geom.arrival_el[0])
        los_b = steering_vector(9, geom.departure_az[0], geom.departure_el[0])
        np.testing.assert_allclose(chs.g_a[0], los_a, atol=1e-5)
        np.testing.assert_allclose(chs.g_b[0], los_b, atol=1e-5)

    def test_pairs_uncorrelated(self, rng):
        cfg = make_config(n_elements=4, n_pairs=2, rician_a=0.0, rician_b=0.0)
        g_a, _ = build_channel_batch(cfg, rng, 10_000)
        corr = np.mean(g_a[:, 0, :] * np.conj(g_a[:, 1, :]))
        assert abs(corr) < 0.05

    def test_norm_moment(self, rng):
        cfg = make_config(n_elements=4, n_pairs=1, alpha_a=4.0, rician_a=0.0)
        g_a, _ = build_channel_batch(cfg, rng, 100_000)
        mean_gain = np.mean(np.sum(np.abs(g_a[:, 0, :]) ** 2, axis=-1)) / 4
        assert abs(mean_gain - 4.0) < 0.08

    def test_seed_reproducible(self):
        cfg = make_config(n_elements=9, n_pairs=3)
        a = build_channels(cfg, np.random.default_rng(42))
        b = build_channels(cfg, np.random.default_rng(42))
        assert np.array_equal(a.g_a, b.g_a) and np.array_equal(a.g_b, b.g_b)


def test_random_geometry_wraps_angles():
    geom = random_geometry(16, 5, seed=3)
    for arr in (geom.arrival_az, geom.arrival_el, geom.departure_az, geom.departure_el):
        assert np.all((arr >= 0) & (arr < 2 * np.pi))


def test_path_loss():
    np.testing.assert_allclose(path_loss_linear(1.0), 1e-3)
    assert path_loss_linear(10.0) < path_loss_linear(5.0)
    with pytest.raises(InvalidParameterError):
        path_loss_linear(0.0)
