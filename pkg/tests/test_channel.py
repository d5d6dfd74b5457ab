"""
Unit tests for Channel Model Module
"""

import math
import os
import sys
import tempfile
import unittest

import numpy as np

# Add project root to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from modules.channel import (ArrayGeometry, ChannelScenario, PathSet, array_response, batch_cascade,
                             build_channels, cascade_basis, compose_cascade, sample_channel_pair,
                             steering_matrix, synthesize_channel)
from modules.rate_estimator import achievable_rate, achievable_rates
from modules.ris_config import AnglePair, alignment_gain, config_from_angles, phases_from_angles
from tests import SINGLE_PATH_SCENARIO, TEST_SEED, TEST_SIGMA_SQ


class TestArrayResponse(unittest.TestCase):
    """Test cases for steering vectors and geometric channels."""

    def test_broadside_response_is_all_ones(self):
        """Test that angle 0 gives a vector of ones."""
        response = array_response(0.0, ArrayGeometry(5))
        np.testing.assert_allclose(response, np.ones(5))

    def test_half_wavelength_thirty_degrees(self):
        """Test entries exp(j*pi*n/2) for d = lambda/2 and angle pi/6."""
        response = array_response(math.pi / 6, ArrayGeometry(4, 0.5))
        np.testing.assert_allclose(response, [1, 1j, -1, -1j], atol=1e-12)

    def test_non_finite_angle_rejected(self):
        """Test that a NaN angle raises."""
        with self.assertRaises(ValueError):
            array_response(float("nan"), ArrayGeometry(4))

    def test_steering_matrix_columns(self):
        """Test that steering_matrix stacks array_response column-wise."""
        geometry = ArrayGeometry(6, 0.4)
        angles = [-0.7, 0.1, 1.2]
        matrix = steering_matrix(angles, geometry)
        self.assertEqual(matrix.shape, (6, 3))
        for column, angle in enumerate(angles):
            np.testing.assert_allclose(matrix[:, column], array_response(angle, geometry))

    def test_invalid_geometry(self):
        """Test geometry validation."""
        with self.assertRaises(ValueError):
            ArrayGeometry(0)
        with self.assertRaises(ValueError):
            ArrayGeometry(4, 0.0)

    def test_single_path_channel(self):
        """Test G = rho * a_rx(arrival) a_tx(departure)^H for one path."""
        rx, tx = ArrayGeometry(4), ArrayGeometry(3)
        gain = 0.3 - 0.8j
        paths = PathSet([gain], [0.4], [-0.9])
        expected = gain * np.outer(array_response(-0.9, rx), array_response(0.4, tx).conj())
        np.testing.assert_allclose(synthesize_channel(paths, rx, tx), expected, atol=1e-12)

    def test_two_path_sum_form(self):
        """Test that the matrix form equals the sum of per-path outer products."""
        rx, tx = ArrayGeometry(5, 0.4), ArrayGeometry(3)
        paths = PathSet([0.7 - 0.2j, -0.4 + 1.1j], [0.3, -1.2], [-0.6, 0.9])
        expected = sum(gain * np.outer(array_response(arrival, rx), array_response(departure, tx).conj())
                       for gain, departure, arrival in zip(paths.gains, paths.departure_angles,
                                                           paths.arrival_angles))
        np.testing.assert_allclose(synthesize_channel(paths, rx, tx), expected, rtol=0, atol=1e-12)

    def test_channel_is_linear_in_gains(self):
        """Test that scaling every gain by c scales the channel by c."""
        rx, tx = ArrayGeometry(4), ArrayGeometry(6)
        rng = np.random.default_rng(TEST_SEED)
        gains = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        departure, arrival = rng.uniform(-1.5, 1.5, size=3), rng.uniform(-1.5, 1.5, size=3)
        scale = -1.7 + 0.6j
        base = synthesize_channel(PathSet(gains, departure, arrival), rx, tx)
        scaled = synthesize_channel(PathSet(scale * gains, departure, arrival), rx, tx)
        np.testing.assert_allclose(scaled, scale * base, rtol=0, atol=1e-12)


class TestPathSet(unittest.TestCase):
    """Test cases for PathSet."""

    def test_length_mismatch(self):
        """Test that differing list lengths raise."""
        with self.assertRaises(ValueError):
            PathSet([1.0, 1.0], [0.1], [0.2, 0.3])

    def test_arrays_are_read_only(self):
        """Test that PathSet arrays cannot be modified in place."""
        paths = PathSet([1.0], [0.1], [0.2])
        with self.assertRaises(ValueError):
            paths.gains[0] = 2.0

    def test_csv_export_and_load(self):
        """Test PathSet CSV export and reload."""
        paths = PathSet([0.5 + 0.25j, -1.0j], [0.1, -0.2], [1.0, 0.3])
        with tempfile.TemporaryDirectory() as tmp:
            filepath = os.path.join(tmp, "paths.csv")
            paths.to_csv(filepath)
            loaded = PathSet.from_csv(filepath)
        np.testing.assert_array_equal(loaded.gains, paths.gains)
        np.testing.assert_array_equal(loaded.departure_angles, paths.departure_angles)
        np.testing.assert_array_equal(loaded.arrival_angles, paths.arrival_angles)

    def test_csv_round_trip_is_exact(self):
        """Test that random full-precision gains and angles reload bit-for-bit."""
        rng = np.random.default_rng(TEST_SEED)
        paths = PathSet(rng.standard_normal(50) + 1j * rng.standard_normal(50),
                        rng.uniform(-math.pi / 2, math.pi / 2, size=50),
                        rng.uniform(-math.pi / 2, math.pi / 2, size=50))
        with tempfile.TemporaryDirectory() as tmp:
            filepath = os.path.join(tmp, "paths.csv")
            paths.to_csv(filepath)
            loaded = PathSet.from_csv(filepath)
        np.testing.assert_array_equal(loaded.gains, paths.gains)
        np.testing.assert_array_equal(loaded.departure_angles, paths.departure_angles)
        np.testing.assert_array_equal(loaded.arrival_angles, paths.arrival_angles)


class TestChannelScenario(unittest.TestCase):
    """Test cases for scenario validation and channel sampling."""

    def setUp(self):
        """Set up test fixtures."""
        self.scenario = ChannelScenario.from_dict(SINGLE_PATH_SCENARIO)

    def test_defaults(self):
        """Test the default scenario geometry and M = min(L_G, L_H)."""
        scenario = ChannelScenario()
        self.assertEqual(scenario.ris.num_elements, 120)
        self.assertEqual(scenario.default_num_blocks, 3)
        self.assertAlmostEqual(sum(scenario.power_profile_g), 1.0, places=12)

    def test_power_profile_must_sum_to_one(self):
        """Test that a profile not summing to one raises."""
        with self.assertRaises(ValueError):
            ChannelScenario(num_paths_g=2, power_profile_g=(0.5, 0.6))

    def test_unknown_angle_range(self):
        """Test that an unknown range name raises."""
        with self.assertRaises(ValueError):
            ChannelScenario(angle_ranges={"theta_x": (0.0, 1.0)})

    def test_dict_round_trip(self):
        """Test that to_dict/from_dict preserve the scenario."""
        rebuilt = ChannelScenario.from_dict(self.scenario.to_dict())
        self.assertEqual(rebuilt.to_dict(), self.scenario.to_dict())

    def test_sampling_is_seed_deterministic(self):
        """Test that identical streams give identical realizations."""
        first = sample_channel_pair(self.scenario, np.random.default_rng(TEST_SEED))
        second = sample_channel_pair(self.scenario, np.random.default_rng(TEST_SEED))
        for a, b in zip(first, second):
            np.testing.assert_array_equal(a.gains, b.gains)
            np.testing.assert_array_equal(a.departure_angles, b.departure_angles)

    def test_sampled_angles_within_ranges(self):
        """Test that sampled angles respect the scenario ranges."""
        scenario = ChannelScenario.from_dict({**SINGLE_PATH_SCENARIO, "num_paths_g": 3, "num_paths_h": 3})
        rng = np.random.default_rng(TEST_SEED)
        for _ in range(20):
            paths_g, paths_h = sample_channel_pair(scenario, rng)
            self.assertTrue(np.all(np.abs(paths_g.arrival_angles) <= math.pi / 2))
            self.assertTrue(np.all(np.abs(paths_h.departure_angles) <= math.pi / 2))
            self.assertTrue(np.all(np.abs(paths_h.arrival_angles) <= math.pi / 3))

    def test_negative_seed_rejected(self):
        """Test that a negative scenario seed raises and zero is accepted."""
        with self.assertRaises(ValueError):
            ChannelScenario(seed=-1)
        self.assertEqual(ChannelScenario(seed=0).seed, 0)

    def test_gain_power_matches_profile(self):
        """Test E|rho_l|^2 = 1/L within 5% for L = 2 over 10^4 draws."""
        scenario = ChannelScenario.from_dict({**SINGLE_PATH_SCENARIO, "num_paths_g": 2, "num_paths_h": 2})
        rng = np.random.default_rng(TEST_SEED)
        draws = [sample_channel_pair(scenario, rng) for _ in range(10000)]
        for index in (0, 1):
            power_g = np.mean([abs(paths_g.gains[index]) ** 2 for paths_g, _ in draws])
            power_h = np.mean([abs(paths_h.gains[index]) ** 2 for _, paths_h in draws])
            self.assertAlmostEqual(power_g / 0.5, 1.0, delta=0.05)
            self.assertAlmostEqual(power_h / 0.5, 1.0, delta=0.05)

    def test_build_channel_shapes(self):
        """Test H is N_D x N_I and G is N_I x N_S."""
        paths_g, paths_h = sample_channel_pair(self.scenario)
        h, g = build_channels(self.scenario, paths_g, paths_h)
        self.assertEqual(h.shape, (2, 8))
        self.assertEqual(g.shape, (8, 2))


class TestCascade(unittest.TestCase):
    """Test cases for the cascade channel."""

    def setUp(self):
        """Set up test fixtures."""
        rng = np.random.default_rng(TEST_SEED)
        self.h = rng.standard_normal((3, 6)) + 1j * rng.standard_normal((3, 6))
        self.g = rng.standard_normal((6, 2)) + 1j * rng.standard_normal((6, 2))
        self.phases = rng.uniform(0, 2 * np.pi, size=(5, 6))

    def test_compose_matches_matrix_product(self):
        """Test Q = H diag(exp(j*phi)) G."""
        expected = self.h @ np.diag(np.exp(1j * self.phases[0])) @ self.g
        np.testing.assert_allclose(compose_cascade(self.h, self.phases[0], self.g), expected, atol=1e-12)

    def test_zero_configuration_is_plain_product(self):
        """Test that all-zero phases give Q = H G."""
        np.testing.assert_allclose(compose_cascade(self.h, np.zeros(6), self.g), self.h @ self.g,
                                   rtol=0, atol=1e-12)

    def test_frobenius_norm_bound(self):
        """Test ||H Phi G||_F <= ||H||_F ||G||_F for every configuration."""
        bound = np.linalg.norm(self.h) * np.linalg.norm(self.g)
        for phases in self.phases:
            self.assertLessEqual(np.linalg.norm(compose_cascade(self.h, phases, self.g)), bound)

    def test_dimension_mismatch(self):
        """Test that a wrong-size configuration raises."""
        with self.assertRaises(ValueError):
            compose_cascade(self.h, np.zeros(5), self.g)

    def test_batch_matches_single(self):
        """Test that batched cascades match one-at-a-time composition."""
        batch = batch_cascade(cascade_basis(self.h, self.g), self.phases)
        for row, phases in enumerate(self.phases):
            np.testing.assert_allclose(batch[row], compose_cascade(self.h, phases, self.g), atol=1e-12)


class TestAlignmentIdentity(unittest.TestCase):
    """Aligned single-path configurations reach the closed-form optimum."""

    def test_aligned_configuration_is_optimal(self):
        """Test gain N_I, the closed-form rate, and dominance over random configurations."""
        scenario = ChannelScenario.from_dict({**SINGLE_PATH_SCENARIO, "num_ris_elements": 32,
                                              "num_antennas_d": 4})
        geometry = scenario.ris
        n_i, n_s, n_d = 32, scenario.source.num_elements, scenario.destination.num_elements
        rng = np.random.default_rng(TEST_SEED)

        for _ in range(100):
            paths_g, paths_h = sample_channel_pair(scenario, rng)
            h, g = build_channels(scenario, paths_g, paths_h)
            pair = AnglePair(float(paths_h.departure_angles[0]), float(paths_g.arrival_angles[0]))
            config = config_from_angles(pair, geometry)

            self.assertAlmostEqual(alignment_gain(pair, config, geometry) / n_i, 1.0, delta=1e-9)

            power = abs(paths_g.gains[0] * paths_h.gains[0]) ** 2
            closed_form = math.log2(1.0 + power * n_i ** 2 * n_s * n_d / TEST_SIGMA_SQ)
            rate = achievable_rate(compose_cascade(h, config, g), TEST_SIGMA_SQ)
            self.assertAlmostEqual(rate / closed_form, 1.0, delta=1e-9)

            random_phases = rng.uniform(0, 2 * np.pi, size=(1000, n_i))
            random_rates = achievable_rates(batch_cascade(cascade_basis(h, g), random_phases), TEST_SIGMA_SQ)
            self.assertGreaterEqual(rate, float(np.max(random_rates)))

    def test_phases_depend_on_sine_difference_only(self):
        """Test that pairs with equal sin(theta) - sin(eta) give equal phases."""
        geometry = ArrayGeometry(10)
        first = phases_from_angles([math.asin(0.5)], [0.0], geometry)
        second = phases_from_angles([math.asin(0.75)], [math.asin(0.25)], geometry)
        np.testing.assert_allclose(np.exp(1j * first), np.exp(1j * second), atol=1e-12)


if __name__ == '__main__':
    unittest.main()
