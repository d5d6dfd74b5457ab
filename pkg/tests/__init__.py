"""
Test Suite for the RIS FIC Simulator
Unit tests for the simulator components.
"""

import math

__version__ = "0.1.0"

# Test configuration
TEST_SEED = 20240611
TEST_SIGMA_SQ = 10.0 ** 1.5  # SNR -15 dB with unit transmit power
TEST_SPACING = 0.5

# Small arrays keep the unit tests fast
SMALL_NUM_S = 2
SMALL_NUM_D = 2
SMALL_NUM_RIS = 8

# Single-path scenario ranges (radians)
SINGLE_PATH_SCENARIO = {
    "num_antennas_s": SMALL_NUM_S,
    "num_antennas_d": SMALL_NUM_D,
    "num_ris_elements": SMALL_NUM_RIS,
    "spacing_over_lambda": TEST_SPACING,
    "num_paths_g": 1,
    "num_paths_h": 1,
    "seed": TEST_SEED,
}

# Reference experiment geometry
REFERENCE_SCENARIO = {
    "num_antennas_s": 2,
    "num_antennas_d": 4,
    "num_ris_elements": 120,
    "spacing_over_lambda": 0.5,
    "num_paths_g": 3,
    "num_paths_h": 3,
    "eta_h_range": [-math.pi / 3, math.pi / 3],
}
