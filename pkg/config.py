"""
Configuration module for the RIS FIC simulator
Contains all constants, defaults, and experiment presets.
"""

import math
import os
from typing import Dict, List, Tuple

# === ARRAY CONFIGURATION ===
DEFAULT_SPACING_OVER_LAMBDA = 0.5  # d = lambda/2

# Reference scenario (uplink S -> I -> D)
DEFAULT_NUM_ANTENNAS_S = 2
DEFAULT_NUM_ANTENNAS_D = 4
DEFAULT_NUM_RIS_ELEMENTS = 120

# === CHANNEL CONFIGURATION ===
DEFAULT_NUM_PATHS_G = 3
DEFAULT_NUM_PATHS_H = 3

# Angle ranges in radians, per channel role
DEFAULT_ANGLE_RANGES: Dict[str, Tuple[float, float]] = {
    "theta_g": (-math.pi, math.pi),            # AoD at S
    "eta_g": (-math.pi / 2, math.pi / 2),      # AoA at RIS
    "theta_h": (-math.pi / 2, math.pi / 2),    # AoD at RIS
    "eta_h": (-math.pi / 3, math.pi / 3),      # AoA at D (formula, not the 30 deg prose)
}

# RIS angles are measured from the firing direction of the element line
RIS_ANGLE_LIMIT = math.pi / 2

POWER_PROFILE_TOLERANCE = 1e-12
DEFAULT_SCENARIO_SEED = 2024

# === NOISE CONFIGURATION ===
DEFAULT_SNR_DB = -15.0
DEFAULT_K_VALUES = [1]

# === FIC CONFIGURATION ===
DEFAULT_NUM_STARTS = 1

# Constant-size schedules (L_i fixed for all iterations)
REFERENCE_CONSTANT_SIZES = [9, 16, 25, 36, 64]

# Variable schedules: (leading sizes, size for the remaining iterations)
REFERENCE_VARIABLE_HEADS = [
    ([25], 9),
    ([36], 9),
    ([64, 36], 9),
]

REFERENCE_BAS_SIZES = [9, 16, 25, 36, 64, 100, 225, 400]
REFERENCE_NUM_STARTS = [1, 4]

DEFAULT_SCHEDULE_ITERATIONS = 6
DEFAULT_METHODS = ["FIC", "BAS"]
SUPPORTED_METHODS = ["FIC", "BAS"]

# === ORACLE CONFIGURATION ===
DEFAULT_ORACLE_RESOLUTION = 256
DEFAULT_ORACLE_REFINE_ROUNDS = 3
DEFAULT_ORACLE_REFINE_POINTS = 33
MIN_ORACLE_RESOLUTION = 32
ORACLE_REFINE_SHRINK = 10.0
ORACLE_CHUNK_SIZE = 4096

# === CACHE CONFIGURATION ===
CACHE_DIR = os.getenv("FIC_CACHE_DIR", os.path.join("cache", "oracle"))
CACHE_FORMAT_VERSION = 1

# === CAMPAIGN CONFIGURATION ===
DEFAULT_TRIALS = 100
DEFAULT_BASE_SEED = 12345
DEFAULT_WORKERS = 4
DEFAULT_OUTPUT_PATH = os.path.join("results", "campaign.csv")

REPORT_COLUMNS: List[str] = [
    "method",
    "schedule",
    "K",
    "P",
    "I",
    "T",
    "mean_eps",
    "std_eps",
    "negative_fraction",
    "trials",
]

TRACE_COLUMNS: List[str] = [
    "step",
    "chain",
    "iteration",
    "ell",
    "theta",
    "eta",
    "estimated_rate",
    "selected",
]

# Float format for every CSV artifact
CSV_FLOAT_FORMAT = "%.12g"

# Loss level reported in the post-run summary
SUMMARY_TARGET_EPS = 0.10

# === LOGGING CONFIGURATION ===
LOG_LEVELS = {
    "DEBUG": 0,
    "INFO": 1,
    "WARNING": 2,
    "ERROR": 3,
    "CRITICAL": 4
}

DEFAULT_LOG_LEVEL = os.getenv("FIC_LOG_LEVEL", "INFO")
LOG_FORMAT = "[{timestamp}] {level}: {message}"
LOG_DIR = os.getenv("FIC_LOG_DIR", "logs")
LOG_FILE_PREFIX = "fic_sim"
MAX_LOG_BUFFER = 1000

# === CONFIG FILES ===
CONFIG_DIR = "config"
DEFAULT_CONFIG_FILE = os.path.join(CONFIG_DIR, "campaign.toml")

# === PERFORMANCE MONITORING ===
SLOW_TRIAL_SECONDS = 30.0
MEMORY_GROWTH_THRESHOLD = 0.50  # 50% over baseline RSS
