"""
RIS FIC Simulator Modules Package
Channel model, RIS configuration, rate estimation, FIC search, reference
searches, and the Monte Carlo campaign harness.
"""

__version__ = "0.1.0"

# Package metadata
PACKAGE_NAME = "ris_fic_simulator_modules"
DESCRIPTION = "Modular components for the RIS fast iterative configuration simulator"

# Import main classes for easy access
from .logging_utils import SimLogger
from .channel import ArrayGeometry, ChannelScenario, PathSet, compose_cascade, sample_channel_pair
from .ris_config import AnglePair, RisConfig, config_from_angles
from .rate_estimator import NoiseModel, achievable_rate, estimate_cascade
from .fic_optimizer import FicOptimizer, FicResult, GridSchedule, estimation_time
from .reference_search import OracleCache, OracleSpec, ReferenceSearch, rate_loss
from .campaign import CampaignConfig, CampaignRunner, compare_fic_bas, load_report
from .config_manager import ConfigManager
from .performance_monitor import CampaignMonitor
from .utils import cleanup_resources, validate_numeric_input, validate_string_input

__all__ = [
    "SimLogger",
    "ArrayGeometry",
    "ChannelScenario",
    "PathSet",
    "compose_cascade",
    "sample_channel_pair",
    "AnglePair",
    "RisConfig",
    "config_from_angles",
    "NoiseModel",
    "achievable_rate",
    "estimate_cascade",
    "FicOptimizer",
    "FicResult",
    "GridSchedule",
    "estimation_time",
    "OracleCache",
    "OracleSpec",
    "ReferenceSearch",
    "rate_loss",
    "CampaignConfig",
    "CampaignRunner",
    "compare_fic_bas",
    "load_report",
    "ConfigManager",
    "CampaignMonitor",
    "cleanup_resources",
    "validate_numeric_input",
    "validate_string_input"
]
