"""
Configuration Management Module
Loads, validates, and saves campaign configuration files (TOML) and
builds CampaignConfig objects from them.
"""

import copy
import json
import os
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from typing import Any, Dict, List, Optional, Tuple

from config import *
from modules.campaign import CampaignConfig
from modules.channel import ChannelScenario
from modules.fic_optimizer import GridSchedule
from modules.reference_search import OracleSpec
from modules.utils import ensure_directory

REFERENCE_PRESET = "reference"


def reference_schedules(iterations: int = DEFAULT_SCHEDULE_ITERATIONS) -> List[GridSchedule]:
    """Constant and variable grid schedules of the reference experiments."""
    schedules = [GridSchedule.constant(size, iterations) for size in REFERENCE_CONSTANT_SIZES]
    schedules += [GridSchedule.variable(head, tail, iterations) for head, tail in REFERENCE_VARIABLE_HEADS]
    return schedules


def _toml_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, float)):
        return repr(value)
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_toml_value(item) for item in value) + "]"
    raise ValueError(f"Cannot write {type(value).__name__} to a config file")


def dumps_toml(config: Dict[str, Dict[str, Any]]) -> str:
    """Serialize a two-level config dict; None values are left out."""
    lines = []
    for section, values in config.items():
        if not isinstance(values, dict):
            continue
        lines.append(f"[{section}]")
        for key, value in values.items():
            if value is not None:
                lines.append(f"{key} = {_toml_value(value)}")
        lines.append("")
    return "\n".join(lines)


class ConfigManager:
    """Manages campaign configuration files."""

    def __init__(self, logger, config_dir: str = CONFIG_DIR):
        """Initialize configuration manager."""
        self.logger = logger
        self.config_dir = config_dir

        # Missing keys take these values; None means "derive at build time"
        scenario = ChannelScenario().to_dict()
        # Equal split over however many paths the file asks for
        scenario.update(power_profile_g=None, power_profile_h=None)
        self.default_config = {
            "scenario": scenario,
            "noise": {
                "snr_db": DEFAULT_SNR_DB,
                "est_noise_sigma_sq": None,
                "k_values": list(DEFAULT_K_VALUES),
            },
            "search": {
                "schedules": [list(GridSchedule.variable([64, 36], 9, DEFAULT_SCHEDULE_ITERATIONS).sizes)],
                "num_starts": [DEFAULT_NUM_STARTS],
                "bas_sizes": list(REFERENCE_BAS_SIZES),
                "methods": list(DEFAULT_METHODS),
                "num_blocks": None,
                "quantization_bits": None,
            },
            "oracle": {
                "angle_resolution": DEFAULT_ORACLE_RESOLUTION,
                "refine_rounds": DEFAULT_ORACLE_REFINE_ROUNDS,
                "refine_points": DEFAULT_ORACLE_REFINE_POINTS,
                "use_cache": True,
            },
            "campaign": {
                "trials": DEFAULT_TRIALS,
                "base_seed": DEFAULT_BASE_SEED,
                "workers": DEFAULT_WORKERS,
                "output_path": DEFAULT_OUTPUT_PATH,
            },
        }

    def load_config(self, filepath: str) -> Optional[Dict[str, Any]]:
        """
        Load a TOML config file and merge it with defaults.

        Args:
            filepath: Path to the config file

        Returns:
            Merged configuration, or None if the file is missing or unreadable
        """
        try:
            if not os.path.exists(filepath):
                self.logger.log(f"❌ Config file not found: {filepath}", "ERROR")
                return None

            with open(filepath, "rb") as f:
                config = tomllib.load(f)

            merged_config = self._merge_with_defaults(config)
            self.logger.log(f"✅ Configuration loaded from {filepath}")
            return merged_config

        except (OSError, tomllib.TOMLDecodeError) as e:
            self.logger.log(f"❌ Error loading config {filepath}: {str(e)}", "ERROR")
            return None

    def save_config(self, config: Dict[str, Any], filepath: Optional[str] = None) -> bool:
        """
        Write configuration as TOML.

        Args:
            config: Configuration dictionary to save
            filepath: Target file (defaults to the campaign config in config_dir)

        Returns:
            bool: True if successful
        """
        filepath = filepath or os.path.join(self.config_dir, os.path.basename(DEFAULT_CONFIG_FILE))
        try:
            ensure_directory(os.path.dirname(filepath))
            text = dumps_toml(config)
            with open(filepath, "w", encoding="utf-8") as f:
                f.write(text)

            self.logger.log(f"✅ Configuration saved to {filepath}")
            return True

        except (OSError, ValueError) as e:
            self.logger.log(f"❌ Error saving config: {str(e)}", "ERROR")
            return False

    def export_config(self, config: Dict[str, Any], export_path: str) -> bool:
        """Export configuration as JSON."""
        try:
            ensure_directory(os.path.dirname(export_path))
            with open(export_path, "w", encoding="utf-8") as f:
                json.dump(config, f, indent=2, ensure_ascii=False)

            self.logger.log(f"✅ Configuration exported to: {export_path}")
            return True

        except (OSError, TypeError) as e:
            self.logger.log(f"❌ Error exporting config: {str(e)}", "ERROR")
            return False

    def import_config(self, import_path: str) -> Optional[Dict[str, Any]]:
        """Import a JSON export, merged with defaults."""
        try:
            if not os.path.exists(import_path):
                self.logger.log(f"❌ Import file not found: {import_path}", "ERROR")
                return None

            with open(import_path, "r", encoding="utf-8") as f:
                imported_config = json.load(f)

            validated_config = self._merge_with_defaults(imported_config)
            self.logger.log(f"✅ Configuration imported from: {import_path}")
            return validated_config

        except (OSError, json.JSONDecodeError) as e:
            self.logger.log(f"❌ Error importing config: {str(e)}", "ERROR")
            return None

    def _merge_with_defaults(self, config: Dict[str, Any]) -> Dict[str, Any]:
        """Merge loaded config with defaults to handle missing keys."""
        merged = copy.deepcopy(self.default_config)
        for section, values in config.items():
            if section in merged and isinstance(values, dict):
                merged[section].update(values)
            else:
                merged[section] = values
        return merged

    def validate_config(self, config: Dict[str, Any]) -> Tuple[bool, List[str]]:
        """
        Validate configuration structure and values.

        Args:
            config: Merged configuration to validate

        Returns:
            Tuple of (is_valid, error_messages)
        """
        errors = []

        for section, values in config.items():
            if section not in self.default_config:
                errors.append(f"Unknown section: {section}")
                continue
            if not isinstance(values, dict):
                errors.append(f"Section {section} must be a table")
                continue
            for key in values:
                if key not in self.default_config[section]:
                    errors.append(f"Unknown key {section}.{key}")

        if not errors:
            try:
                self.build_campaign_config(config)
            except (ValueError, TypeError, KeyError) as e:
                errors.append(str(e))

        return len(errors) == 0, errors

    def _schedules(self, raw) -> List[GridSchedule]:
        if raw == REFERENCE_PRESET:
            return reference_schedules()
        if not isinstance(raw, list):
            raise ValueError(f"search.schedules must be a list or \"{REFERENCE_PRESET}\"")
        schedules = []
        for entry in raw:
            if isinstance(entry, str):
                schedules.append(GridSchedule.parse(entry))
            else:
                schedules.append(GridSchedule(tuple(entry)))
        return schedules

    def build_campaign_config(self, config: Dict[str, Any],
                              overrides: Optional[Dict[str, Any]] = None) -> CampaignConfig:
        """
        Build a CampaignConfig from a merged configuration.

        Args:
            config: Merged configuration dict
            overrides: [campaign]-level values replacing the file's (trials, output_path, ...)

        Raises:
            ValueError: If any value violates its constraints
        """
        noise = config["noise"]
        search = config["search"]
        oracle = config["oracle"]
        campaign = dict(config["campaign"])
        campaign.update({key: value for key, value in (overrides or {}).items() if value is not None})

        return CampaignConfig(
            scenario=ChannelScenario.from_dict(config["scenario"]),
            schedules=self._schedules(search["schedules"]),
            k_values=list(noise["k_values"]),
            num_starts=list(search["num_starts"]),
            methods=list(search["methods"]),
            bas_sizes=list(search["bas_sizes"]),
            trials=campaign["trials"],
            base_seed=campaign["base_seed"],
            output_path=campaign["output_path"],
            num_blocks=search.get("num_blocks"),
            snr_db=noise["snr_db"],
            est_noise_sigma_sq=noise.get("est_noise_sigma_sq"),
            oracle=OracleSpec(oracle["angle_resolution"], oracle["refine_rounds"],
                              oracle["refine_points"]),
            quantization_bits=search.get("quantization_bits"),
            workers=campaign["workers"],
            use_cache=bool(oracle["use_cache"]),
        )
