"""
Unit tests for Config Manager Module
"""

import os
import sys
import tempfile
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
import unittest
from unittest.mock import Mock

# Add project root to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from modules.config_manager import ConfigManager, dumps_toml, reference_schedules
from modules.logging_utils import SimLogger

SMALL_CONFIG = """
[scenario]
num_antennas_s = 2
num_antennas_d = 2
num_ris_elements = 8
num_paths_g = 1
num_paths_h = 1

[search]
schedules = [[9, 9], "25-9"]
bas_sizes = [9, 16]

[oracle]
angle_resolution = 32
refine_rounds = 1
use_cache = false

[campaign]
trials = 3
workers = 1
"""


class TestConfigManager(unittest.TestCase):
    """Test cases for ConfigManager."""

    def setUp(self):
        """Set up test fixtures."""
        self.logger = Mock(spec=SimLogger)
        self.tmp = tempfile.TemporaryDirectory()
        self.manager = ConfigManager(self.logger, self.tmp.name)

    def tearDown(self):
        """Clean up config files."""
        self.tmp.cleanup()

    def write(self, name: str, text: str) -> str:
        filepath = os.path.join(self.tmp.name, name)
        with open(filepath, "w", encoding="utf-8") as f:
            f.write(text)
        return filepath

    def test_load_merges_defaults(self):
        """Test that omitted keys take default values."""
        config = self.manager.load_config(self.write("small.toml", SMALL_CONFIG))
        self.assertEqual(config["campaign"]["trials"], 3)
        self.assertEqual(config["noise"]["snr_db"], -15.0)
        self.assertEqual(config["oracle"]["refine_points"], 33)
        self.assertIsNone(config["scenario"]["power_profile_g"])

    def test_build_campaign_config(self):
        """Test conversion to CampaignConfig, including string schedules and M default."""
        config = self.manager.load_config(self.write("small.toml", SMALL_CONFIG))
        campaign = self.manager.build_campaign_config(config)
        self.assertEqual([s.label for s in campaign.schedules], ["9-9", "25-9"])
        self.assertEqual(campaign.scenario.ris.num_elements, 8)
        self.assertEqual(campaign.num_blocks, 1)
        self.assertEqual(campaign.oracle.angle_resolution, 32)
        self.assertFalse(campaign.use_cache)

    def test_overrides(self):
        """Test that non-None overrides replace [campaign] values."""
        config = self.manager.load_config(self.write("small.toml", SMALL_CONFIG))
        campaign = self.manager.build_campaign_config(config, {"trials": 7, "output_path": None})
        self.assertEqual(campaign.trials, 7)
        self.assertEqual(campaign.output_path, config["campaign"]["output_path"])

    def test_missing_file(self):
        """Test that a missing file returns None and logs an error."""
        self.assertIsNone(self.manager.load_config(os.path.join(self.tmp.name, "absent.toml")))
        self.logger.log.assert_called()

    def test_invalid_toml(self):
        """Test that a malformed file returns None."""
        self.assertIsNone(self.manager.load_config(self.write("bad.toml", "[campaign\ntrials = ")))

    def test_validate_flags_unknown_keys(self):
        """Test unknown sections and keys are reported."""
        config = self.manager.load_config(self.write("typo.toml", SMALL_CONFIG + "\n[extra]\nx = 1\n"))
        config["campaign"]["trails"] = 5
        is_valid, errors = self.manager.validate_config(config)
        self.assertFalse(is_valid)
        self.assertIn("Unknown section: extra", errors)
        self.assertIn("Unknown key campaign.trails", errors)

    def test_validate_flags_bad_schedule(self):
        """Test that a non-square grid size is reported."""
        config = self.manager.load_config(self.write("small.toml", SMALL_CONFIG))
        config["search"]["schedules"] = [[9, 10]]
        is_valid, errors = self.manager.validate_config(config)
        self.assertFalse(is_valid)
        self.assertEqual(len(errors), 1)

    def test_validate_accepts_sample_config(self):
        """Test that the shipped campaign file is valid."""
        root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
        config = self.manager.load_config(os.path.join(root, "config", "campaign.toml"))
        is_valid, errors = self.manager.validate_config(config)
        self.assertTrue(is_valid, errors)

    def test_reference_preset(self):
        """Test that "reference" expands to the five constant and three variable schedules."""
        config = self.manager.load_config(self.write("small.toml", SMALL_CONFIG))
        config["search"]["schedules"] = "reference"
        campaign = self.manager.build_campaign_config(config)
        self.assertEqual(len(campaign.schedules), 8)
        self.assertEqual(campaign.schedules[-1].sizes, (64, 36, 9, 9, 9, 9))
        self.assertEqual([s.label for s in campaign.schedules], [s.label for s in reference_schedules()])

    def test_save_and_reload(self):
        """Test that a saved config loads back to the same values."""
        config = self.manager.load_config(self.write("small.toml", SMALL_CONFIG))
        target = os.path.join(self.tmp.name, "saved", "campaign.toml")
        self.assertTrue(self.manager.save_config(config, target))
        reloaded = self.manager.load_config(target)
        self.assertEqual(reloaded, config)

    def test_json_export_and_import(self):
        """Test JSON export followed by import."""
        config = self.manager.load_config(self.write("small.toml", SMALL_CONFIG))
        target = os.path.join(self.tmp.name, "export.json")
        self.assertTrue(self.manager.export_config(config, target))
        self.assertEqual(self.manager.import_config(target)["campaign"]["trials"], 3)
        self.assertIsNone(self.manager.import_config(os.path.join(self.tmp.name, "none.json")))


class TestDumpsToml(unittest.TestCase):
    """Test cases for TOML serialization."""

    def test_values(self):
        """Test booleans, strings, nested lists, and omitted None values."""
        text = dumps_toml({"a": {"flag": True, "name": "x/y", "grid": [[9, 9], [16]], "skip": None,
                                 "ratio": 0.25}})
        parsed = tomllib.loads(text)
        self.assertEqual(parsed, {"a": {"flag": True, "name": "x/y", "grid": [[9, 9], [16]], "ratio": 0.25}})

    def test_non_ascii_strings(self):
        """Test that non-BMP and accented characters survive a TOML round trip."""
        values = {"output_path": "run 😀/résumé.csv", "label": "tab\there \"quoted\""}
        parsed = tomllib.loads(dumps_toml({"campaign": values}))
        self.assertEqual(parsed, {"campaign": values})

    def test_unsupported_value(self):
        """Test that dicts inside sections raise."""
        with self.assertRaises(ValueError):
            dumps_toml({"a": {"nested": {"x": 1}}})


if __name__ == '__main__':
    unittest.main()
