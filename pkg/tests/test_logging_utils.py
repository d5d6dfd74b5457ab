"""
Unit tests for Logging Utilities Module
"""

import csv
import os
import sys
import tempfile
import unittest

# Add project root to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from modules.logging_utils import SimLogger


class TestSimLogger(unittest.TestCase):
    """Test cases for SimLogger."""

    def setUp(self):
        """Set up test fixtures."""
        self.tmp = tempfile.TemporaryDirectory()
        self.logger = SimLogger("INFO", log_dir=self.tmp.name, console=False)

    def tearDown(self):
        """Clean up log files."""
        self.tmp.cleanup()

    def test_level_filtering(self):
        """Test that messages below the minimum level are dropped."""
        self.logger.log("hidden", "DEBUG")
        self.logger.log("shown")
        buffer = self.logger.get_log_buffer()
        self.assertEqual(len(buffer), 1)
        self.assertTrue(buffer[0].endswith("INFO: shown"))

    def test_set_level(self):
        """Test raising and lowering the level at runtime."""
        self.logger.set_level("DEBUG")
        self.logger.log("detail", "DEBUG")
        self.logger.set_level("bogus")
        self.logger.log("still debug", "DEBUG")
        self.assertEqual(len(self.logger.get_log_buffer()), 2)

    def test_file_output(self):
        """Test that messages reach the dated log file."""
        self.logger.log("to file", "WARNING")
        with open(self.logger.log_file_path, encoding="utf-8") as f:
            self.assertIn("WARNING: to file", f.read())

    def test_no_file_output(self):
        """Test log_dir=None keeps messages in memory only."""
        logger = SimLogger("INFO", log_dir=None, console=False)
        logger.log("memory only")
        self.assertIsNone(logger.log_file_path)
        self.assertEqual(len(logger.get_log_buffer()), 1)

    def test_buffer_is_bounded(self):
        """Test that the buffer keeps only the newest entries."""
        self.logger.max_buffer_size = 3
        for i in range(5):
            self.logger.log(f"message {i}")
        buffer = self.logger.get_log_buffer()
        self.assertEqual(len(buffer), 3)
        self.assertTrue(buffer[-1].endswith("message 4"))

    def test_stats_and_clear(self):
        """Test error and warning counts, then clearing."""
        self.logger.log("bad", "ERROR")
        self.logger.log("odd", "WARNING")
        stats = self.logger.get_log_stats()
        self.assertEqual((stats["error_count"], stats["warning_count"]), (1, 1))
        self.logger.clear_logs()
        self.assertEqual(self.logger.get_log_stats()["total_logs"], 0)

    def test_export_csv(self):
        """Test CSV export of the buffer."""
        self.logger.log("first: with colon", "ERROR")
        filepath = os.path.join(self.tmp.name, "logs.csv")
        self.assertEqual(self.logger.export_logs_csv(filepath), filepath)
        with open(filepath, newline="", encoding="utf-8") as f:
            rows = list(csv.reader(f))
        self.assertEqual(rows[0], ["Timestamp", "Level", "Message"])
        self.assertEqual(rows[1][1:], ["ERROR", "first: with colon"])


if __name__ == '__main__':
    unittest.main()
