"""
Logging Utilities Module
Centralized logging with console, file, and in-memory buffer output.
"""

import os
import csv
import datetime
import threading
from typing import Optional, List, Dict, Any

from config import *


class SimLogger:
    """Centralized logger with multiple output channels."""

    def __init__(self, level: str = DEFAULT_LOG_LEVEL, log_dir: Optional[str] = LOG_DIR,
                 console: bool = True):
        """
        Initialize the simulator logger.

        Args:
            level: Minimum level written (DEBUG, INFO, WARNING, ERROR, CRITICAL)
            log_dir: Directory for dated log files; None disables file output
            console: Whether to echo messages to stdout
        """
        self.log_lock = threading.Lock()
        self.log_buffer: List[str] = []
        self.max_buffer_size = MAX_LOG_BUFFER
        self.console = console
        self.min_level = LOG_LEVELS.get(level.upper(), LOG_LEVELS["INFO"])
        self.log_dir = log_dir
        self.log_file_path: Optional[str] = None

        if self.log_dir and self._ensure_log_directory():
            self.log_file_path = self._get_log_file_path()

    def _ensure_log_directory(self) -> bool:
        """Ensure log directory exists."""
        try:
            os.makedirs(self.log_dir, exist_ok=True)
            return True
        except OSError as e:
            print(f"❌ Failed to create log directory {self.log_dir}: {str(e)}")
            return False

    def _get_log_file_path(self) -> str:
        """Get current log file path with date."""
        today = datetime.datetime.now().strftime("%Y%m%d")
        return os.path.join(self.log_dir, f"{LOG_FILE_PREFIX}_{today}.log")

    def set_level(self, level: str) -> None:
        """Change the minimum level written."""
        self.min_level = LOG_LEVELS.get(level.upper(), self.min_level)

    def log(self, message: str, level: str = "INFO") -> None:
        """
        Log message to all configured outputs.

        Args:
            message: Message to log
            level: Log level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        """
        if LOG_LEVELS.get(level, LOG_LEVELS["INFO"]) < self.min_level:
            return

        with self.log_lock:
            try:
                timestamp = datetime.datetime.now().strftime("%Y-%m-%d %H:%M:%S")
                formatted_message = LOG_FORMAT.format(timestamp=timestamp, level=level, message=message)

                if self.console:
                    print(formatted_message)

                self._write_to_file(formatted_message)
                self._add_to_buffer(formatted_message)

            except Exception as e:
                print(f"Logging error: {str(e)}")

    def _write_to_file(self, message: str) -> None:
        """Write message to log file."""
        if not self.log_file_path:
            return
        try:
            with open(self.log_file_path, 'a', encoding='utf-8') as f:
                f.write(message + '\n')
        except OSError as e:
            print(f"File logging error: {str(e)}")

    def _add_to_buffer(self, message: str) -> None:
        """Add message to internal buffer, keeping it bounded."""
        self.log_buffer.append(message)
        if len(self.log_buffer) > self.max_buffer_size:
            self.log_buffer = self.log_buffer[-self.max_buffer_size:]

    def get_log_buffer(self) -> List[str]:
        """
        Get current log buffer contents.

        Returns:
            List of log messages
        """
        with self.log_lock:
            return self.log_buffer.copy()

    def export_logs_csv(self, filepath: str) -> str:
        """
        Export buffered logs to a CSV file.

        Args:
            filepath: Output file path

        Returns:
            str: Path to exported file, empty string on failure
        """
        try:
            with open(filepath, 'w', newline='', encoding='utf-8') as csvfile:
                writer = csv.writer(csvfile)
                writer.writerow(['Timestamp', 'Level', 'Message'])

                for log_entry in self.get_log_buffer():
                    parts = log_entry.split('] ', 1)
                    if len(parts) == 2:
                        timestamp_part = parts[0].lstrip('[')
                        level, _, message = parts[1].partition(': ')
                    else:
                        timestamp_part, level, message = "", "INFO", log_entry
                    writer.writerow([timestamp_part, level, message])

            self.log(f"📊 Logs exported to: {filepath}")
            return filepath

        except OSError as e:
            self.log(f"❌ Error exporting logs: {str(e)}", "ERROR")
            return ""

    def clear_logs(self) -> None:
        """Clear log buffer."""
        with self.log_lock:
            self.log_buffer.clear()

    def get_log_stats(self) -> Dict[str, Any]:
        """
        Get logging statistics.

        Returns:
            Dict with log statistics
        """
        with self.log_lock:
            return {
                "total_logs": len(self.log_buffer),
                "error_count": sum(1 for entry in self.log_buffer if "ERROR:" in entry),
                "warning_count": sum(1 for entry in self.log_buffer if "WARNING:" in entry),
                "buffer_size": self.max_buffer_size,
                "log_file": self.log_file_path
            }
