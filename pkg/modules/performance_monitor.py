"""
Performance Monitoring Module
Per-trial timing and process resource tracking for Monte Carlo campaigns
"""

import json
import os
import threading
import time
from collections import deque
from typing import Dict, Tuple

import psutil

from config import MEMORY_GROWTH_THRESHOLD, SLOW_TRIAL_SECONDS


class CampaignMonitor:
    """Tracks trial durations, memory growth, and CPU load during a campaign."""

    def __init__(self, logger, slow_trial_seconds: float = SLOW_TRIAL_SECONDS,
                 memory_growth_threshold: float = MEMORY_GROWTH_THRESHOLD):
        """Initialize campaign monitor."""
        self.logger = logger
        self.start_time = time.time()
        self.process = psutil.Process(os.getpid())
        self._lock = threading.Lock()

        self.trial_times = deque(maxlen=10000)
        self.memory_usage = deque(maxlen=100)
        self.cpu_usage = deque(maxlen=100)
        self.failed_trials = 0

        self.baseline_memory = self.process.memory_info().rss / 1024 / 1024  # MB
        self.slow_trial_seconds = slow_trial_seconds
        self.memory_growth_threshold = memory_growth_threshold

    def record_trial(self, trial: int, duration: float) -> None:
        """Record wall time of one trial and sample memory."""
        with self._lock:
            self.trial_times.append(duration)
        if duration > self.slow_trial_seconds:
            self.logger.log(f"⚠️ Slow trial: #{trial} took {duration:.1f}s "
                            f"(threshold: {self.slow_trial_seconds:.1f}s)", "WARNING")
        self.check_memory_usage()

    def record_failure(self, trial: int, error_message: str) -> None:
        with self._lock:
            self.failed_trials += 1
        self.logger.log(f"❌ Trial #{trial} failed: {error_message}", "ERROR")

    def check_memory_usage(self) -> Tuple[float, float]:
        """Current RSS in MB and growth over the baseline in percent."""
        current_memory = self.process.memory_info().rss / 1024 / 1024
        growth_percentage = ((current_memory - self.baseline_memory) / self.baseline_memory) * 100
        with self._lock:
            self.memory_usage.append(current_memory)

        if growth_percentage > self.memory_growth_threshold * 100:
            self.logger.log(f"🚨 High memory usage: {current_memory:.1f}MB (+{growth_percentage:.1f}%)",
                            "WARNING")
        return current_memory, growth_percentage

    def check_cpu_usage(self) -> float:
        cpu_percent = self.process.cpu_percent(interval=None)
        with self._lock:
            self.cpu_usage.append(cpu_percent)
        return cpu_percent

    def get_summary(self) -> Dict:
        """Campaign resource summary."""
        current_memory, memory_growth = self.check_memory_usage()
        cpu_percent = self.check_cpu_usage()
        elapsed = time.time() - self.start_time

        with self._lock:
            times = list(self.trial_times)
            failed = self.failed_trials
        avg_trial = sum(times) / len(times) if times else 0.0

        return {
            "elapsed": f"{elapsed:.1f}s",
            "trials": {
                "completed": len(times),
                "failed": failed,
                "avg_time": f"{avg_trial:.2f}s",
                "max_time": f"{max(times):.2f}s" if times else "0.00s",
            },
            "memory": {
                "current": f"{current_memory:.1f}MB",
                "growth": f"{memory_growth:.1f}%",
            },
            "cpu": {
                "current": f"{cpu_percent:.1f}%",
            },
        }

    def export_metrics(self, filepath: str) -> bool:
        """Export the summary as JSON."""
        try:
            directory = os.path.dirname(filepath)
            if directory:
                os.makedirs(directory, exist_ok=True)
            with open(filepath, "w") as f:
                json.dump(self.get_summary(), f, indent=2)

            self.logger.log(f"📊 Metrics exported to {filepath}")
            return True

        except Exception as e:
            self.logger.log(f"❌ Failed to export metrics: {str(e)}", "ERROR")
            return False
