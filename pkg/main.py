#!/usr/bin/env python3
"""
RIS FIC Simulator - Main Entry Point
Command-line front end for Monte Carlo campaigns of fast iterative RIS
configuration, FIC-vs-BAS comparison, and oracle cache prewarming.
"""

import argparse
import os
import signal
import sys
from typing import Dict, List, Optional

# Add the project root to Python path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from config import *
from modules.campaign import CampaignConfig, CampaignRunner, compare_fic_bas, load_report, summarize_report
from modules.config_manager import ConfigManager
from modules.logging_utils import SimLogger
from modules.performance_monitor import CampaignMonitor
from modules.reference_search import OracleCache

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INTERRUPTED = 130


class SimulatorApp:
    """Orchestrates config loading, campaign runs, and report comparison."""

    def __init__(self, log_level: str = DEFAULT_LOG_LEVEL, logger: Optional[SimLogger] = None):
        """Initialize the application with its shared logger."""
        self.logger = logger or SimLogger(level=log_level)
        self.config_manager = ConfigManager(self.logger)
        self.runner: Optional[CampaignRunner] = None
        self.interrupted = False

    def install_signal_handlers(self) -> None:
        signal.signal(signal.SIGINT, self._signal_handler)
        signal.signal(signal.SIGTERM, self._signal_handler)

    def _signal_handler(self, signum, frame):
        """Handle shutdown signals gracefully."""
        self.logger.log(f"🛑 Received signal {signum}, stopping after the running trials...", "WARNING")
        self.interrupted = True
        if self.runner is not None:
            self.runner.request_stop()

    def _load_campaign(self, config_path: str,
                       overrides: Optional[Dict] = None) -> Optional[CampaignConfig]:
        config = self.config_manager.load_config(config_path)
        if config is None:
            return None

        is_valid, errors = self.config_manager.validate_config(config)
        if not is_valid:
            for error in errors:
                self.logger.log(f"❌ Invalid config: {error}", "ERROR")
            return None
        return self.config_manager.build_campaign_config(config, overrides)

    def _make_runner(self, campaign: CampaignConfig, monitor: Optional[CampaignMonitor] = None):
        cache = OracleCache(self.logger) if campaign.use_cache else None
        self.runner = CampaignRunner(self.logger, campaign, monitor, cache)
        if self.interrupted:
            self.runner.request_stop()
        return self.runner

    def run(self, config_path: str, output_path: Optional[str] = None,
            trials: Optional[int] = None) -> int:
        """Run a campaign from a config file and write its report."""
        try:
            campaign = self._load_campaign(config_path, {"output_path": output_path, "trials": trials})
            if campaign is None:
                return EXIT_FAILURE

            monitor = CampaignMonitor(self.logger)
            runner = self._make_runner(campaign, monitor)
            report = runner.run_campaign()
            if report is None:
                return EXIT_INTERRUPTED

            for method, stats in summarize_report(report).items():
                crossing = ("not reached" if stats["t_at_target"] is None
                            else f"T={stats['t_at_target']:.1f}")
                self.logger.log(f"📊 {method}: min mean eps {stats['min_mean_eps']:.4f}, "
                                f"eps<={SUMMARY_TARGET_EPS:g} at {crossing}")
            summary = monitor.get_summary()
            self.logger.log(f"📊 {summary['trials']['completed']} trials in {summary['elapsed']} "
                            f"(avg {summary['trials']['avg_time']}, memory {summary['memory']['current']})")
            return EXIT_OK

        except KeyboardInterrupt:
            self.logger.log("🛑 Interrupted", "WARNING")
            return EXIT_INTERRUPTED
        except Exception as e:
            self.logger.log(f"❌ Campaign failed: {str(e)}", "ERROR")
            return EXIT_FAILURE

    def compare(self, report_path: str, target_eps: float, schedule: Optional[str] = None,
                k: Optional[int] = None, p: Optional[int] = None) -> int:
        """Log the FIC-vs-BAS estimation-time reduction at a target loss."""
        try:
            report = load_report(report_path)
            comparison = compare_fic_bas(report, target_eps, schedule, k, p)
        except (OSError, ValueError) as e:
            self.logger.log(f"❌ Compare failed: {str(e)}", "ERROR")
            return EXIT_FAILURE

        if comparison.reduction is None:
            missing = [name for name, value in (("FIC", comparison.t_fic), ("BAS", comparison.t_bas))
                       if value is None]
            self.logger.log(f"⚠️ Target eps {target_eps:g} not reached by: {', '.join(missing)}",
                            "WARNING")
        else:
            self.logger.log(f"📊 eps<={target_eps:g}: T_FIC={comparison.t_fic:.1f} "
                            f"({comparison.fic_curve}), T_BAS={comparison.t_bas:.1f}, "
                            f"reduction {comparison.reduction:.1f}%")
        return EXIT_OK

    def prewarm_cache(self, config_path: str, trials: Optional[int] = None) -> int:
        """Compute oracle rates for a campaign's realizations ahead of time."""
        try:
            campaign = self._load_campaign(config_path, {"trials": trials})
            if campaign is None:
                return EXIT_FAILURE
            if not campaign.use_cache:
                self.logger.log("❌ Oracle cache is disabled in this config (oracle.use_cache)", "ERROR")
                return EXIT_FAILURE

            runner = self._make_runner(campaign)
            runner.prewarm_oracle_cache()
            return EXIT_INTERRUPTED if runner.stopped else EXIT_OK

        except KeyboardInterrupt:
            self.logger.log("🛑 Interrupted", "WARNING")
            return EXIT_INTERRUPTED
        except Exception as e:
            self.logger.log(f"❌ Cache prewarm failed: {str(e)}", "ERROR")
            return EXIT_FAILURE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="main.py",
        description="Monte Carlo simulator for fast iterative RIS configuration")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--log-level", default=DEFAULT_LOG_LEVEL, type=str.upper,
                        choices=list(LOG_LEVELS), help="Minimum log level")
    subparsers = parser.add_subparsers(dest="command", required=True)

    run_parser = subparsers.add_parser("run", parents=[common], help="Run a campaign from a config file")
    run_parser.add_argument("config", help="Campaign config (TOML)")
    run_parser.add_argument("--output", help="Report CSV path (overrides campaign.output_path)")
    run_parser.add_argument("--trials", type=int, help="Number of channel realizations")

    compare_parser = subparsers.add_parser("compare", parents=[common], help="FIC-vs-BAS reduction from a report")
    compare_parser.add_argument("report", help="Report CSV written by 'run'")
    compare_parser.add_argument("--target-eps", type=float, required=True, help="Target mean rate loss")
    compare_parser.add_argument("--schedule", help="FIC schedule label, e.g. 64-36-9-9-9-9")
    compare_parser.add_argument("--k", type=int, help="Estimates per configuration")
    compare_parser.add_argument("--p", type=int, help="Number of FIC starting points")

    cache_parser = subparsers.add_parser("oracle-cache", parents=[common], help="Prewarm the oracle rate cache")
    cache_parser.add_argument("config", help="Campaign config (TOML)")
    cache_parser.add_argument("--trials", type=int, help="Number of channel realizations")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for the simulator."""
    args = build_parser().parse_args(argv)
    app = SimulatorApp(log_level=args.log_level)
    app.install_signal_handlers()

    if args.command == "run":
        return app.run(args.config, args.output, args.trials)
    if args.command == "compare":
        return app.compare(args.report, args.target_eps, args.schedule, args.k, args.p)
    return app.prewarm_cache(args.config, args.trials)


if __name__ == "__main__":
    sys.exit(main())
