"""
Campaign Module
Seeded Monte Carlo campaigns over channel realizations: sweeps schedules,
K and P, traces mean rate loss versus estimation time, and compares FIC
against the BAS baseline.
"""

import concurrent.futures
import os
import threading
import time
from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Optional, Sequence

import numpy as np
import pandas as pd

from config import *
from modules.channel import ChannelScenario, build_channels, compose_cascade, sample_channel_pair
from modules.fic_optimizer import FicOptimizer, GridSchedule, estimation_time
from modules.rate_estimator import NoiseModel, achievable_rate
from modules.reference_search import OracleCache, OracleSpec, ReferenceSearch, rate_loss
from modules.ris_config import block_indices
from modules.utils import (cleanup_resources, ensure_directory, integer_sqrt,
                           validate_positive_int, validate_string_input)

SAMPLE_COLUMNS = ["method", "schedule", "K", "P", "I", "T", "trial", "eps"]
GROUP_COLUMNS = ["method", "schedule", "K", "P", "I", "T"]


@dataclass
class CampaignConfig:
    """Experiment matrix of one campaign run."""

    scenario: ChannelScenario = field(default_factory=ChannelScenario)
    schedules: List[GridSchedule] = field(default_factory=list)
    k_values: List[int] = field(default_factory=lambda: list(DEFAULT_K_VALUES))
    num_starts: List[int] = field(default_factory=lambda: [DEFAULT_NUM_STARTS])
    methods: List[str] = field(default_factory=lambda: list(DEFAULT_METHODS))
    bas_sizes: List[int] = field(default_factory=lambda: list(REFERENCE_BAS_SIZES))
    trials: int = DEFAULT_TRIALS
    base_seed: int = DEFAULT_BASE_SEED
    output_path: str = DEFAULT_OUTPUT_PATH
    num_blocks: Optional[int] = None
    snr_db: float = DEFAULT_SNR_DB
    est_noise_sigma_sq: Optional[float] = None
    oracle: OracleSpec = field(default_factory=OracleSpec)
    quantization_bits: Optional[int] = None
    workers: int = DEFAULT_WORKERS
    use_cache: bool = True

    def __post_init__(self):
        self.trials = validate_positive_int(self.trials, "trials")
        self.workers = validate_positive_int(self.workers, "workers")
        self.base_seed = validate_positive_int(self.base_seed, "base_seed", 0)
        self.methods = [validate_string_input(m, SUPPORTED_METHODS) for m in self.methods]
        if not self.methods:
            raise ValueError("At least one method is required")
        self.k_values = [validate_positive_int(k, "K") for k in self.k_values]
        if not self.k_values:
            raise ValueError("k_values must not be empty")
        self.num_starts = [validate_positive_int(p, "P") for p in self.num_starts]

        if "FIC" in self.methods:
            if not self.schedules:
                raise ValueError("FIC campaigns need at least one schedule")
            if not self.num_starts:
                raise ValueError("num_starts must not be empty")
            for schedule in self.schedules:
                for p in self.num_starts:
                    schedule.with_starts(p)
        if "BAS" in self.methods:
            if not self.bas_sizes:
                raise ValueError("BAS campaigns need at least one bas size")
            self.bas_sizes = [integer_sqrt(size, "BAS size") ** 2 for size in self.bas_sizes]

        if self.num_blocks is None:
            self.num_blocks = self.scenario.default_num_blocks
        self.num_blocks = validate_positive_int(self.num_blocks, "M")
        block_indices(self.scenario.ris.num_elements, 1, self.num_blocks)
        if self.quantization_bits is not None:
            self.quantization_bits = validate_positive_int(self.quantization_bits, "quantization_bits")
        # Fails early on a bad SNR or estimate variance
        self.noise_model(self.k_values[0])

    def noise_model(self, k: int) -> NoiseModel:
        return NoiseModel.from_snr_db(self.snr_db, k, self.est_noise_sigma_sq)

    def cells(self) -> List["CampaignCell"]:
        """Every (method, schedule, K, P) combination, in a fixed order."""
        cells: List[CampaignCell] = []
        if "FIC" in self.methods:
            for schedule in self.schedules:
                for p in self.num_starts:
                    for k in self.k_values:
                        cells.append(CampaignCell(len(cells), "FIC", schedule.with_starts(p), k))
        if "BAS" in self.methods:
            for size in self.bas_sizes:
                for k in self.k_values:
                    cells.append(CampaignCell(len(cells), "BAS", GridSchedule((size,)), k))
        return cells


class CampaignCell(NamedTuple):
    cell_id: int
    method: str
    schedule: GridSchedule
    k: int


class Comparison(NamedTuple):
    """T at which each method first reaches the target loss; None when never reached."""

    target_eps: float
    t_fic: Optional[float]
    t_bas: Optional[float]
    reduction: Optional[float]
    fic_curve: Optional[str]


def trial_seed(base_seed: int, trial: int, cell_id: Optional[int] = None) -> np.random.SeedSequence:
    """Stream for a trial's channel (cell_id None) or for one cell within the trial."""
    key = (trial,) if cell_id is None else (trial, cell_id + 1)
    return np.random.SeedSequence(base_seed, spawn_key=key)


class CampaignRunner:
    """Runs Monte Carlo campaigns and writes the rate-loss report."""

    def __init__(self, logger, config: CampaignConfig, monitor=None,
                 cache: Optional[OracleCache] = None):
        """
        Initialize the runner.

        Args:
            logger: SimLogger instance
            config: Campaign configuration
            monitor: Optional CampaignMonitor receiving per-trial timings
            cache: Oracle cache; used only when config.use_cache is set
        """
        self.logger = logger
        self.config = config
        self.monitor = monitor
        self.cache = cache if config.use_cache else None
        geometry = config.scenario.ris
        self.optimizer = FicOptimizer(logger, geometry, config.quantization_bits)
        self.reference = ReferenceSearch(logger, geometry, config.quantization_bits, self.cache)
        self._stop_event = threading.Event()

    def request_stop(self) -> None:
        """Ask the campaign to stop before its next trial."""
        self._stop_event.set()

    @property
    def stopped(self) -> bool:
        return self._stop_event.is_set()

    def sample_channels(self, trial: int):
        """(H, G) of one trial; the same for every cell of that trial."""
        rng = np.random.default_rng(trial_seed(self.config.base_seed, trial))
        paths_g, paths_h = sample_channel_pair(self.config.scenario, rng)
        return build_channels(self.config.scenario, paths_g, paths_h)

    def oracle_rate(self, h: np.ndarray, g: np.ndarray) -> float:
        sigma_sq = self.config.noise_model(1).sigma_sq
        return self.reference.oracle_optimal_rate(h, g, self.config.num_blocks,
                                                  self.config.oracle, sigma_sq).c_opt

    def run_trial(self, trial: int) -> List[tuple]:
        """Rate-loss samples of every cell and every truncation I for one channel realization."""
        config = self.config
        if self._stop_event.is_set():
            return []
        h, g = self.sample_channels(trial)
        c_opt = self.oracle_rate(h, g)
        if not c_opt > 0:
            self.logger.log(f"⚠️ Trial #{trial}: oracle rate is zero, realization skipped", "WARNING")
            return []

        samples = []
        negatives = 0
        for cell in config.cells():
            noise = config.noise_model(cell.k)
            for iterations in range(1, cell.schedule.num_iterations + 1):
                if self._stop_event.is_set():
                    return samples
                schedule = cell.schedule.truncated(iterations)
                # Same cell stream for every I, so the I-sweep is paired
                rng = np.random.default_rng(trial_seed(config.base_seed, trial, cell.cell_id))
                if cell.method == "BAS":
                    result = self.reference.run_bas(h, g, schedule.sizes[0], noise, rng, config.num_blocks)
                else:
                    result = self.optimizer.run_multipath(h, g, config.num_blocks, schedule, noise, rng)
                c_hat = achievable_rate(compose_cascade(h, result.best_config, g), noise.sigma_sq)
                eps = rate_loss(c_opt, c_hat)
                if eps < 0:
                    negatives += 1
                samples.append((cell.method, cell.schedule.label, cell.k, cell.schedule.num_starts,
                                iterations, estimation_time(noise.t0, config.num_blocks, schedule),
                                trial, eps))

        if negatives:
            self.logger.log(f"⚠️ Trial #{trial}: {negatives} negative rate-loss samples "
                            f"(search beat the oracle surrogate)", "WARNING")
        return samples

    def _timed_trial(self, trial: int) -> List[tuple]:
        start = time.perf_counter()
        samples = self.run_trial(trial)
        if self.monitor is not None:
            self.monitor.record_trial(trial, time.perf_counter() - start)
        return samples

    def collect_samples(self, trials: Optional[int] = None) -> Optional[pd.DataFrame]:
        """
        Run the trials in a worker pool.

        Returns:
            DataFrame of per-trial samples ordered by trial, or None when stopped
        """
        trials = self.config.trials if trials is None else validate_positive_int(trials, "trials")
        per_trial: Dict[int, List[tuple]] = {}

        with concurrent.futures.ThreadPoolExecutor(max_workers=self.config.workers,
                                                   thread_name_prefix="Campaign") as executor:
            futures = {executor.submit(self._timed_trial, trial): trial for trial in range(trials)}
            try:
                for completed, future in enumerate(concurrent.futures.as_completed(futures), start=1):
                    trial = futures[future]
                    try:
                        per_trial[trial] = future.result()
                    except Exception as e:
                        if self.monitor is not None:
                            self.monitor.record_failure(trial, str(e))
                        self.request_stop()
                        raise
                    if self._stop_event.is_set():
                        break
                    if completed % max(1, trials // 10) == 0 or completed == trials:
                        self.logger.log(f"📊 Progress: {completed}/{trials} trials")
            finally:
                if self._stop_event.is_set():
                    for future in futures:
                        future.cancel()

        if self._stop_event.is_set():
            self.logger.log("🛑 Campaign stopped before completion", "WARNING")
            return None

        rows = [sample for trial in sorted(per_trial) for sample in per_trial[trial]]
        return pd.DataFrame(rows, columns=SAMPLE_COLUMNS)

    def run_campaign(self) -> Optional[pd.DataFrame]:
        """
        Run the campaign and write the report CSV.

        Returns:
            Report DataFrame, or None when the campaign was stopped

        Raises:
            OSError: If the output path cannot be written
        """
        config = self.config
        cells = config.cells()
        self.logger.log(f"🚀 Campaign: {config.trials} trials, {len(cells)} cells, "
                        f"M={config.num_blocks}, SNR {config.snr_db:g} dB, "
                        f"{config.workers} workers")

        samples = self.collect_samples()
        if samples is None:
            return None

        report = aggregate_samples(samples)
        write_report(report, config.output_path)
        self.logger.log(f"✅ Report written to {config.output_path} ({len(report)} rows)")
        if self.cache is not None:
            self.logger.log(f"📊 Oracle cache: {self.cache.hits} hits, {self.cache.misses} misses", "DEBUG")
        cleanup_resources()
        return report

    def prewarm_oracle_cache(self, trials: Optional[int] = None) -> int:
        """Compute C_opt for the campaign's realizations into the cache; returns entries computed."""
        if self.cache is None:
            raise ValueError("Oracle cache is disabled for this campaign")
        trials = self.config.trials if trials is None else validate_positive_int(trials, "trials")
        misses_before = self.cache.misses

        def warm(trial: int) -> None:
            if not self._stop_event.is_set():
                h, g = self.sample_channels(trial)
                self.oracle_rate(h, g)

        with concurrent.futures.ThreadPoolExecutor(max_workers=self.config.workers,
                                                   thread_name_prefix="OracleCache") as executor:
            list(executor.map(warm, range(trials)))

        computed = self.cache.misses - misses_before
        self.logger.log(f"✅ Oracle cache ready: {computed} computed, "
                        f"{trials - computed} already cached")
        return computed


def aggregate_samples(samples: pd.DataFrame) -> pd.DataFrame:
    """Mean/std of eps and the fraction of negative samples per (method, schedule, K, P, I, T)."""
    if samples.empty:
        return pd.DataFrame(columns=REPORT_COLUMNS)
    grouped = samples.groupby(GROUP_COLUMNS, sort=False)["eps"]
    report = grouped.agg(
        mean_eps="mean",
        std_eps=lambda eps: float(np.std(eps.to_numpy())),
        negative_fraction=lambda eps: float(np.mean(eps.to_numpy() < 0)),
        trials="count",
    ).reset_index()
    rows = report.to_dict("records")
    order = sorted(range(len(rows)), key=lambda i: (rows[i]["method"],
                                                     schedule_sizes(rows[i]["schedule"]),
                                                     rows[i]["K"], rows[i]["P"], rows[i]["I"]))
    return report.iloc[order][REPORT_COLUMNS].reset_index(drop=True)


def schedule_sizes(label: str) -> tuple:
    """Grid sizes of a schedule label, e.g. "64-36-9" -> (64, 36, 9)."""
    return tuple(int(size) for size in str(label).split("-"))


def write_report(report: pd.DataFrame, output_path: str) -> None:
    """
    Write the report CSV.

    Raises:
        OSError: If the directory cannot be created or the file written
    """
    directory = os.path.dirname(output_path)
    if directory and not ensure_directory(directory):
        raise OSError(f"Cannot create output directory {directory}")
    report.to_csv(output_path, index=False, float_format=CSV_FLOAT_FORMAT)


def load_report(filepath: str) -> pd.DataFrame:
    """
    Read a report written by run_campaign.

    Raises:
        ValueError: If required columns are missing
    """
    report = pd.read_csv(filepath, dtype={"method": str, "schedule": str},
                         float_precision="round_trip")
    missing = [c for c in REPORT_COLUMNS if c not in report.columns]
    if missing:
        raise ValueError(f"Report {filepath} is missing columns: {missing}")
    return report


def first_crossing(times: Sequence[float], losses: Sequence[float],
                   target_eps: float) -> Optional[float]:
    """
    Smallest T at which the loss curve reaches target_eps.

    Points are taken in increasing T; between the last point above the target
    and the first point at or below it, T is interpolated linearly.
    """
    order = np.argsort(np.asarray(times, dtype=float), kind="stable")
    times = np.asarray(times, dtype=float)[order]
    losses = np.asarray(losses, dtype=float)[order]
    hits = np.flatnonzero(losses <= target_eps)
    if hits.size == 0:
        return None
    index = int(hits[0])
    if index == 0:
        return float(times[0])
    t0, t1 = times[index - 1], times[index]
    e0, e1 = losses[index - 1], losses[index]
    return float(t0 + (e0 - target_eps) * (t1 - t0) / (e0 - e1))


def _best_curve(report: pd.DataFrame, curve_columns: List[str],
                target_eps: float):
    best_t, best_label = None, None
    for key, curve in report.groupby(curve_columns, sort=True):
        crossing = first_crossing(curve["T"], curve["mean_eps"], target_eps)
        if crossing is not None and (best_t is None or crossing < best_t):
            key = key if isinstance(key, tuple) else (key,)
            best_t = crossing
            best_label = " ".join(f"{name}={value}" for name, value in zip(curve_columns, key))
    return best_t, best_label


def compare_fic_bas(report: pd.DataFrame, target_eps: float, schedule: Optional[str] = None,
                    k: Optional[int] = None, p: Optional[int] = None) -> Comparison:
    """
    Percentage reduction of T_FIC with respect to T_BAS at a target mean loss.

    FIC curves are one per (schedule, K, P); BAS points (one per grid size)
    form one curve per K. When several curves qualify, the one reaching the
    target at the lowest T is used.

    Args:
        report: Campaign report
        target_eps: Target mean rate loss
        schedule: Restrict FIC to this schedule label
        k: Restrict both methods to this K
        p: Restrict FIC to this P

    Returns:
        Comparison; reduction is None when either method never reaches the target

    Raises:
        ValueError: If the report lacks either method after filtering
    """
    fic = report[report["method"] == "FIC"]
    bas = report[report["method"] == "BAS"]
    if schedule is not None:
        fic = fic[fic["schedule"] == str(schedule)]
    if k is not None:
        fic = fic[fic["K"] == k]
        bas = bas[bas["K"] == k]
    if p is not None:
        fic = fic[fic["P"] == p]
    if fic.empty or bas.empty:
        raise ValueError("Report must contain both FIC and BAS rows for the requested filters")

    t_fic, fic_label = _best_curve(fic, ["schedule", "K", "P"], target_eps)
    t_bas, _ = _best_curve(bas, ["K"], target_eps)
    reduction = None
    if t_fic is not None and t_bas is not None:
        reduction = 100.0 * (t_bas - t_fic) / t_bas
    return Comparison(target_eps, t_fic, t_bas, reduction, fic_label)


def summarize_report(report: pd.DataFrame,
                     target_eps: float = SUMMARY_TARGET_EPS) -> Dict[str, Dict[str, Optional[float]]]:
    """Per method: lowest mean loss, and the lowest T at which any curve reaches target_eps."""
    summary = {}
    curve_columns = {"FIC": ["schedule", "K", "P"], "BAS": ["K"]}
    for method, rows in report.groupby("method", sort=True):
        t_target, _ = _best_curve(rows, curve_columns.get(method, ["schedule", "K", "P"]), target_eps)
        summary[method] = {
            "min_mean_eps": float(rows["mean_eps"].min()),
            "t_at_target": t_target,
        }
    return summary
