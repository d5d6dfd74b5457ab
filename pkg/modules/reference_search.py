"""
Reference Search Module
BAS baseline (one dense grid, no refinement), the exhaustive-search oracle
producing C_opt, the normalized rate loss, and an on-disk oracle cache.
"""

import hashlib
import os
import threading
from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple

import numpy as np

from config import *
from modules.channel import ArrayGeometry, batch_cascade
from modules.fic_optimizer import FicOptimizer, FicResult, GridSchedule
from modules.rate_estimator import NoiseModel, achievable_rates
from modules.ris_config import AnglePair, RisConfig, block_indices, freeze_block
from modules.utils import load_json_file, save_json_file, validate_positive_int


@dataclass(frozen=True)
class OracleSpec:
    """Dense grid resolution per axis and local refinement passes of the oracle."""

    angle_resolution: int = DEFAULT_ORACLE_RESOLUTION
    refine_rounds: int = DEFAULT_ORACLE_REFINE_ROUNDS
    refine_points: int = DEFAULT_ORACLE_REFINE_POINTS

    def __post_init__(self):
        object.__setattr__(self, "angle_resolution",
                           validate_positive_int(self.angle_resolution, "angle_resolution",
                                                 MIN_ORACLE_RESOLUTION))
        object.__setattr__(self, "refine_rounds",
                           validate_positive_int(self.refine_rounds, "refine_rounds", 0))
        object.__setattr__(self, "refine_points",
                           validate_positive_int(self.refine_points, "refine_points", 2))

    def coarse_axis(self) -> np.ndarray:
        """-pi/2 + pi*j/R for j = 0..R; the grid for R is contained in the grid for 2R."""
        resolution = self.angle_resolution
        return -RIS_ANGLE_LIMIT + np.pi * np.arange(resolution + 1) / resolution

    def key_fields(self) -> str:
        return f"{self.angle_resolution}:{self.refine_rounds}:{self.refine_points}"


class OracleResult(NamedTuple):
    c_opt: float
    config: RisConfig


def rate_loss(c_opt: float, c_hat: float) -> float:
    """
    Normalized rate loss (C_opt - C_hat) / C_opt for one realization.

    Negative values (a search beating the oracle surrogate) are returned as-is.

    Raises:
        ValueError: If c_opt <= 0
    """
    if not c_opt > 0:
        raise ValueError(f"c_opt must be positive, got {c_opt}")
    return (c_opt - c_hat) / c_opt


class OracleCache:
    """JSON files keyed by a hash of (H, G, M, sigma^2, quantization, spec)."""

    def __init__(self, logger, cache_dir: str = CACHE_DIR):
        self.logger = logger
        self.cache_dir = cache_dir
        self.hits = 0
        self.misses = 0
        self._lock = threading.Lock()

    @staticmethod
    def make_key(h: np.ndarray, g: np.ndarray, num_blocks: int, spec: OracleSpec,
                 sigma_sq: float, quantization_bits: Optional[int]) -> str:
        digest = hashlib.sha256()
        digest.update(np.ascontiguousarray(h, dtype=complex).tobytes())
        digest.update(np.ascontiguousarray(g, dtype=complex).tobytes())
        digest.update(f"{h.shape}|{g.shape}|{num_blocks}|{sigma_sq!r}|{quantization_bits}|"
                      f"{spec.key_fields()}|v{CACHE_FORMAT_VERSION}".encode())
        return digest.hexdigest()

    def _path(self, key: str) -> str:
        return os.path.join(self.cache_dir, f"{key}.json")

    def _count(self, hit: bool) -> None:
        with self._lock:
            if hit:
                self.hits += 1
            else:
                self.misses += 1

    def get(self, key: str) -> Optional[OracleResult]:
        """Cached result, or None on a miss (missing, corrupt, or other format version)."""
        entry = load_json_file(self._path(key))
        if entry is None:
            self._count(False)
            return None
        try:
            if entry.get("format_version") != CACHE_FORMAT_VERSION:
                raise ValueError(f"format version {entry.get('format_version')}")
            config = RisConfig(entry["phases"], entry["blocks"], entry["frozen"])
            result = OracleResult(float(entry["c_opt"]), config)
        except (KeyError, TypeError, ValueError) as e:
            self.logger.log(f"⚠️ Ignoring oracle cache entry {key[:12]}: {str(e)}", "WARNING")
            self._count(False)
            return None
        self._count(True)
        return result

    def put(self, key: str, result: OracleResult) -> bool:
        entry = {
            "format_version": CACHE_FORMAT_VERSION,
            "c_opt": result.c_opt,
            "phases": result.config.phases.tolist(),
            "blocks": result.config.block_assignment.tolist(),
            "frozen": result.config.frozen_mask.tolist(),
        }
        if not save_json_file(entry, self._path(key)):
            self.logger.log(f"⚠️ Could not write oracle cache entry {key[:12]}", "WARNING")
            return False
        return True


class ReferenceSearch:
    """BAS baseline and exhaustive oracle over the same angle-pair parameterization as FIC."""

    def __init__(self, logger, geometry: ArrayGeometry, quantization_bits: Optional[int] = None,
                 cache: Optional[OracleCache] = None):
        self.logger = logger
        self.optimizer = FicOptimizer(logger, geometry, quantization_bits)
        self.cache = cache

    def run_bas(self, h: np.ndarray, g: np.ndarray, l1: int, noise: NoiseModel,
                rng: np.random.Generator, num_blocks: int = 1) -> FicResult:
        """
        Evaluate the L_1 first-iteration configurations once and keep the best.

        Identical to FIC with schedule (L_1,); multipath channels use the same
        M-step freezing as FIC.
        """
        return self.optimizer.run_multipath(h, g, num_blocks, GridSchedule((l1,)), noise, rng)

    def _best_on_grid(self, basis: np.ndarray, base: RisConfig, thetas: np.ndarray,
                      etas: np.ndarray, sigma_sq: float,
                      best: Optional[Tuple[float, np.ndarray, AnglePair]]):
        """Noiseless rates over the pairs (thetas[i], etas[i]), evaluated in chunks."""
        for start in range(0, thetas.size, ORACLE_CHUNK_SIZE):
            chunk_thetas = thetas[start:start + ORACLE_CHUNK_SIZE]
            chunk_etas = etas[start:start + ORACLE_CHUNK_SIZE]
            phases = self.optimizer.candidate_phases_from_arrays(base, chunk_thetas, chunk_etas)
            rates = achievable_rates(batch_cascade(basis, phases), sigma_sq)
            index = int(np.argmax(rates))
            if best is None or rates[index] > best[0]:
                best = (float(rates[index]), phases[index],
                        AnglePair(float(chunk_thetas[index]), float(chunk_etas[index])))
        return best

    def oracle_optimal_rate(self, h: np.ndarray, g: np.ndarray, num_blocks: int,
                            spec: OracleSpec, sigma_sq: float) -> OracleResult:
        """
        Best true rate over the M-step angle-pair parameterization.

        Each step scans a dense (R+1) x (R+1) grid over [-pi/2, pi/2]^2, then
        refines locally refine_rounds times, shrinking the window tenfold per
        round. Noiseless by definition.

        Raises:
            ValueError: If M does not divide N_I
        """
        num_elements = self.optimizer.geometry.num_elements
        num_blocks = validate_positive_int(num_blocks, "M")
        block_indices(num_elements, 1, num_blocks)
        basis = self.optimizer.validate_channels(h, g)

        key = None
        if self.cache is not None:
            key = OracleCache.make_key(h, g, num_blocks, spec, sigma_sq,
                                       self.optimizer.quantization_bits)
            cached = self.cache.get(key)
            if cached is not None:
                return cached

        axis = spec.coarse_axis()
        coarse_thetas, coarse_etas = (grid.ravel() for grid in np.meshgrid(axis, axis, indexing="ij"))
        local = np.linspace(-1.0, 1.0, spec.refine_points)

        base = RisConfig.zeros(num_elements, num_blocks)
        best = None
        for step in range(1, num_blocks + 1):
            best = self._best_on_grid(basis, base, coarse_thetas, coarse_etas, sigma_sq, best)
            half_width = np.pi / spec.angle_resolution
            for _ in range(spec.refine_rounds):
                center = best[2]
                thetas = np.clip(center.theta + half_width * local, -RIS_ANGLE_LIMIT, RIS_ANGLE_LIMIT)
                etas = np.clip(center.eta + half_width * local, -RIS_ANGLE_LIMIT, RIS_ANGLE_LIMIT)
                grid_thetas, grid_etas = (grid.ravel() for grid in np.meshgrid(thetas, etas, indexing="ij"))
                best = self._best_on_grid(basis, base, grid_thetas, grid_etas, sigma_sq, best)
                half_width /= ORACLE_REFINE_SHRINK
            selected = RisConfig(best[1], base.block_assignment, base.frozen_mask)
            base = freeze_block(selected, step, num_blocks)

        result = OracleResult(best[0], base)
        if self.cache is not None:
            self.cache.put(key, result)
        return result
