"""
FIC Optimizer Module
Fast iterative configuration: first-iteration and refined angle grids,
per-iteration selection from noisy rate estimates, multi-start chains,
interleaved multipath steps, and estimation-time accounting.
"""

import math
from dataclasses import dataclass, field
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from config import *
from modules.channel import ArrayGeometry, batch_cascade, cascade_basis
from modules.rate_estimator import NoiseModel, achievable_rates, estimate_cascades
from modules.ris_config import (AnglePair, RisConfig, block_indices, freeze_block,
                                overlay_phases, phases_from_angles, quantize_phase_values)
from modules.utils import integer_sqrt, validate_positive_int


@dataclass(frozen=True)
class GridSchedule:
    """Grid sizes (L_1, ..., L_I), each a perfect square, and the number of starts P."""

    sizes: Tuple[int, ...]
    num_starts: int = DEFAULT_NUM_STARTS

    def __post_init__(self):
        sizes = tuple(validate_positive_int(size, "L_i") for size in self.sizes)
        if not sizes:
            raise ValueError("GridSchedule needs at least one grid size")
        for size in sizes:
            integer_sqrt(size, "L_i")
        num_starts = validate_positive_int(self.num_starts, "P")
        if num_starts > sizes[0]:
            raise ValueError(f"P={num_starts} exceeds L_1={sizes[0]}")
        object.__setattr__(self, "sizes", sizes)
        object.__setattr__(self, "num_starts", num_starts)

    @property
    def num_iterations(self) -> int:
        return len(self.sizes)

    @property
    def tail_sum(self) -> int:
        """Sum of L_i for i >= 2."""
        return sum(self.sizes[1:])

    @property
    def soundings_per_step(self) -> int:
        """L_1 + P * sum_{i>=2} L_i."""
        return self.sizes[0] + self.num_starts * self.tail_sum

    @property
    def label(self) -> str:
        return "-".join(str(size) for size in self.sizes)

    def gamma(self, iteration: int) -> float:
        """gamma_i = sqrt(L_1 * ... * L_i) for 1-based iteration i."""
        if not 1 <= iteration <= self.num_iterations:
            raise ValueError(f"iteration {iteration} outside 1..{self.num_iterations}")
        return float(math.prod(integer_sqrt(size) for size in self.sizes[:iteration]))

    def truncated(self, iterations: int) -> "GridSchedule":
        """Schedule stopped after `iterations` iterations."""
        if not 1 <= iterations <= self.num_iterations:
            raise ValueError(f"Cannot truncate {self.label} to {iterations} iterations")
        return GridSchedule(self.sizes[:iterations], self.num_starts)

    def with_starts(self, num_starts: int) -> "GridSchedule":
        return GridSchedule(self.sizes, num_starts)

    @classmethod
    def constant(cls, size: int, iterations: int, num_starts: int = 1) -> "GridSchedule":
        return cls(tuple([size] * iterations), num_starts)

    @classmethod
    def variable(cls, head: Sequence[int], tail_size: int, iterations: int,
                 num_starts: int = 1) -> "GridSchedule":
        """Leading sizes followed by tail_size up to `iterations` iterations."""
        sizes = list(head)[:iterations]
        sizes += [tail_size] * (iterations - len(sizes))
        return cls(tuple(sizes), num_starts)

    @classmethod
    def parse(cls, text: str, num_starts: int = 1) -> "GridSchedule":
        """Parse '64-36-9' or '64,36,9'."""
        parts = [p for p in text.replace(",", "-").split("-") if p.strip()]
        return cls(tuple(int(p) for p in parts), num_starts)


class IterationRecord(NamedTuple):
    """One explored grid: step m, chain p (0 for the shared first iteration), iteration i."""

    step: int
    chain: int
    iteration: int
    pairs: List[AnglePair]
    rates: np.ndarray
    selected: int


@dataclass
class FicResult:
    """Selected configuration, its estimated rate, the explored grids, and the time spent."""

    best_config: RisConfig
    best_estimated_rate: float
    best_pair: AnglePair
    trace: List[IterationRecord] = field(default_factory=list)
    total_estimates: int = 0
    per_block_angles: List[AnglePair] = field(default_factory=list)

    def max_trace_rate(self) -> float:
        return max(float(np.max(record.rates)) for record in self.trace)

    def trace_frame(self) -> pd.DataFrame:
        """One row per explored configuration (ell is 1-based)."""
        rows = []
        for record in self.trace:
            for ell, (pair, rate) in enumerate(zip(record.pairs, record.rates)):
                rows.append((record.step, record.chain, record.iteration, ell + 1,
                             pair.theta, pair.eta, float(rate), ell == record.selected))
        return pd.DataFrame(rows, columns=TRACE_COLUMNS)

    def export_trace_csv(self, filepath: str) -> None:
        self.trace_frame().to_csv(filepath, index=False, float_format=CSV_FLOAT_FORMAT)


def _grid_offsets(root: int, gamma: float) -> np.ndarray:
    # (pi/gamma) * (j - root/2) + pi/(2*gamma), written so symmetric offsets are exact
    return (np.arange(root) - (root - 1) / 2.0) * (math.pi / gamma)


def _grid_pairs(theta_values: np.ndarray, eta_values: np.ndarray) -> List[AnglePair]:
    root = theta_values.size
    return [AnglePair(float(theta_values[ell // root]), float(eta_values[ell % root]))
            for ell in range(root * root)]


def initial_grid(l1: int) -> List[AnglePair]:
    """
    First-iteration grid: centers of a sqrt(L_1) x sqrt(L_1) tiling of [-pi/2, pi/2]^2.

    theta follows floor((l-1)/sqrt(L_1)), eta follows mod(l-1, sqrt(L_1)).

    Raises:
        ValueError: If l1 is not a perfect square
    """
    root = integer_sqrt(l1, "L_1")
    offsets = _grid_offsets(root, float(root))
    return _grid_pairs(offsets, offsets)


def refined_grid(center: AnglePair, gamma_prev: float, li: int) -> List[AnglePair]:
    """
    Grid of L_i pairs around the previously selected pair.

    gamma_i = gamma_prev * sqrt(L_i) sets the spacing pi/gamma_i; pairs leaving
    [-pi/2, pi/2] are clamped to the boundary.

    Raises:
        ValueError: If li is not a perfect square or gamma_prev is not positive
    """
    root = integer_sqrt(li, "L_i")
    if not gamma_prev > 0:
        raise ValueError(f"gamma_prev must be positive, got {gamma_prev}")
    offsets = _grid_offsets(root, gamma_prev * root)
    thetas = np.clip(center.theta + offsets, -RIS_ANGLE_LIMIT, RIS_ANGLE_LIMIT)
    etas = np.clip(center.eta + offsets, -RIS_ANGLE_LIMIT, RIS_ANGLE_LIMIT)
    return _grid_pairs(thetas, etas)


def select_best(estimated_rates: Iterable[float]) -> int:
    """
    0-based index of the largest rate; ties go to the lowest index.

    Raises:
        ValueError: If the list is empty or holds non-finite values
    """
    rates = np.asarray(list(estimated_rates), dtype=float)
    if rates.size == 0:
        raise ValueError("Cannot select from an empty rate list")
    if not np.all(np.isfinite(rates)):
        raise ValueError("Rates must be finite")
    return int(np.argmax(rates))


def estimation_time(t0: float, num_blocks: int, schedule: GridSchedule) -> float:
    """T = T_0 * M * (L_1 + P * sum_{i>=2} L_i)."""
    return float(t0) * num_blocks * schedule.soundings_per_step


class _Best(NamedTuple):
    rate: float
    phases: np.ndarray
    pair: AnglePair


class FicOptimizer:
    """Runs the FIC search against a (H, G) channel pair."""

    def __init__(self, logger, geometry: ArrayGeometry, quantization_bits: Optional[int] = None):
        """
        Initialize the optimizer.

        Args:
            logger: SimLogger instance
            geometry: RIS geometry (element count and spacing)
            quantization_bits: Phase resolution of the RIS; None for continuous phases
        """
        self.logger = logger
        self.geometry = geometry
        self.quantization_bits = (None if quantization_bits is None
                                  else validate_positive_int(quantization_bits, "quantization_bits"))

    def _basis(self, h: np.ndarray, g: np.ndarray) -> np.ndarray:
        h = np.asarray(h, dtype=complex)
        g = np.asarray(g, dtype=complex)
        if g.shape[0] != self.geometry.num_elements or h.shape[1] != self.geometry.num_elements:
            raise ValueError(
                f"Channels H {h.shape} / G {g.shape} do not match N_I={self.geometry.num_elements}")
        return cascade_basis(h, g)

    def candidate_phases(self, base: RisConfig, pairs: Sequence[AnglePair]) -> np.ndarray:
        """Phase rows for the pairs, written only to base's unfrozen elements."""
        thetas = np.array([pair.theta for pair in pairs])
        etas = np.array([pair.eta for pair in pairs])
        return self.candidate_phases_from_arrays(base, thetas, etas)

    def candidate_phases_from_arrays(self, base: RisConfig, thetas: np.ndarray,
                                     etas: np.ndarray) -> np.ndarray:
        phases = overlay_phases(base, phases_from_angles(thetas, etas, self.geometry))
        if self.quantization_bits is not None:
            phases = quantize_phase_values(phases, self.quantization_bits)
        return phases

    def validate_channels(self, h: np.ndarray, g: np.ndarray) -> np.ndarray:
        """Check H/G against the RIS size and return their cascade basis."""
        return self._basis(h, g)

    def _evaluate(self, basis: np.ndarray, base: RisConfig, pairs: Sequence[AnglePair],
                  noise: NoiseModel, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
        """Sound every candidate once (K-averaged estimates) and return (rates, phases)."""
        phases = self.candidate_phases(base, pairs)
        estimates = estimate_cascades(batch_cascade(basis, phases), noise, rng)
        return achievable_rates(estimates, noise.sigma_sq), phases

    @staticmethod
    def _improve(best: Optional[_Best], rates: np.ndarray, phases: np.ndarray,
                 pairs: Sequence[AnglePair]) -> _Best:
        index = select_best(rates)
        if best is None or rates[index] > best.rate:
            return _Best(float(rates[index]), phases[index], pairs[index])
        return best

    def _search_step(self, basis: np.ndarray, base: RisConfig, schedule: GridSchedule,
                     noise: NoiseModel, rng: np.random.Generator, num_starts: int,
                     step: int, carry: Optional[_Best] = None) -> Tuple[_Best, List[IterationRecord]]:
        """One full FIC search over the unfrozen elements of base."""
        sizes = schedule.sizes
        trace: List[IterationRecord] = []

        pairs = initial_grid(sizes[0])
        rates, phases = self._evaluate(basis, base, pairs, noise, rng)
        trace.append(IterationRecord(step, 0, 1, pairs, rates, select_best(rates)))
        best = self._improve(carry, rates, phases, pairs)

        starts = np.argsort(-rates, kind="stable")[:num_starts]
        for chain, start in enumerate(starts, start=1):
            center = pairs[int(start)]
            gamma_prev = float(integer_sqrt(sizes[0]))
            for iteration in range(1, len(sizes)):
                grid = refined_grid(center, gamma_prev, sizes[iteration])
                grid_rates, grid_phases = self._evaluate(basis, base, grid, noise, rng)
                selected = select_best(grid_rates)
                trace.append(IterationRecord(step, chain, iteration + 1, grid, grid_rates, selected))
                best = self._improve(best, grid_rates, grid_phases, grid)
                center = grid[selected]
                gamma_prev *= integer_sqrt(sizes[iteration])

        self.logger.log(
            f"🔎 Step {step}: best estimated rate {best.rate:.4f} at "
            f"(theta={best.pair.theta:.4f}, eta={best.pair.eta:.4f})", "DEBUG")
        return best, trace

    def _run(self, h: np.ndarray, g: np.ndarray, schedule: GridSchedule, noise: NoiseModel,
             rng: np.random.Generator, num_starts: int,
             frozen_base: Optional[RisConfig]) -> FicResult:
        basis = self._basis(h, g)
        base = frozen_base if frozen_base is not None else RisConfig.zeros(self.geometry.num_elements)
        if base.num_elements != self.geometry.num_elements:
            raise ValueError(f"frozen_base has {base.num_elements} elements, expected "
                             f"{self.geometry.num_elements}")
        best, trace = self._search_step(basis, base, schedule, noise, rng, num_starts, step=1)
        total = noise.t0 * (schedule.sizes[0] + num_starts * schedule.tail_sum)
        return FicResult(
            best_config=RisConfig(best.phases, base.block_assignment, base.frozen_mask),
            best_estimated_rate=best.rate,
            best_pair=best.pair,
            trace=trace,
            total_estimates=int(total),
            per_block_angles=[best.pair],
        )

    def run_single_path(self, h: np.ndarray, g: np.ndarray, schedule: GridSchedule,
                        noise: NoiseModel, rng: np.random.Generator,
                        frozen_base: Optional[RisConfig] = None) -> FicResult:
        """
        Single refinement chain (P = 1) over the elements left unfrozen in frozen_base.

        Returns the best estimated configuration seen in any iteration; the
        refinement center still follows each iteration's own arg max.
        """
        return self._run(h, g, schedule, noise, rng, 1, frozen_base)

    def run_multi_start(self, h: np.ndarray, g: np.ndarray, schedule: GridSchedule,
                        noise: NoiseModel, rng: np.random.Generator,
                        frozen_base: Optional[RisConfig] = None) -> FicResult:
        """
        P refinement chains seeded by the P best first-iteration pairs.

        Raises:
            ValueError: If P exceeds L_1
        """
        if schedule.num_starts > schedule.sizes[0]:
            raise ValueError(f"P={schedule.num_starts} exceeds L_1={schedule.sizes[0]}")
        return self._run(h, g, schedule, noise, rng, schedule.num_starts, frozen_base)

    def run_multipath(self, h: np.ndarray, g: np.ndarray, num_blocks: int,
                      schedule: GridSchedule, noise: NoiseModel,
                      rng: np.random.Generator) -> FicResult:
        """
        M-step search: step m optimizes the unfrozen elements, then freezes sub-block m.

        Rates at step m include the phases already fixed by steps 1..m-1. The
        configuration carried from step m-1 seeds the best-so-far of step m,
        so a sub-block may keep the previous sub-block's angles.

        Raises:
            ValueError: If M does not divide N_I
        """
        num_elements = self.geometry.num_elements
        num_blocks = validate_positive_int(num_blocks, "M")
        block_indices(num_elements, 1, num_blocks)
        basis = self._basis(h, g)

        base = RisConfig.zeros(num_elements, num_blocks)
        carry: Optional[_Best] = None
        trace: List[IterationRecord] = []
        per_block: List[AnglePair] = []

        for step in range(1, num_blocks + 1):
            carry, step_trace = self._search_step(basis, base, schedule, noise, rng,
                                                  schedule.num_starts, step, carry)
            trace.extend(step_trace)
            per_block.append(carry.pair)
            selected = RisConfig(carry.phases, base.block_assignment, base.frozen_mask)
            base = freeze_block(selected, step, num_blocks)

        total = estimation_time(noise.t0, num_blocks, schedule)
        self.logger.log(
            f"✅ FIC {schedule.label} (M={num_blocks}, P={schedule.num_starts}, "
            f"K={noise.estimates_per_config}) done: T={total:.0f}, "
            f"estimated rate {carry.rate:.4f}", "DEBUG")
        return FicResult(
            best_config=base,
            best_estimated_rate=carry.rate,
            best_pair=carry.pair,
            trace=trace,
            total_estimates=int(total),
            per_block_angles=per_block,
        )
