"""
RIS Configuration Module
Unit-modulus phase configurations built from angle pairs, interleaved
sub-block partitions for multipath operation, and phase quantization.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np
import pandas as pd

from config import RIS_ANGLE_LIMIT
from modules.channel import ArrayGeometry
from modules.utils import TWO_PI, validate_positive_int, wrap_phase

CONFIG_COLUMNS = ["index", "phase", "block", "frozen"]


class AnglePair(NamedTuple):
    """Departure angle toward D (theta) and arrival angle from S (eta) at the RIS."""

    theta: float
    eta: float

    def is_valid(self) -> bool:
        return (abs(self.theta) <= RIS_ANGLE_LIMIT + 1e-12
                and abs(self.eta) <= RIS_ANGLE_LIMIT + 1e-12)

    def clamped(self) -> "AnglePair":
        """Clamp both angles into [-pi/2, pi/2]."""
        return AnglePair(float(np.clip(self.theta, -RIS_ANGLE_LIMIT, RIS_ANGLE_LIMIT)),
                         float(np.clip(self.eta, -RIS_ANGLE_LIMIT, RIS_ANGLE_LIMIT)))


def _frozen_array(values, dtype) -> np.ndarray:
    array = np.array(values, dtype=dtype)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class RisConfig:
    """
    Immutable RIS configuration.

    phases are wrapped to [0, 2*pi); block_assignment holds 1-based sub-block
    indices; frozen_mask marks elements fixed by earlier multipath steps.
    """

    phases: np.ndarray
    block_assignment: Optional[np.ndarray] = None
    frozen_mask: Optional[np.ndarray] = None

    def __post_init__(self):
        phases = np.atleast_1d(np.asarray(self.phases, dtype=float))
        if phases.ndim != 1 or phases.size < 1:
            raise ValueError("RisConfig needs a non-empty phase vector")
        if not np.all(np.isfinite(phases)):
            raise ValueError("RisConfig phases must be finite")
        size = phases.size

        blocks = np.ones(size, dtype=int) if self.block_assignment is None else self.block_assignment
        frozen = np.zeros(size, dtype=bool) if self.frozen_mask is None else self.frozen_mask
        blocks = np.asarray(blocks, dtype=int)
        frozen = np.asarray(frozen, dtype=bool)
        if blocks.shape != (size,) or frozen.shape != (size,):
            raise ValueError(
                f"RisConfig shapes differ: phases {size}, blocks {blocks.shape}, frozen {frozen.shape}")
        if np.any(blocks < 1):
            raise ValueError("block indices are 1-based")

        object.__setattr__(self, "phases", _frozen_array(wrap_phase(phases), float))
        object.__setattr__(self, "block_assignment", _frozen_array(blocks, int))
        object.__setattr__(self, "frozen_mask", _frozen_array(frozen, bool))

    @property
    def num_elements(self) -> int:
        return int(self.phases.size)

    @property
    def frozen_indices(self) -> np.ndarray:
        """0-based indices of frozen elements."""
        return np.flatnonzero(self.frozen_mask)

    @classmethod
    def zeros(cls, num_elements: int, num_blocks: int = 1) -> "RisConfig":
        """All-zero phases, nothing frozen, blocks assigned by interleaving."""
        blocks = np.arange(num_elements) % num_blocks + 1
        return cls(np.zeros(num_elements), blocks)

    def coefficients(self) -> np.ndarray:
        """Diagonal of Phi: exp(j * phases)."""
        return np.exp(1j * self.phases)

    def matrix(self) -> np.ndarray:
        """Phase control matrix Phi."""
        return np.diag(self.coefficients())

    def with_phases(self, phases: np.ndarray) -> "RisConfig":
        return RisConfig(phases, self.block_assignment, self.frozen_mask)

    def to_frame(self) -> pd.DataFrame:
        """Tabular form (index is 1-based)."""
        return pd.DataFrame({
            "index": np.arange(1, self.num_elements + 1),
            "phase": self.phases,
            "block": self.block_assignment,
            "frozen": self.frozen_mask,
        }, columns=CONFIG_COLUMNS)

    def to_csv(self, filepath: str) -> None:
        """Export as CSV rows (index, phase, block, frozen)."""
        self.to_frame().to_csv(filepath, index=False, float_format="%.17g")

    @classmethod
    def from_csv(cls, filepath: str) -> "RisConfig":
        """Load a configuration written by to_csv."""
        frame = pd.read_csv(filepath, float_precision="round_trip")
        missing = [c for c in CONFIG_COLUMNS if c not in frame.columns]
        if missing:
            raise ValueError(f"RisConfig CSV is missing columns: {missing}")
        frame = frame.sort_values("index")
        frozen = frame["frozen"]
        if frozen.dtype == object:
            frozen = frozen.astype(str).str.strip().str.lower() == "true"
        return cls(frame["phase"].to_numpy(), frame["block"].to_numpy(), frozen.to_numpy(dtype=bool))


def phases_from_angles(thetas: np.ndarray, etas: np.ndarray, geometry: ArrayGeometry) -> np.ndarray:
    """
    Aligning phases for a batch of angle pairs.

    Row l holds 2*pi*(d/lambda)*(sin theta_l - sin eta_l)*k for k = 0..N_I-1,
    wrapped to [0, 2*pi).

    Returns:
        Array of shape (len(thetas), N_I)
    """
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    etas = np.atleast_1d(np.asarray(etas, dtype=float))
    slope = TWO_PI * geometry.spacing_over_lambda * (np.sin(thetas) - np.sin(etas))
    k = np.arange(geometry.num_elements)
    return wrap_phase(slope[:, None] * k[None, :])


def config_from_angles(pair: AnglePair, geometry: ArrayGeometry) -> RisConfig:
    """
    Configuration aligning arrival angle eta with departure angle theta.

    Args:
        pair: Angle pair at the RIS
        geometry: RIS geometry

    Returns:
        Single-block configuration with nothing frozen
    """
    if not pair.is_valid():
        raise ValueError(f"Angle pair {pair} outside [-pi/2, pi/2]")
    return RisConfig(phases_from_angles(pair.theta, pair.eta, geometry)[0])


def overlay_configs(base: RisConfig, update: RisConfig) -> RisConfig:
    """
    Frozen elements keep base phases; the others take update phases.

    Raises:
        ValueError: If the configurations differ in size
    """
    if base.num_elements != update.num_elements:
        raise ValueError(
            f"Cannot overlay configs of size {update.num_elements} on {base.num_elements}")
    phases = np.where(base.frozen_mask, base.phases, update.phases)
    return RisConfig(phases, base.block_assignment, base.frozen_mask)


def overlay_phases(base: RisConfig, phases: np.ndarray) -> np.ndarray:
    """Batch overlay: rows of phases with base's frozen elements written over them."""
    return np.where(base.frozen_mask[None, :], base.phases[None, :], phases)


def block_indices(num_elements: int, step: int, num_blocks: int) -> np.ndarray:
    """0-based indices of sub-block `step`: step-1, step-1+M, step-1+2M, ..."""
    num_blocks = validate_positive_int(num_blocks, "M")
    step = validate_positive_int(step, "m")
    if step > num_blocks:
        raise ValueError(f"Block step m={step} outside 1..{num_blocks}")
    if num_elements % num_blocks != 0:
        raise ValueError(f"M={num_blocks} does not divide N_I={num_elements}")
    return np.arange(step - 1, num_elements, num_blocks)


def freeze_block(config: RisConfig, step: int, num_blocks: int) -> RisConfig:
    """
    Freeze the N_I/M elements of sub-block m (stride M) and label them m.

    Raises:
        ValueError: If m is outside 1..M or M does not divide N_I
    """
    indices = block_indices(config.num_elements, step, num_blocks)
    frozen = config.frozen_mask.copy()
    blocks = config.block_assignment.copy()
    frozen[indices] = True
    blocks[indices] = step
    return RisConfig(config.phases, blocks, frozen)


def quantize_phase_values(phases: np.ndarray, bits: int) -> np.ndarray:
    """Round phases to the nearest multiple of 2*pi / 2**bits, wrapped to [0, 2*pi)."""
    bits = validate_positive_int(bits, "bits")
    levels = 2 ** bits
    step = TWO_PI / levels
    indices = np.mod(np.rint(np.asarray(phases, dtype=float) / step), levels)
    return indices * step


def quantize_phases(config: RisConfig, bits: int) -> RisConfig:
    """Quantize every phase of the configuration to `bits` bits."""
    return config.with_phases(quantize_phase_values(config.phases, bits))


def random_config(num_elements: int, rng: np.random.Generator) -> RisConfig:
    """Uniformly random unit-modulus configuration."""
    return RisConfig(rng.uniform(0.0, TWO_PI, size=num_elements))


def alignment_gain(pair: AnglePair, config: RisConfig, geometry: ArrayGeometry) -> float:
    """|alpha^H(theta) Phi alpha(eta)| for the RIS line."""
    k = np.arange(geometry.num_elements)
    scale = TWO_PI * geometry.spacing_over_lambda
    departure = np.exp(1j * scale * k * math.sin(pair.theta))
    arrival = np.exp(1j * scale * k * math.sin(pair.eta))
    return float(abs(np.vdot(departure, config.coefficients() * arrival)))
