"""
Channel Model Module
Steering vectors, geometric multipath channels, random channel realizations,
and the end-to-end cascade channel Q = H * Phi * G.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple, Union

import numpy as np
import pandas as pd

from config import *
from modules.utils import validate_numeric_input, validate_positive_int

PATHSET_COLUMNS = ["l", "re_gain", "im_gain", "departure", "arrival"]


@dataclass(frozen=True)
class ArrayGeometry:
    """Uniform linear array (or RIS line): element count and spacing d/lambda."""

    num_elements: int
    spacing_over_lambda: float = DEFAULT_SPACING_OVER_LAMBDA

    def __post_init__(self):
        object.__setattr__(self, "num_elements",
                           validate_positive_int(self.num_elements, "num_elements"))
        spacing = validate_numeric_input(self.spacing_over_lambda, 0.0, name="spacing_over_lambda")
        if spacing <= 0:
            raise ValueError("spacing_over_lambda must be positive")
        object.__setattr__(self, "spacing_over_lambda", spacing)


@dataclass(frozen=True, eq=False)
class PathSet:
    """
    Paths of one geometric channel.

    gains are complex linear amplitudes; departure/arrival angles in radians.
    """

    gains: np.ndarray
    departure_angles: np.ndarray
    arrival_angles: np.ndarray

    def __post_init__(self):
        gains = np.atleast_1d(np.asarray(self.gains, dtype=complex))
        departure = np.atleast_1d(np.asarray(self.departure_angles, dtype=float))
        arrival = np.atleast_1d(np.asarray(self.arrival_angles, dtype=float))

        if gains.ndim != 1 or gains.size < 1:
            raise ValueError("PathSet needs at least one path")
        if not (gains.size == departure.size == arrival.size):
            raise ValueError(
                f"PathSet lists differ in length: {gains.size}, {departure.size}, {arrival.size}")
        if not (np.all(np.isfinite(departure)) and np.all(np.isfinite(arrival))):
            raise ValueError("PathSet angles must be finite")

        for array in (gains, departure, arrival):
            array.setflags(write=False)
        object.__setattr__(self, "gains", gains)
        object.__setattr__(self, "departure_angles", departure)
        object.__setattr__(self, "arrival_angles", arrival)

    @property
    def num_paths(self) -> int:
        return int(self.gains.size)

    def to_frame(self) -> pd.DataFrame:
        """Tabular form: one row per path (l is 1-based)."""
        return pd.DataFrame({
            "l": np.arange(1, self.num_paths + 1),
            "re_gain": self.gains.real,
            "im_gain": self.gains.imag,
            "departure": self.departure_angles,
            "arrival": self.arrival_angles,
        }, columns=PATHSET_COLUMNS)

    def to_csv(self, filepath: str) -> None:
        """Export as CSV rows (l, Re gain, Im gain, departure, arrival)."""
        self.to_frame().to_csv(filepath, index=False, float_format="%.17g")

    @classmethod
    def from_csv(cls, filepath: str) -> "PathSet":
        """Load a PathSet written by to_csv."""
        frame = pd.read_csv(filepath, float_precision="round_trip")
        missing = [c for c in PATHSET_COLUMNS if c not in frame.columns]
        if missing:
            raise ValueError(f"PathSet CSV is missing columns: {missing}")
        frame = frame.sort_values("l")
        gains = frame["re_gain"].to_numpy() + 1j * frame["im_gain"].to_numpy()
        return cls(gains, frame["departure"].to_numpy(), frame["arrival"].to_numpy())


def _default_power_profile(num_paths: int) -> Tuple[float, ...]:
    return tuple([1.0 / num_paths] * num_paths)


def _validate_range(name: str, bounds) -> Tuple[float, float]:
    low, high = (float(b) for b in bounds)
    if not (math.isfinite(low) and math.isfinite(high)) or low > high:
        raise ValueError(f"Invalid angle range for {name}: {bounds}")
    return low, high


def _validate_profile(name: str, profile, num_paths: int) -> Tuple[float, ...]:
    values = tuple(float(p) for p in profile)
    if len(values) != num_paths:
        raise ValueError(f"{name} has {len(values)} entries for {num_paths} paths")
    if any(p <= 0 for p in values):
        raise ValueError(f"{name} entries must be positive")
    if abs(sum(values) - 1.0) > POWER_PROFILE_TOLERANCE:
        raise ValueError(f"{name} must sum to 1, got {sum(values)!r}")
    return values


@dataclass(frozen=True)
class ChannelScenario:
    """Geometry, path counts, angle ranges, and gain profiles of the random channel."""

    source: ArrayGeometry = field(default_factory=lambda: ArrayGeometry(DEFAULT_NUM_ANTENNAS_S))
    ris: ArrayGeometry = field(default_factory=lambda: ArrayGeometry(DEFAULT_NUM_RIS_ELEMENTS))
    destination: ArrayGeometry = field(default_factory=lambda: ArrayGeometry(DEFAULT_NUM_ANTENNAS_D))
    num_paths_g: int = DEFAULT_NUM_PATHS_G
    num_paths_h: int = DEFAULT_NUM_PATHS_H
    angle_ranges: Dict[str, Tuple[float, float]] = field(
        default_factory=lambda: dict(DEFAULT_ANGLE_RANGES))
    power_profile_g: Optional[Tuple[float, ...]] = None
    power_profile_h: Optional[Tuple[float, ...]] = None
    seed: int = DEFAULT_SCENARIO_SEED

    def __post_init__(self):
        num_g = validate_positive_int(self.num_paths_g, "num_paths_g")
        num_h = validate_positive_int(self.num_paths_h, "num_paths_h")
        object.__setattr__(self, "num_paths_g", num_g)
        object.__setattr__(self, "num_paths_h", num_h)

        ranges = dict(DEFAULT_ANGLE_RANGES)
        for name, bounds in dict(self.angle_ranges).items():
            if name not in DEFAULT_ANGLE_RANGES:
                raise ValueError(f"Unknown angle range '{name}'")
            ranges[name] = _validate_range(name, bounds)
        object.__setattr__(self, "angle_ranges", ranges)

        profile_g = self.power_profile_g or _default_power_profile(num_g)
        profile_h = self.power_profile_h or _default_power_profile(num_h)
        object.__setattr__(self, "power_profile_g", _validate_profile("power_profile_g", profile_g, num_g))
        object.__setattr__(self, "power_profile_h", _validate_profile("power_profile_h", profile_h, num_h))
        object.__setattr__(self, "seed", validate_positive_int(self.seed, "seed", 0))

    @property
    def default_num_blocks(self) -> int:
        """M = min(L_G, L_H)."""
        return min(self.num_paths_g, self.num_paths_h)

    def to_dict(self) -> Dict[str, object]:
        """Flat key-value form used by the config file [scenario] section."""
        return {
            "num_antennas_s": self.source.num_elements,
            "num_antennas_d": self.destination.num_elements,
            "num_ris_elements": self.ris.num_elements,
            "spacing_over_lambda": self.ris.spacing_over_lambda,
            "num_paths_g": self.num_paths_g,
            "num_paths_h": self.num_paths_h,
            "theta_g_range": list(self.angle_ranges["theta_g"]),
            "eta_g_range": list(self.angle_ranges["eta_g"]),
            "theta_h_range": list(self.angle_ranges["theta_h"]),
            "eta_h_range": list(self.angle_ranges["eta_h"]),
            "power_profile_g": list(self.power_profile_g),
            "power_profile_h": list(self.power_profile_h),
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, values: Dict[str, object]) -> "ChannelScenario":
        """Build a scenario from the [scenario] section; missing keys take defaults."""
        spacing = values.get("spacing_over_lambda", DEFAULT_SPACING_OVER_LAMBDA)
        ranges = {name: tuple(values[f"{name}_range"])
                  for name in DEFAULT_ANGLE_RANGES if f"{name}_range" in values}
        profile_g = values.get("power_profile_g")
        profile_h = values.get("power_profile_h")
        return cls(
            source=ArrayGeometry(values.get("num_antennas_s", DEFAULT_NUM_ANTENNAS_S), spacing),
            ris=ArrayGeometry(values.get("num_ris_elements", DEFAULT_NUM_RIS_ELEMENTS), spacing),
            destination=ArrayGeometry(values.get("num_antennas_d", DEFAULT_NUM_ANTENNAS_D), spacing),
            num_paths_g=values.get("num_paths_g", DEFAULT_NUM_PATHS_G),
            num_paths_h=values.get("num_paths_h", DEFAULT_NUM_PATHS_H),
            angle_ranges=ranges,
            power_profile_g=tuple(profile_g) if profile_g else None,
            power_profile_h=tuple(profile_h) if profile_h else None,
            seed=values.get("seed", DEFAULT_SCENARIO_SEED),
        )


def array_response(angle: float, geometry: ArrayGeometry) -> np.ndarray:
    """
    Array response (steering) vector.

    Entry n (0-based) is exp(j * 2*pi * (d/lambda) * n * sin(angle)).

    Args:
        angle: Angle of arrival or departure in radians
        geometry: Array geometry

    Returns:
        Complex vector of length geometry.num_elements
    """
    if not math.isfinite(angle):
        raise ValueError(f"angle must be finite, got {angle}")
    n = np.arange(geometry.num_elements)
    return np.exp(1j * 2.0 * math.pi * geometry.spacing_over_lambda * n * math.sin(angle))


def steering_matrix(angles: np.ndarray, geometry: ArrayGeometry) -> np.ndarray:
    """Stack steering vectors column-wise: shape (num_elements, len(angles))."""
    angles = np.atleast_1d(np.asarray(angles, dtype=float))
    n = np.arange(geometry.num_elements)[:, None]
    return np.exp(1j * 2.0 * math.pi * geometry.spacing_over_lambda * n * np.sin(angles)[None, :])


def synthesize_channel(paths: PathSet, rx_geometry: ArrayGeometry,
                       tx_geometry: ArrayGeometry) -> np.ndarray:
    """
    Geometric channel A(arrival) diag(gains) A(departure)^H.

    Args:
        paths: Path gains and angles
        rx_geometry: Receiving array (rows)
        tx_geometry: Transmitting array (columns)

    Returns:
        Complex matrix of shape (rx.num_elements, tx.num_elements)
    """
    arrival = steering_matrix(paths.arrival_angles, rx_geometry)
    departure = steering_matrix(paths.departure_angles, tx_geometry)
    return (arrival * paths.gains[None, :]) @ departure.conj().T


def _sample_paths(rng: np.random.Generator, num_paths: int, profile: Tuple[float, ...],
                  departure_range: Tuple[float, float],
                  arrival_range: Tuple[float, float]) -> PathSet:
    departure = rng.uniform(departure_range[0], departure_range[1], size=num_paths)
    arrival = rng.uniform(arrival_range[0], arrival_range[1], size=num_paths)
    scale = np.sqrt(np.asarray(profile) / 2.0)
    gains = scale * (rng.standard_normal(num_paths) + 1j * rng.standard_normal(num_paths))
    return PathSet(gains, departure, arrival)


def sample_channel_pair(scenario: ChannelScenario,
                        rng: Optional[np.random.Generator] = None) -> Tuple[PathSet, PathSet]:
    """
    Draw one random realization of the S-I channel G and the I-D channel H.

    Angles are uniform over the scenario ranges, gains circularly-symmetric
    complex Gaussian with the profile variances. Draw order is fixed
    (G then H), so the result is a deterministic function of the stream.

    Args:
        scenario: Channel scenario
        rng: Random stream; defaults to one seeded with scenario.seed

    Returns:
        (paths of G, paths of H)
    """
    if rng is None:
        rng = np.random.default_rng(scenario.seed)
    ranges = scenario.angle_ranges
    paths_g = _sample_paths(rng, scenario.num_paths_g, scenario.power_profile_g,
                            ranges["theta_g"], ranges["eta_g"])
    paths_h = _sample_paths(rng, scenario.num_paths_h, scenario.power_profile_h,
                            ranges["theta_h"], ranges["eta_h"])
    return paths_g, paths_h


def build_channels(scenario: ChannelScenario, paths_g: PathSet,
                   paths_h: PathSet) -> Tuple[np.ndarray, np.ndarray]:
    """Synthesize (H, G) for the scenario geometry: H is N_D x N_I, G is N_I x N_S."""
    g = synthesize_channel(paths_g, scenario.ris, scenario.source)
    h = synthesize_channel(paths_h, scenario.destination, scenario.ris)
    return h, g


def _phase_coefficients(config) -> np.ndarray:
    phases = getattr(config, "phases", config)
    return np.exp(1j * np.asarray(phases, dtype=float))


def compose_cascade(h: np.ndarray, config, g: np.ndarray) -> np.ndarray:
    """
    End-to-end uplink channel Q = H diag(exp(j*phi)) G.

    Args:
        h: I-D channel, N_D x N_I
        config: RisConfig (or a plain phase vector) with N_I phases
        g: S-I channel, N_I x N_S

    Returns:
        Q of shape N_D x N_S

    Raises:
        ValueError: On dimension mismatch
    """
    h = np.asarray(h)
    g = np.asarray(g)
    coefficients = _phase_coefficients(config)
    if h.ndim != 2 or g.ndim != 2:
        raise ValueError("H and G must be matrices")
    if h.shape[1] != g.shape[0] or coefficients.shape != (g.shape[0],):
        raise ValueError(
            f"Dimension mismatch: H {h.shape}, config {coefficients.shape}, G {g.shape}")
    return (h * coefficients[None, :]) @ g


def cascade_basis(h: np.ndarray, g: np.ndarray) -> np.ndarray:
    """
    Per-element cascade terms B[k, d, s] = H[d, k] * G[k, s].

    For a batch of coefficient rows C (L x N_I), the cascades are C @ B
    reshaped to (L, N_D, N_S).
    """
    if h.shape[1] != g.shape[0]:
        raise ValueError(f"Dimension mismatch: H {h.shape}, G {g.shape}")
    return h.T[:, :, None] * g[:, None, :]


def batch_cascade(basis: np.ndarray, phases: np.ndarray) -> np.ndarray:
    """
    Cascades for a batch of phase vectors.

    Args:
        basis: Output of cascade_basis, shape (N_I, N_D, N_S)
        phases: Phase matrix, shape (L, N_I)

    Returns:
        Array of shape (L, N_D, N_S)
    """
    num_elements, num_rx, num_tx = basis.shape
    coefficients = np.exp(1j * np.asarray(phases, dtype=float))
    flat = coefficients @ basis.reshape(num_elements, num_rx * num_tx)
    return flat.reshape(-1, num_rx, num_tx)
