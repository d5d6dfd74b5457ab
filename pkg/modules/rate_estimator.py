"""
Rate Estimator Module
Achievable rate of a cascade channel and the noisy channel estimates the
destination obtains for each sounded RIS configuration.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from config import DEFAULT_SNR_DB
from modules.utils import validate_numeric_input, validate_positive_int

LOG2 = math.log(2.0)


@dataclass(frozen=True)
class NoiseModel:
    """
    Receiver noise power, channel-estimate perturbation, and estimates per configuration.

    est_noise_sigma_sq is the per-entry variance of a single estimate's
    perturbation; K estimates are averaged, so one sounding takes T_0 = K.
    """

    sigma_sq: float
    est_noise_sigma_sq: float
    estimates_per_config: int = 1

    def __post_init__(self):
        sigma_sq = validate_numeric_input(self.sigma_sq, 0.0, name="sigma_sq")
        if sigma_sq <= 0:
            raise ValueError("sigma_sq must be positive")
        object.__setattr__(self, "sigma_sq", sigma_sq)
        object.__setattr__(self, "est_noise_sigma_sq",
                           validate_numeric_input(self.est_noise_sigma_sq, 0.0, name="est_noise_sigma_sq"))
        object.__setattr__(self, "estimates_per_config",
                           validate_positive_int(self.estimates_per_config, "K"))

    @classmethod
    def from_snr_db(cls, snr_db: float = DEFAULT_SNR_DB, estimates_per_config: int = 1,
                    est_noise_sigma_sq: Optional[float] = None) -> "NoiseModel":
        """
        Noise model for unit channel power and unit transmit power.

        sigma^2 = 10^(-snr_db/10); the estimate perturbation defaults to sigma^2
        (one unit-energy pilot symbol per estimate).
        """
        sigma_sq = 10.0 ** (-float(snr_db) / 10.0)
        if est_noise_sigma_sq is None:
            est_noise_sigma_sq = sigma_sq
        return cls(sigma_sq, est_noise_sigma_sq, estimates_per_config)

    @property
    def t0(self) -> int:
        """Time per sounded configuration (one unit per estimate)."""
        return self.estimates_per_config

    @property
    def noiseless(self) -> bool:
        return self.est_noise_sigma_sq == 0.0

    def with_k(self, estimates_per_config: int) -> "NoiseModel":
        return NoiseModel(self.sigma_sq, self.est_noise_sigma_sq, estimates_per_config)


def _check_finite(q: np.ndarray) -> None:
    if not np.all(np.isfinite(q)):
        raise ValueError("Channel matrix has non-finite entries")


def _log2_det_gram(q: np.ndarray, sigma_sq: float) -> np.ndarray:
    """log2 det(I + Q^H Q / sigma^2) over the trailing two axes via Cholesky."""
    num_tx = q.shape[-1]
    gram = np.swapaxes(q.conj(), -1, -2) @ q / sigma_sq
    gram = gram + np.eye(num_tx)
    factor = np.linalg.cholesky(gram)
    diagonal = np.real(np.diagonal(factor, axis1=-2, axis2=-1))
    return np.maximum(2.0 * np.sum(np.log(diagonal), axis=-1) / LOG2, 0.0)


def achievable_rate(q: np.ndarray, sigma_sq: float) -> float:
    """
    Achievable rate log2 det(I + Q^H Q / sigma^2) in bits/s/Hz.

    Args:
        q: Cascade channel N_D x N_S
        sigma_sq: Noise power

    Returns:
        float: Nonnegative rate

    Raises:
        ValueError: If q has non-finite entries or sigma_sq <= 0
    """
    q = np.asarray(q, dtype=complex)
    if q.ndim != 2:
        raise ValueError(f"Expected a matrix, got shape {q.shape}")
    _check_finite(q)
    if not sigma_sq > 0:
        raise ValueError("sigma_sq must be positive")
    return float(_log2_det_gram(q, sigma_sq))


def achievable_rates(qs: np.ndarray, sigma_sq: float) -> np.ndarray:
    """Rates for a stack of cascades of shape (L, N_D, N_S)."""
    qs = np.asarray(qs, dtype=complex)
    if qs.ndim != 3:
        raise ValueError(f"Expected a stack of matrices, got shape {qs.shape}")
    _check_finite(qs)
    if not sigma_sq > 0:
        raise ValueError("sigma_sq must be positive")
    return _log2_det_gram(qs, sigma_sq)


def _perturbation(shape, model: NoiseModel, rng: np.random.Generator) -> np.ndarray:
    """Average of K circularly-symmetric Gaussian perturbations, drawn as one block."""
    k = model.estimates_per_config
    scale = math.sqrt(model.est_noise_sigma_sq / 2.0)
    full_shape = shape[:-2] + (k,) + shape[-2:]
    draws = scale * (rng.standard_normal(full_shape) + 1j * rng.standard_normal(full_shape))
    return draws.mean(axis=-3)


def estimate_cascade(q_true: np.ndarray, model: NoiseModel,
                     rng: np.random.Generator) -> np.ndarray:
    """
    Noisy estimate Q + mean of K perturbations.

    Each perturbation has i.i.d. CN(0, est_noise_sigma_sq) entries, so the
    averaged error has per-entry variance est_noise_sigma_sq / K. The noiseless
    model returns an exact copy and draws nothing.
    """
    q_true = np.asarray(q_true, dtype=complex)
    if model.noiseless:
        return q_true.copy()
    return q_true + _perturbation(q_true.shape, model, rng)


def estimate_cascades(qs: np.ndarray, model: NoiseModel,
                      rng: np.random.Generator) -> np.ndarray:
    """Batch form of estimate_cascade; draws for all configurations in one block."""
    return estimate_cascade(qs, model, rng)
