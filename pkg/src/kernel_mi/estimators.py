"""
Kernel estimators of mutual information

estimate_mi: log-determinant ratio of regularized block Gram matrices (MI).
estimate_smi: squared Hilbert-Schmidt norm of the normalized cross-covariance
operator, Tr(R1 R2) on centered Grams (SMI).
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple, Union

import numpy as np

from .exceptions import ParameterError, ShapeError
from .gram_ops import center, logdet_spd, resolvent_product_trace

logger = logging.getLogger(__name__)


class Criterion(str, Enum):
    MI = "mi"
    SMI = "smi"


class EpsilonPolicy(str, Enum):
    CONSTANT = "constant"
    DECAY = "decay"


@dataclass(frozen=True)
class MIConfig:
    kappa: float = 0.02

    def __post_init__(self):
        if not self.kappa > 0:
            raise ParameterError(f"kappa must be positive, got {self.kappa}")


@dataclass(frozen=True)
class SMIConfig:
    """epsilon is the constant value, or the scale of eps_n = scale * n^(-1/4)"""
    epsilon: float = 0.01
    policy: EpsilonPolicy = EpsilonPolicy.CONSTANT

    def __post_init__(self):
        object.__setattr__(self, "policy", EpsilonPolicy(self.policy))
        if not self.epsilon > 0:
            raise ParameterError(f"epsilon must be positive, got {self.epsilon}")


def epsilon_n(cfg: SMIConfig, n: int) -> float:
    if cfg.policy is EpsilonPolicy.DECAY:
        return cfg.epsilon * n ** -0.25
    return cfg.epsilon


def _check_pair(K1: np.ndarray, K2: np.ndarray) -> int:
    K1 = np.asarray(K1)
    K2 = np.asarray(K2)
    if K1.ndim != 2 or K1.shape[0] != K1.shape[1]:
        raise ShapeError(f"Gram must be square, got shape {K1.shape}")
    if K1.shape != K2.shape:
        raise ShapeError(f"Gram shapes differ: {K1.shape} vs {K2.shape}")
    if K1.shape[0] < 2:
        raise ShapeError("Estimators need at least 2 samples")
    return K1.shape[0]


def mi_from_blocks(diag1: np.ndarray, diag2: np.ndarray, cross: np.ndarray,
                   diag_logdets: Optional[Tuple[float, float]] = None) -> float:
    """
    -1/2 [log det [[D1, C], [C^T, D2]] - log det D1 - log det D2]

    Args:
        diag1, diag2: Diagonal blocks
        cross: Upper off-diagonal block; the lower block is its transpose
        diag_logdets: Precomputed log-determinants of the diagonal blocks
    """
    n1, n2 = diag1.shape[0], diag2.shape[0]
    if cross.shape != (n1, n2):
        raise ShapeError(f"Cross block shape {cross.shape} does not match ({n1}, {n2})")

    full = np.empty((n1 + n2, n1 + n2))
    full[:n1, :n1] = diag1
    full[n1:, n1:] = diag2
    full[:n1, n1:] = cross
    full[n1:, :n1] = cross.T

    if diag_logdets is None:
        diag_logdets = (logdet_spd(diag1), logdet_spd(diag2))

    return -0.5 * (logdet_spd(full) - diag_logdets[0] - diag_logdets[1])


def estimate_mi(K1: np.ndarray, K2: np.ndarray, cfg: MIConfig = MIConfig()) -> float:
    """
    Regularized kernel MI estimate from two Gram matrices

    Diagonal blocks are (K_l + n kappa/2 I)^2, off-diagonal blocks K1 K2 and
    K2 K1. Raw value is returned; it is >= -1e-8 up to rounding.
    """
    K1 = np.asarray(K1, dtype=float)
    K2 = np.asarray(K2, dtype=float)
    n = _check_pair(K1, K2)
    shift = n * cfg.kappa / 2.0
    eye = np.eye(n)

    A1 = K1 + shift * eye
    A2 = K2 + shift * eye
    D1 = A1 @ A1
    D2 = A2 @ A2
    D1 = 0.5 * (D1 + D1.T)
    D2 = 0.5 * (D2 + D2.T)

    # swapping K1 and K2 permutes the block matrix exactly
    cross = 0.5 * (K1 @ K2 + (K2 @ K1).T)

    logdets = (2.0 * logdet_spd(A1), 2.0 * logdet_spd(A2))
    value = mi_from_blocks(D1, D2, cross, diag_logdets=logdets)
    logger.debug(f"MI estimate n={n} kappa={cfg.kappa}: {value:.6g}")
    return value


def estimate_smi(K1: np.ndarray, K2: np.ndarray, cfg: SMIConfig = SMIConfig()) -> float:
    """SMI estimate Tr(R1 R2) with lambda = n * eps_n on centered Grams"""
    n = _check_pair(K1, K2)
    lam = n * epsilon_n(cfg, n)
    value = resolvent_product_trace(center(K1), center(K2), lam)
    logger.debug(f"SMI estimate n={n} lambda={lam}: {value:.6g}")
    return value


def estimate(K1: np.ndarray, K2: np.ndarray, cfg: Union[MIConfig, SMIConfig]) -> float:
    """Dispatch on the config type"""
    if isinstance(cfg, SMIConfig):
        return estimate_smi(K1, K2, cfg)
    return estimate_mi(K1, K2, cfg)


def clamp_for_report(value: float, tolerance: float = 1e-8) -> float:
    """Round [-tolerance, 0) to 0 for presentation; larger negatives pass through"""
    if -tolerance <= value < 0:
        return 0.0
    return value
