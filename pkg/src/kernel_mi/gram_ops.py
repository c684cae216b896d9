"""
Linear algebra shared by the MI and SMI estimators
"""
import logging
from typing import Tuple

import numpy as np
from scipy.linalg import cho_solve
from scipy.linalg.lapack import dpotrf

from .exceptions import ConditioningError, ParameterError, ShapeError

logger = logging.getLogger(__name__)

PIVOT_TOLERANCE = 1e-12
JITTER = 1e-10
SYMMETRY_TOLERANCE = 1e-10


def center(K: np.ndarray) -> np.ndarray:
    """
    Centered Gram G = H K H with H = I - 11^T / n

    Uses the four-term form k_ij - rowmean_i - colmean_j + grandmean, which
    equals H K H without building H.
    """
    K = np.asarray(K, dtype=float)
    if K.ndim != 2 or K.shape[0] != K.shape[1]:
        raise ShapeError(f"Gram must be square, got shape {K.shape}")

    row_mean = K.mean(axis=1, keepdims=True)
    col_mean = K.mean(axis=0, keepdims=True)
    G = K - row_mean - col_mean + K.mean()
    G = 0.5 * (G + G.T)
    return G


def _check_symmetric(M: np.ndarray) -> None:
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ShapeError(f"Matrix must be square, got shape {M.shape}")
    scale = max(1.0, float(np.max(np.abs(M)))) if M.size else 1.0
    if not np.allclose(M, M.T, rtol=0.0, atol=SYMMETRY_TOLERANCE * scale):
        raise ShapeError("Matrix is not symmetric within tolerance")


def _try_cholesky(M: np.ndarray) -> Tuple[np.ndarray, int]:
    """Lower Cholesky factor and LAPACK-style info (0 ok, k>0 failing pivot k)"""
    L, info = dpotrf(M, lower=1, clean=1, overwrite_a=0)
    if info < 0:
        raise ShapeError(f"Invalid argument {-info} passed to dpotrf")
    if info == 0:
        pivots = np.diag(L) ** 2
        bad = np.nonzero(pivots <= PIVOT_TOLERANCE)[0]
        if bad.size:
            info = int(bad[0]) + 1
    return L, info


def cholesky_factor(M: np.ndarray) -> np.ndarray:
    """
    Lower Cholesky factor of a symmetric positive definite matrix

    On a failing pivot a diagonal jitter of 1e-10 is added once; if the
    factorization still fails a ConditioningError is raised.
    """
    M = np.asarray(M, dtype=float)
    _check_symmetric(M)

    L, info = _try_cholesky(M)
    if info == 0:
        return L

    logger.warning(f"Cholesky pivot {info - 1} below tolerance, retrying with jitter {JITTER}")
    L, info = _try_cholesky(M + JITTER * np.eye(M.shape[0]))
    if info == 0:
        return L

    raise ConditioningError(
        f"Matrix is not positive definite: pivot {info - 1} below {PIVOT_TOLERANCE}",
        pivot_index=info - 1,
    )


def logdet_spd(M: np.ndarray) -> float:
    """log det M from the Cholesky factor, never NaN"""
    L = cholesky_factor(M)
    return float(2.0 * np.sum(np.log(np.diag(L))))


def resolvent(G: np.ndarray, lam: float) -> np.ndarray:
    """R = G (G + lam I)^{-1} by a Cholesky solve, symmetrized"""
    if not lam > 0:
        raise ParameterError(f"Regularizer must be positive, got {lam}")
    n = G.shape[0]
    L = cholesky_factor(G + lam * np.eye(n))
    # G and (G + lam I) commute, so the solve gives R directly
    R = cho_solve((L, True), G)
    return 0.5 * (R + R.T)


def resolvent_product_trace(G1: np.ndarray, G2: np.ndarray, lam: float) -> float:
    """Tr(R1 R2) with R_l = G_l (G_l + lam I)^{-1}"""
    G1 = np.asarray(G1, dtype=float)
    G2 = np.asarray(G2, dtype=float)
    if G1.shape != G2.shape:
        raise ShapeError(f"Centered Grams differ in shape: {G1.shape} vs {G2.shape}")

    R1 = resolvent(G1, lam)
    R2 = resolvent(G2, lam)
    # both symmetric: Tr(R1 R2) = sum(R1 * R2), which is swap-invariant bit for bit
    return float(np.sum(R1 * R2))
