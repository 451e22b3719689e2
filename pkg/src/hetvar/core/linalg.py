"""
Symmetric positive-definite helpers built on Cholesky factors
"""

from typing import Tuple

import numpy as np
from scipy import linalg

from ..exceptions import SolverError
from ..utils.logger import get_logger

logger = get_logger(__name__)


def symmetrize(A: np.ndarray) -> np.ndarray:
    return 0.5 * (A + A.T)


def cholesky_jitter(A: np.ndarray, jitter: float = 1e-10) -> np.ndarray:
    """
    Lower Cholesky factor of A.

    On failure a diagonal jitter of jitter * max(1, mean(diag A)) is added
    once; a second failure raises SolverError.
    """
    A = symmetrize(np.asarray(A, dtype=float))
    try:
        return linalg.cholesky(A, lower=True)
    except linalg.LinAlgError:
        pass

    bump = jitter * max(1.0, float(np.mean(np.diag(A)))) if A.size else jitter
    logger.debug(f"Cholesky failed, retrying with jitter {bump:.3e}")
    try:
        return linalg.cholesky(A + bump * np.eye(A.shape[0]), lower=True)
    except linalg.LinAlgError as e:
        raise SolverError(f"Matrix is not positive definite even after jitter {bump:.3e}: {e}")


def logdet_from_chol(L: np.ndarray) -> float:
    return float(2.0 * np.sum(np.log(np.diag(L))))


def spd_inverse(A: np.ndarray, jitter: float = 1e-10) -> Tuple[np.ndarray, float]:
    """Inverse of an SPD matrix and the log-determinant of the inverse"""
    L = cholesky_jitter(A, jitter)
    inverse = linalg.cho_solve((L, True), np.eye(A.shape[0]))
    return symmetrize(inverse), -logdet_from_chol(L)


def spd_solve(A: np.ndarray, b: np.ndarray, jitter: float = 1e-10) -> np.ndarray:
    L = cholesky_jitter(A, jitter)
    return linalg.cho_solve((L, True), b)


def quadratic_diag(M: np.ndarray, S: np.ndarray) -> np.ndarray:
    """Row-wise m_i^T S m_i"""
    return np.einsum("ij,jk,ik->i", M, S, M)
