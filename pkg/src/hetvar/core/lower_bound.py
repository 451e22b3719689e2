"""
Closed-form variational lower bound for the heteroscedastic linear model
"""

from typing import Optional

import numpy as np
from scipy import linalg

from .linalg import logdet_from_chol, quadratic_diag
from .models import DesignData, ElboTerms, PriorSpec, SolverConfig, VariationalFit
from ..exceptions import DimensionError, ValidationError

LOG_2PI = float(np.log(2.0 * np.pi))
W_FLOOR = 1e-300


def variance_exponent(Z: np.ndarray, mu_alpha: np.ndarray, Sigma_alpha: np.ndarray,
                      clip: float = 30.0) -> np.ndarray:
    """z_i^T mu - z_i^T Sigma z_i / 2, clipped to [-clip, clip]"""
    e = Z @ mu_alpha - 0.5 * quadratic_diag(Z, Sigma_alpha)
    return np.clip(e, -clip, clip)


def residual_moments(X: np.ndarray, y: np.ndarray, mu_beta: np.ndarray,
                     Sigma_beta: np.ndarray) -> np.ndarray:
    """E_q[(y_i - x_i^T beta)^2] = r_i^2 + x_i^T Sigma x_i, floored away from zero"""
    r = y - X @ mu_beta
    return np.maximum(r ** 2 + quadratic_diag(X, Sigma_beta), W_FLOOR)


def check_dimensions(data: DesignData, prior: PriorSpec, fit: VariationalFit):
    if not data.p == prior.p == fit.p:
        raise DimensionError(f"Mean dimensions disagree: data {data.p}, prior {prior.p}, fit {fit.p}")
    if not data.q == prior.q == fit.q:
        raise DimensionError(f"Variance dimensions disagree: data {data.q}, prior {prior.q}, fit {fit.q}")


def _chol(S: np.ndarray, label: str) -> np.ndarray:
    try:
        return linalg.cholesky(0.5 * (S + S.T), lower=True)
    except linalg.LinAlgError:
        raise ValidationError(f"{label} is not positive definite")


def elbo_terms(data: DesignData, prior: PriorSpec, fit: VariationalFit,
               config: Optional[SolverConfig] = None) -> ElboTerms:
    """
    Split the bound into expected log prior (t1), expected log likelihood (t2)
    and entropy of q (t3).
    """
    check_dimensions(data, prior, fit)
    clip = (config or SolverConfig()).exponent_clip
    p, q, n = data.p, data.q, data.n

    L_beta = _chol(fit.Sigma_beta_q, "Sigma_beta_q")
    L_alpha = _chol(fit.Sigma_alpha_q, "Sigma_alpha_q")

    d_beta = fit.mu_beta_q - prior.mu_beta0
    d_alpha = fit.mu_alpha_q - prior.mu_alpha0
    P_beta = prior.beta_precision
    P_alpha = prior.alpha_precision

    t1 = (
        -0.5 * (p + q) * LOG_2PI
        - 0.5 * prior.beta_logdet
        - 0.5 * prior.alpha_logdet
        - 0.5 * np.sum(P_beta * fit.Sigma_beta_q)
        - 0.5 * np.sum(P_alpha * fit.Sigma_alpha_q)
        - 0.5 * d_beta @ P_beta @ d_beta
        - 0.5 * d_alpha @ P_alpha @ d_alpha
    )

    if n:
        w = residual_moments(data.X, data.y, fit.mu_beta_q, fit.Sigma_beta_q)
        e = variance_exponent(data.Z, fit.mu_alpha_q, fit.Sigma_alpha_q, clip)
        t2 = -0.5 * n * LOG_2PI - 0.5 * np.sum(data.Z @ fit.mu_alpha_q) - 0.5 * np.sum(w * np.exp(-e))
    else:
        t2 = 0.0

    t3 = (
        0.5 * (p + q) * (1.0 + LOG_2PI)
        + 0.5 * logdet_from_chol(L_beta)
        + 0.5 * logdet_from_chol(L_alpha)
    )
    return ElboTerms(t1=float(t1), t2=float(t2), t3=float(t3))


def elbo(data: DesignData, prior: PriorSpec, fit: VariationalFit,
         config: Optional[SolverConfig] = None) -> float:
    """Lower bound on log p(y)"""
    value = elbo_terms(data, prior, fit, config).total
    if not np.isfinite(value):
        raise ValidationError(f"Lower bound evaluated to {value}")
    return value
