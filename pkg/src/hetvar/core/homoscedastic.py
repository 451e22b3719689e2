"""
Homoscedastic fast path: a scalar log-variance with closed-form updates
"""

from typing import Optional, Sequence, List

import numpy as np

from .models import DesignData, ModelIndex, RankScore, ScalarAlphaFactor, SolverConfig
from ..exceptions import ValidationError
from ..utils.logger import get_logger

logger = get_logger(__name__)


def scalar_log_density(alpha: float, v: float, n: int, prior_var: float, prior_mean: float = 0.0) -> float:
    """Unnormalized log q(alpha) for the intercept-only variance model"""
    return -0.5 * n * alpha - 0.5 * v * np.exp(-alpha) - (alpha - prior_mean) ** 2 / (2.0 * prior_var)


def update_alpha_scalar(v: float, prior_var: float, n: int, prior_mean: float = 0.0,
                        refine: bool = True, config: Optional[SolverConfig] = None) -> ScalarAlphaFactor:
    """
    Normal factor for the scalar log-variance.

    The closed form comes from a first-order expansion of exp(-alpha) about
    zero; with refine=True it is polished by Newton iterations to the exact
    mode of the scalar log-density. The variance is the negative inverse
    curvature at the returned mode.
    """
    if not v > 0:
        raise ValidationError(f"Residual sum v must be positive, got {v}")
    if n < 1:
        raise ValidationError("Scalar update needs at least one observation")
    if not prior_var > 0:
        raise ValidationError(f"Prior variance must be positive, got {prior_var}")

    config = config or SolverConfig()
    prior_prec = 1.0 / prior_var
    mu = (v - n + 2.0 * prior_mean * prior_prec) / (v + 2.0 * prior_prec)
    iterations = 0
    converged = True

    if refine:
        converged = False
        f = scalar_log_density(mu, v, n, prior_var, prior_mean)
        for iterations in range(1, config.newton_max_iters + 1):
            curvature = 0.5 * v * np.exp(-mu) + prior_prec
            grad = -0.5 * n + 0.5 * v * np.exp(-mu) - (mu - prior_mean) * prior_prec
            if abs(grad) <= config.newton_tol:
                iterations -= 1
                converged = True
                break
            step = grad / curvature
            t = 1.0
            candidate = mu + step
            fc = scalar_log_density(candidate, v, n, prior_var, prior_mean)
            while fc < f and t > 1e-8:
                t *= 0.5
                candidate = mu + t * step
                fc = scalar_log_density(candidate, v, n, prior_var, prior_mean)
            if fc < f:
                break
            moved = abs(candidate - mu)
            mu, f = candidate, fc
            if moved <= 1e-14 * (1.0 + abs(mu)):
                converged = True
                break
        if not converged:
            logger.warning(f"Scalar Newton polish did not converge in {config.newton_max_iters} iterations")

    var = 1.0 / (0.5 * v * np.exp(-mu) + prior_prec)
    return ScalarAlphaFactor(
        mu_alpha_q=float(mu),
        var_alpha_q=float(var),
        prior_var=float(prior_var),
        newton_iterations=iterations,
        converged=converged,
    )


def residual_correlations(data: DesignData, residual: np.ndarray, candidates: Sequence[int]) -> np.ndarray:
    """|x_j^T r| for each candidate column"""
    return np.abs(data.X[:, list(candidates)].T @ residual)


def rank_mean_add_homo(state, candidates: Optional[Sequence[int]] = None) -> List[RankScore]:
    """
    Mean-add scores for an intercept-only variance model.

    Scores equal the general mean-add scores; each also carries the
    correlation statistic |x_j^T r| with the current residual. On a design
    with sum_i x_ij^2 = n every candidate shares the same posterior
    variance, so ordering by score equals ordering by the statistic.
    """
    # selection depends on the engine, which depends on this module
    from ..selection.ranking import rank_mean_add

    if not state.scaling.unit_ss:
        raise ValidationError("Homoscedastic ranking requires a unit sum-of-squares design")
    index: ModelIndex = state.index
    if index.var_predictors:
        raise ValidationError("Homoscedastic ranking requires an intercept-only variance model")

    pool = index.mean_pool() if candidates is None else tuple(candidates)
    residual = state.residual
    stats = residual_correlations(state.data, residual, pool)
    scores = []
    for j, stat in zip(pool, stats):
        score = rank_mean_add(state, j)
        scores.append(RankScore(
            candidate=score.candidate,
            direction=score.direction,
            bound_delta=score.bound_delta,
            log_prior_delta=score.log_prior_delta,
            candidate_mu=score.candidate_mu,
            candidate_var=score.candidate_var,
            statistic=float(stat),
        ))
    return scores
