"""
One-step ranking scores for adding and dropping predictors.

Every score freezes the current variational factors and optimizes only the
candidate's own normal factor, so a full sweep over candidates costs one
pass over the design.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import List, Optional, Sequence

import numpy as np

from ..core.lower_bound import W_FLOOR, residual_moments, variance_exponent
from ..core.models import (
    DesignData,
    Direction,
    ModelIndex,
    ModelPriorPolicy,
    PriorSpec,
    RankScore,
    ScalingInfo,
    SolverConfig,
    VariationalFit,
)
from ..exceptions import ValidationError
from ..utils.logger import get_logger
from .priors import model_log_prior

logger = get_logger(__name__)

TIE_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class SearchState:
    """
    A fitted current model inside the full candidate universe.

    data and prior cover every column; fit holds the factors of the active
    columns in index order.
    """
    data: DesignData
    prior: PriorSpec
    index: ModelIndex
    fit: VariationalFit
    policy: ModelPriorPolicy
    config: SolverConfig
    scaling: Optional[ScalingInfo] = None
    restricted: bool = False

    def __post_init__(self):
        if self.fit.p != len(self.index.C) or self.fit.q != len(self.index.V):
            raise ValidationError("Fit dimensions do not match the active model")
        if self.scaling is None:
            object.__setattr__(self, "scaling", ScalingInfo.identity(self.data))

    @cached_property
    def X_active(self) -> np.ndarray:
        return self.data.X[:, list(self.index.C)]

    @cached_property
    def Z_active(self) -> np.ndarray:
        return self.data.Z[:, list(self.index.V)]

    @cached_property
    def residual(self) -> np.ndarray:
        return self.data.y - self.X_active @ self.fit.mu_beta_q

    @cached_property
    def exponent(self) -> np.ndarray:
        return variance_exponent(self.Z_active, self.fit.mu_alpha_q, self.fit.Sigma_alpha_q,
                                 self.config.exponent_clip)

    @cached_property
    def weights(self) -> np.ndarray:
        """D_ii = 1 / exp(e_i)"""
        return np.exp(-self.exponent)

    @cached_property
    def w(self) -> np.ndarray:
        return residual_moments(self.X_active, self.data.y, self.fit.mu_beta_q, self.fit.Sigma_beta_q)

    @cached_property
    def v(self) -> np.ndarray:
        return np.maximum(self.w * self.weights, W_FLOOR)

    @cached_property
    def log_prior(self) -> float:
        return model_log_prior(self.index, self.policy)


def _prior_variances(prior: PriorSpec, candidates: Sequence[int], model: str) -> np.ndarray:
    Sigma = prior.Sigma_beta0 if model == "mean" else prior.Sigma_alpha0
    return np.diag(Sigma)[list(candidates)]


def _mean_scores(x: np.ndarray, residual: np.ndarray, d: np.ndarray, prior_var: np.ndarray):
    """Optimal candidate factor and the optimized bound increment for each column of x"""
    precision = 1.0 / prior_var + (x ** 2 * d[:, None]).sum(axis=0)
    s2 = 1.0 / precision
    mu = s2 * (x * (residual * d)[:, None]).sum(axis=0)
    delta = 0.5 * np.log(s2 / prior_var) + 0.5 * mu ** 2 / s2
    return mu, s2, delta


def mean_add_increment(state: SearchState, j: int, mu: float, s2: float) -> float:
    """Bound increment for adding column j with an arbitrary factor N(mu, s2)"""
    x = state.data.X[:, j]
    sigma2 = float(_prior_variances(state.prior, [j], "mean")[0])
    d = state.weights
    r = state.residual
    return float(
        0.5 + 0.5 * np.log(s2 / sigma2) - s2 / (2.0 * sigma2) - mu ** 2 / (2.0 * sigma2)
        - 0.5 * np.sum(d * (x ** 2 * s2 + x ** 2 * mu ** 2 - 2.0 * x * mu * r))
    )


def _var_modes(z: np.ndarray, v: np.ndarray, prior_var: np.ndarray, config: SolverConfig):
    """
    Modes of the per-candidate scalar log densities
    f(a) = -a^2/(2 s0) - a sum(z)/2 - sum(v exp(-z a))/2, one per column of z,
    by simultaneous Newton iterations started from the first-order value.
    """
    clip = config.exponent_clip
    prior_prec = 1.0 / prior_var
    zsum = z.sum(axis=0)
    a = 0.5 * (z.T @ (v - 1.0)) / (prior_prec + 0.5 * (z ** 2).T @ v)

    def objective(values):
        eta = np.clip(z * values, -clip, clip)
        return -0.5 * values ** 2 * prior_prec - 0.5 * values * zsum - 0.5 * (v[:, None] * np.exp(-eta)).sum(axis=0)

    def derivatives(values):
        scaled = v[:, None] * np.exp(-np.clip(z * values, -clip, clip))
        grad = -values * prior_prec - 0.5 * zsum + 0.5 * (z * scaled).sum(axis=0)
        curvature = prior_prec + 0.5 * (z ** 2 * scaled).sum(axis=0)
        return grad, curvature

    m = z.shape[1]
    f = objective(a)
    iterations = np.zeros(m, dtype=int)
    converged = np.zeros(m, dtype=bool)
    active = np.ones(m, dtype=bool)

    while True:
        grad, curvature = derivatives(a)
        done = active & (np.abs(grad) <= config.newton_tol)
        converged |= done
        active &= ~done
        if not active.any() or iterations.max(initial=0) >= config.newton_max_iters:
            break

        step = np.where(active, grad / curvature, 0.0)
        slack = 1e-12 * (1.0 + np.abs(f))
        t = np.ones(m)
        candidate = a + step
        fc = objective(candidate)
        for _ in range(30):
            worse = active & (fc < f - slack)
            if not worse.any():
                break
            t = np.where(worse, 0.5 * t, t)
            candidate = a + t * step
            fc = objective(candidate)

        stalled = active & (fc < f - slack)
        moving = active & ~stalled
        moved = np.abs(candidate - a)
        iterations += active
        a = np.where(moving, candidate, a)
        f = np.where(moving, fc, f)
        tiny = moving & (moved <= 1e-14 * (1.0 + np.abs(a)))
        converged |= tiny
        active &= ~(tiny | stalled)

    curvature = prior_prec + 0.5 * (z ** 2 * v[:, None] * np.exp(-np.clip(z * a, -clip, clip))).sum(axis=0)
    s2 = 1.0 / curvature
    exponent = np.clip(-z * a + 0.5 * z ** 2 * s2, -clip, clip)
    delta = (
        0.5 + 0.5 * np.log(s2 / prior_var) - s2 / (2.0 * prior_var) - a ** 2 / (2.0 * prior_var)
        - 0.5 * a * zsum - 0.5 * (v[:, None] * (np.exp(exponent) - 1.0)).sum(axis=0)
    )
    return a, s2, delta, iterations, converged


def _log_prior_deltas(state: SearchState, moves: Sequence[ModelIndex]) -> List[float]:
    base = state.log_prior
    return [model_log_prior(m, state.policy) - base for m in moves]


def rank_mean_add_all(state: SearchState, candidates: Optional[Sequence[int]] = None) -> List[RankScore]:
    """Mean-add scores for every candidate (default: all inactive non-intercept columns)"""
    pool = state.index.mean_pool() if candidates is None else tuple(candidates)
    for j in pool:
        if j in state.index.C or j == state.index.intercept_mean:
            raise ValidationError(f"Column {j} is not a mean-add candidate")
    if not pool:
        return []
    x = state.data.X[:, list(pool)]
    mu, s2, delta = _mean_scores(x, state.residual, state.weights, _prior_variances(state.prior, pool, "mean"))
    prior_deltas = _log_prior_deltas(state, [state.index.add_mean(j) for j in pool])
    return [
        RankScore(j, Direction.ADD_MEAN, float(delta[k]), prior_deltas[k], float(mu[k]), float(s2[k]))
        for k, j in enumerate(pool)
    ]


def rank_mean_add(state: SearchState, j: int) -> RankScore:
    return rank_mean_add_all(state, [j])[0]


def rank_var_add_all(state: SearchState, candidates: Optional[Sequence[int]] = None) -> List[RankScore]:
    """Variance-add scores; in restricted mode only columns already in the mean model qualify"""
    pool = state.index.var_pool(state.restricted) if candidates is None else tuple(candidates)
    for j in pool:
        if j in state.index.V or j == state.index.intercept_var:
            raise ValidationError(f"Column {j} is not a variance-add candidate")
        if state.restricted and j not in state.index.C:
            raise ValidationError(f"Restricted search: column {j} is not in the mean model")
    if not pool:
        return []
    z = state.data.Z[:, list(pool)]
    a, s2, delta, iterations, converged = _var_modes(
        z, state.v, _prior_variances(state.prior, pool, "var"), state.config
    )
    if not converged.all():
        logger.debug(f"Variance-add Newton unconverged for candidates {np.asarray(pool)[~converged].tolist()}")
    prior_deltas = _log_prior_deltas(state, [state.index.add_var(j) for j in pool])
    return [
        RankScore(j, Direction.ADD_VAR, float(delta[k]), prior_deltas[k], float(a[k]), float(s2[k]),
                  newton_iterations=int(iterations[k]), converged=bool(converged[k]))
        for k, j in enumerate(pool)
    ]


def rank_var_add(state: SearchState, j: int) -> RankScore:
    return rank_var_add_all(state, [j])[0]


def _without(values: np.ndarray, position: int) -> np.ndarray:
    return np.delete(values, position)


def _without_rc(matrix: np.ndarray, position: int) -> np.ndarray:
    return np.delete(np.delete(matrix, position, axis=0), position, axis=1)


def rank_mean_drop(state: SearchState, j: int) -> RankScore:
    """
    Score for removing mean column j: minus the gain of re-adding it to the
    current fit with j deleted. In restricted mode j also leaves the
    variance model.
    """
    index = state.index
    if j not in index.C or j == index.intercept_mean:
        raise ValidationError(f"Column {j} is not a mean-drop candidate")

    k = index.C.index(j)
    rest = [c for c in index.C if c != j]
    mu_rest = _without(state.fit.mu_beta_q, k)
    residual = state.data.y - state.data.X[:, rest] @ mu_rest

    coupled = state.restricted and j in index.V
    if coupled:
        kv = index.V.index(j)
        rest_v = [c for c in index.V if c != j]
        exponent = variance_exponent(
            state.data.Z[:, rest_v],
            _without(state.fit.mu_alpha_q, kv),
            _without_rc(state.fit.Sigma_alpha_q, kv),
            state.config.exponent_clip,
        )
        d = np.exp(-exponent)
    else:
        d = state.weights

    prior_var = _prior_variances(state.prior, [j], "mean")
    mu, s2, gamma = _mean_scores(state.data.X[:, [j]], residual, d, prior_var)
    proposed = index.drop_mean(j, couple_variance=state.restricted)
    return RankScore(j, Direction.DROP_MEAN, -float(gamma[0]),
                     model_log_prior(proposed, state.policy) - state.log_prior,
                     float(mu[0]), float(s2[0]))


def rank_var_drop(state: SearchState, j: int) -> RankScore:
    """Score for removing variance column j, from its re-add gain against V without j"""
    index = state.index
    if j not in index.V or j == index.intercept_var:
        raise ValidationError(f"Column {j} is not a variance-drop candidate")

    k = index.V.index(j)
    rest = [c for c in index.V if c != j]
    exponent = variance_exponent(
        state.data.Z[:, rest],
        _without(state.fit.mu_alpha_q, k),
        _without_rc(state.fit.Sigma_alpha_q, k),
        state.config.exponent_clip,
    )
    v = np.maximum(state.w * np.exp(-exponent), W_FLOOR)
    a, s2, gamma, iterations, converged = _var_modes(
        state.data.Z[:, [j]], v, _prior_variances(state.prior, [j], "var"), state.config
    )
    proposed = index.drop_var(j)
    return RankScore(j, Direction.DROP_VAR, -float(gamma[0]),
                     model_log_prior(proposed, state.policy) - state.log_prior,
                     float(a[0]), float(s2[0]),
                     newton_iterations=int(iterations[0]), converged=bool(converged[0]))


def rank_mean_drop_all(state: SearchState) -> List[RankScore]:
    return [rank_mean_drop(state, j) for j in state.index.mean_predictors]


def rank_var_drop_all(state: SearchState) -> List[RankScore]:
    return [rank_var_drop(state, j) for j in state.index.var_predictors]


def order_scores(scores: Sequence[RankScore], limit: Optional[int] = None) -> List[RankScore]:
    """
    Best first, at most limit entries. Totals within TIE_TOLERANCE of each
    other count as equal and are ordered by candidate index.
    """
    remaining = sorted(scores, key=lambda s: s.candidate)
    ordered = []
    limit = len(remaining) if limit is None else limit
    while remaining and len(ordered) < limit:
        top = max(s.total for s in remaining)
        best = next(s for s in remaining if s.total >= top - TIE_TOLERANCE)
        ordered.append(best)
        remaining.remove(best)
    return ordered


def best_score(scores: Sequence[RankScore]) -> Optional[RankScore]:
    if not scores:
        return None
    top = max(s.total for s in scores)
    return min((s for s in scores if s.total >= top - TIE_TOLERANCE), key=lambda s: s.candidate)


def rank(state: SearchState, direction: Direction, limit: Optional[int] = None) -> List[RankScore]:
    """Scores for one move type, best first"""
    direction = Direction(direction)
    if direction is Direction.ADD_MEAN:
        scores = rank_mean_add_all(state)
    elif direction is Direction.ADD_VAR:
        scores = rank_var_add_all(state)
    elif direction is Direction.DROP_MEAN:
        scores = rank_mean_drop_all(state)
    else:
        scores = rank_var_drop_all(state)
    return order_scores(scores, limit)
