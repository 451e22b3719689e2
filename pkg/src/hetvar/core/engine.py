"""
Coordinate-ascent maximization of the variational lower bound
"""

from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple, Union

import numpy as np
from scipy import linalg
from scipy.special import gammaln

from .homoscedastic import update_alpha_scalar
from .linalg import cholesky_jitter, spd_inverse, spd_solve, symmetrize
from .lower_bound import W_FLOOR, check_dimensions, elbo, residual_moments, variance_exponent
from .models import (
    DesignData,
    FitTrace,
    PriorSpec,
    PseudoResponses,
    SolverConfig,
    VariationalFit,
)
from ..exceptions import ConfigurationError, ValidationError
from ..utils.logger import get_logger

logger = get_logger(__name__)

RESIDUAL_FLOOR = 1e-10
RIDGE_FACTOR = 1e-6
MAX_CONDITION = 1e12


@dataclass(frozen=True)
class NewtonInfo:
    """Diagnostics of a Newton mode search"""
    iterations: int
    converged: bool
    gradient_norm: float
    objective: float


class AlphaUpdate(NamedTuple):
    mu_alpha_q: np.ndarray
    Sigma_alpha_q: np.ndarray
    accepted: bool
    info: Optional[NewtonInfo]


def pseudo_responses(data: DesignData, fit: VariationalFit,
                     config: Optional[SolverConfig] = None) -> PseudoResponses:
    """w_i from the beta factor and v_i = w_i / exp(z_i^T mu - z_i^T Sigma z_i / 2)"""
    clip = (config or SolverConfig()).exponent_clip
    w = residual_moments(data.X, data.y, fit.mu_beta_q, fit.Sigma_beta_q)
    e = variance_exponent(data.Z, fit.mu_alpha_q, fit.Sigma_alpha_q, clip)
    return PseudoResponses(w=w, v=np.maximum(w * np.exp(-e), W_FLOOR))


def _least_squares(A: np.ndarray, b: np.ndarray) -> Tuple[np.ndarray, np.ndarray, bool]:
    """
    OLS coefficients and (A^T A)^-1, falling back to a ridge penalty of
    1e-6 n when A^T A is singular or badly conditioned.
    """
    n, k = A.shape
    G = A.T @ A
    if n > k:
        try:
            L = linalg.cholesky(G, lower=True)
            if np.linalg.cond(G) < MAX_CONDITION:
                return linalg.cho_solve((L, True), A.T @ b), linalg.cho_solve((L, True), np.eye(k)), False
        except linalg.LinAlgError:
            pass
    ridge = RIDGE_FACTOR * max(n, 1)
    G_ridge = G + ridge * np.eye(k)
    L = cholesky_jitter(G_ridge)
    return linalg.cho_solve((L, True), A.T @ b), linalg.cho_solve((L, True), np.eye(k)), True


def init_fit(data: DesignData, prior: PriorSpec, config: Optional[SolverConfig] = None) -> VariationalFit:
    """
    Starting values: least squares for the mean, least squares of the log
    squared residuals for the variance, and the beta covariance implied by
    that variance factor.
    """
    config = config or SolverConfig()
    if data.n == 0:
        return VariationalFit(prior.mu_beta0, prior.Sigma_beta0, prior.mu_alpha0, prior.Sigma_alpha0)

    mu_beta, _, ridge_beta = _least_squares(data.X, data.y)
    residual = data.y - data.X @ mu_beta
    log_r2 = np.log(np.maximum(residual ** 2, RESIDUAL_FLOOR))

    mu_alpha, G_inv, ridge_alpha = _least_squares(data.Z, log_r2)
    dof = data.n - data.q
    if dof > 0:
        s2 = float(np.sum((log_r2 - data.Z @ mu_alpha) ** 2) / dof)
    else:
        # variance of log chi-square(1)
        s2 = np.pi ** 2 / 2.0
    Sigma_alpha = symmetrize(max(s2, 1e-8) * G_inv)

    if ridge_beta or ridge_alpha:
        logger.debug(f"Initialization used ridge fallback (mean: {ridge_beta}, variance: {ridge_alpha})")

    fit = VariationalFit(mu_beta, prior.Sigma_beta0, mu_alpha, Sigma_alpha)
    _, Sigma_beta = update_beta(data, prior, fit, config)
    return fit.with_beta(mu_beta, Sigma_beta)


def update_beta(data: DesignData, prior: PriorSpec, fit: VariationalFit,
                config: Optional[SolverConfig] = None) -> Tuple[np.ndarray, np.ndarray]:
    """Exact maximizer of the bound in (mu_beta_q, Sigma_beta_q) given q(alpha)"""
    config = config or SolverConfig()
    check_dimensions(data, prior, fit)
    e = variance_exponent(data.Z, fit.mu_alpha_q, fit.Sigma_alpha_q, config.exponent_clip)
    d = np.exp(-e)

    precision = data.X.T @ (d[:, None] * data.X) + prior.beta_precision
    rhs = prior.beta_precision @ prior.mu_beta0 + data.X.T @ (d * data.y)
    L = cholesky_jitter(precision, config.jitter)
    Sigma = symmetrize(linalg.cho_solve((L, True), np.eye(data.p)))
    mu = linalg.cho_solve((L, True), rhs)
    return mu, Sigma


def gamma_glm_log_density(Z: np.ndarray, w: np.ndarray, alpha: np.ndarray, prior_mu: np.ndarray,
                          prior_precision: np.ndarray, clip: float = 30.0) -> float:
    """Unnormalized log q(alpha) for fixed pseudo-responses w"""
    eta = np.clip(Z @ alpha, -clip, clip)
    d = alpha - prior_mu
    return float(-0.5 * np.sum(Z @ alpha) - 0.5 * np.sum(w * np.exp(-eta)) - 0.5 * d @ prior_precision @ d)


def gamma_glm_derivatives(Z: np.ndarray, w: np.ndarray, alpha: np.ndarray, prior_mu: np.ndarray,
                          prior_precision: np.ndarray, clip: float = 30.0) -> Tuple[np.ndarray, np.ndarray]:
    """Gradient u(alpha) and the negative Hessian Z^T W Z + prior precision"""
    eta = np.clip(Z @ alpha, -clip, clip)
    weights = 0.5 * w * np.exp(-eta)
    grad = -0.5 * Z.sum(axis=0) + Z.T @ weights - prior_precision @ (alpha - prior_mu)
    neg_hessian = Z.T @ (weights[:, None] * Z) + prior_precision
    return grad, neg_hessian


def taylor_start(Z: np.ndarray, w: np.ndarray, previous: np.ndarray, prior_mu: np.ndarray,
                 prior_precision: np.ndarray, clip: float = 30.0) -> np.ndarray:
    """One diagonal Newton step per coordinate from the previous mode"""
    eta = np.clip(Z @ previous, -clip, clip)
    v = w * np.exp(-eta)
    numerator = 0.5 * Z.T @ (v - 1.0) - prior_precision @ (previous - prior_mu)
    denominator = np.diag(prior_precision) + 0.5 * (Z ** 2).T @ v
    return previous + numerator / denominator


def newton_gamma_glm_mode(Z: np.ndarray, w: Union[np.ndarray, PseudoResponses], prior_mu: np.ndarray,
                          prior_precision: np.ndarray, start: np.ndarray,
                          config: Optional[SolverConfig] = None) -> Tuple[np.ndarray, NewtonInfo]:
    """
    Mode of the gamma-GLM log density by Newton iterations with step halving.

    Converges when the gradient max-norm drops to newton_tol, or when steps
    stall at working precision. Otherwise the best iterate is returned with
    converged=False.
    """
    config = config or SolverConfig()
    if isinstance(w, PseudoResponses):
        w = w.w
    w = np.asarray(w, dtype=float)
    if np.any(w <= 0):
        raise ValidationError("Pseudo-responses must be strictly positive")
    clip = config.exponent_clip

    alpha = np.array(start, dtype=float, copy=True)
    f = gamma_glm_log_density(Z, w, alpha, prior_mu, prior_precision, clip)
    grad, neg_hessian = gamma_glm_derivatives(Z, w, alpha, prior_mu, prior_precision, clip)
    iterations = 0
    converged = False

    while True:
        if np.max(np.abs(grad)) <= config.newton_tol:
            converged = True
            break
        if iterations >= config.newton_max_iters:
            break

        step = spd_solve(neg_hessian, grad, config.jitter)
        iterations += 1
        slack = 1e-12 * (1.0 + abs(f))
        t = 1.0
        candidate = alpha + step
        fc = gamma_glm_log_density(Z, w, candidate, prior_mu, prior_precision, clip)
        while fc < f - slack and t > 1e-8:
            t *= 0.5
            candidate = alpha + t * step
            fc = gamma_glm_log_density(Z, w, candidate, prior_mu, prior_precision, clip)
        if fc < f - slack:
            break

        moved = float(np.max(np.abs(candidate - alpha)))
        alpha, f = candidate, fc
        grad, neg_hessian = gamma_glm_derivatives(Z, w, alpha, prior_mu, prior_precision, clip)
        if moved <= 1e-14 * (1.0 + float(np.max(np.abs(alpha)))):
            converged = True
            break

    gradient_norm = float(np.max(np.abs(grad)))
    if not converged:
        logger.debug(f"Newton mode search stopped after {iterations} iterations, |u|={gradient_norm:.3e}")
    return alpha, NewtonInfo(iterations, converged, gradient_norm, f)


def _require_intercept_only_variance(data: DesignData):
    if data.q != 1 or not np.all(data.Z[:, 0] == 1.0):
        raise ConfigurationError("Homoscedastic mode requires an intercept-only variance design")


def update_alpha(data: DesignData, prior: PriorSpec, fit: VariationalFit,
                 config: Optional[SolverConfig] = None,
                 current_elbo: Optional[float] = None) -> AlphaUpdate:
    """
    Candidate q(alpha) from the Newton mode and the curvature there; kept only
    if the bound strictly improves.
    """
    config = config or SolverConfig()
    if current_elbo is None:
        current_elbo = elbo(data, prior, fit, config)
    w = residual_moments(data.X, data.y, fit.mu_beta_q, fit.Sigma_beta_q)

    if config.homoscedastic:
        _require_intercept_only_variance(data)
        factor = update_alpha_scalar(
            float(np.sum(w)),
            float(prior.Sigma_alpha0[0, 0]),
            data.n,
            prior_mean=float(prior.mu_alpha0[0]),
            config=config,
        )
        mu = np.array([factor.mu_alpha_q])
        Sigma = np.array([[factor.var_alpha_q]])
        f = gamma_glm_log_density(data.Z, w, mu, prior.mu_alpha0, prior.alpha_precision, config.exponent_clip)
        grad, _ = gamma_glm_derivatives(data.Z, w, mu, prior.mu_alpha0, prior.alpha_precision, config.exponent_clip)
        info = NewtonInfo(factor.newton_iterations, factor.converged, float(np.max(np.abs(grad))), f)
    else:
        P0, mu0 = prior.alpha_precision, prior.mu_alpha0
        previous = fit.mu_alpha_q
        start = taylor_start(data.Z, w, previous, mu0, P0, config.exponent_clip)
        if (gamma_glm_log_density(data.Z, w, start, mu0, P0, config.exponent_clip)
                < gamma_glm_log_density(data.Z, w, previous, mu0, P0, config.exponent_clip)):
            start = previous
        mu, info = newton_gamma_glm_mode(data.Z, w, mu0, P0, start, config)
        eta = np.clip(data.Z @ mu, -config.exponent_clip, config.exponent_clip)
        weights = 0.5 * w * np.exp(-eta)
        Sigma, _ = spd_inverse(data.Z.T @ (weights[:, None] * data.Z) + P0, config.jitter)

    candidate = fit.with_alpha(mu, Sigma)
    try:
        accepted = elbo(data, prior, candidate, config) > current_elbo
    except ValidationError:
        accepted = False
    if not accepted:
        logger.debug("Variance update rejected: bound did not improve")
        return AlphaUpdate(fit.mu_alpha_q, fit.Sigma_alpha_q, False, info)
    return AlphaUpdate(candidate.mu_alpha_q, candidate.Sigma_alpha_q, True, info)


def update_hyper(fit: VariationalFit, prior: PriorSpec) -> Tuple[float, float]:
    """Closed-form inverse-gamma updates of the isotropic prior variances"""
    if not prior.shrink:
        raise ValidationError("Hyperparameter updates require an isotropic prior with shrink enabled")
    a, b = prior.isotropic.a, prior.isotropic.b
    sigma2_beta = (b + 0.5 * fit.mu_beta_q @ fit.mu_beta_q + 0.5 * np.trace(fit.Sigma_beta_q)) / (a + 1.0 + fit.p / 2.0)
    sigma2_alpha = (b + 0.5 * fit.mu_alpha_q @ fit.mu_alpha_q + 0.5 * np.trace(fit.Sigma_alpha_q)) / (a + 1.0 + fit.q / 2.0)
    return float(sigma2_beta), float(sigma2_alpha)


def log_hyperprior(prior: PriorSpec) -> float:
    """log IG(sigma2_beta; a, b) + log IG(sigma2_alpha; a, b), zero without shrinkage"""
    if not prior.shrink:
        return 0.0
    a, b = prior.isotropic.a, prior.isotropic.b
    total = 0.0
    for s2 in (prior.isotropic.sigma2_beta, prior.isotropic.sigma2_alpha):
        total += a * np.log(b) - gammaln(a) - (a + 1.0) * np.log(s2) - b / s2
    return float(total)


def fit_vb(data: DesignData, prior: PriorSpec, config: Optional[SolverConfig] = None,
           init: Optional[VariationalFit] = None) -> Tuple[VariationalFit, FitTrace]:
    """
    Alternate beta, alpha and (optionally) hyperparameter updates until the
    traced objective rises by less than elbo_tol.

    The traced objective is the bound, plus the log hyperprior when shrinkage
    is on. A final beta update after the loop leaves mu_beta_q stationary for
    the returned alpha factor; it is not part of the trace.
    """
    config = config or SolverConfig()
    if config.homoscedastic:
        _require_intercept_only_variance(data)

    fit = init if init is not None else init_fit(data, prior, config)
    check_dimensions(data, prior, fit)
    trace = FitTrace(hyper_values=[] if prior.shrink else None)

    current = elbo(data, prior, fit, config)
    objective = current + log_hyperprior(prior)
    trace.elbo_per_iteration.append(objective)
    converged = False
    iteration = 0

    for iteration in range(1, config.max_outer_iters + 1):
        previous_objective = objective

        mu_beta, Sigma_beta = update_beta(data, prior, fit, config)
        candidate = fit.with_beta(mu_beta, Sigma_beta)
        value = elbo(data, prior, candidate, config)
        if value >= current:
            fit, current = candidate, value

        update = update_alpha(data, prior, fit, config, current_elbo=current)
        trace.alpha_update_accepted.append(update.accepted)
        if update.info is not None:
            trace.newton_iterations.append(update.info.iterations)
        if update.accepted:
            fit = fit.with_alpha(update.mu_alpha_q, update.Sigma_alpha_q)
            current = elbo(data, prior, fit, config)
            trace.newton_gradients.append(update.info.gradient_norm)

        if prior.shrink:
            sigma2_beta, sigma2_alpha = update_hyper(fit, prior)
            candidate_prior = prior.with_hyper(sigma2_beta, sigma2_alpha)
            value = elbo(data, candidate_prior, fit, config)
            if value + log_hyperprior(candidate_prior) >= current + log_hyperprior(prior):
                prior, current = candidate_prior, value
            trace.hyper_values.append((prior.isotropic.sigma2_beta, prior.isotropic.sigma2_alpha))

        objective = current + log_hyperprior(prior)
        trace.elbo_per_iteration.append(objective)
        logger.debug(f"Iteration {iteration}: objective {objective:.10f} (alpha accepted: {update.accepted})")

        if objective - previous_objective < config.elbo_tol:
            converged = True
            break

    mu_beta, Sigma_beta = update_beta(data, prior, fit, config)
    candidate = fit.with_beta(mu_beta, Sigma_beta)
    value = elbo(data, prior, candidate, config)
    if value >= current:
        fit, current = candidate, value

    if not converged:
        logger.warning(f"Variational fit did not converge in {config.max_outer_iters} iterations")
    else:
        logger.debug(f"Variational fit converged after {iteration} iterations, bound {current:.6f}")

    final = VariationalFit(
        mu_beta_q=fit.mu_beta_q,
        Sigma_beta_q=fit.Sigma_beta_q,
        mu_alpha_q=fit.mu_alpha_q,
        Sigma_alpha_q=fit.Sigma_alpha_q,
        elbo=current,
        iterations=iteration,
        converged=converged,
    )
    return final, trace


def fitted_prior(prior: PriorSpec, trace: FitTrace) -> PriorSpec:
    """Prior carrying the last shrunk hyperparameters of a trace"""
    if not trace.hyper_values:
        return prior
    sigma2_beta, sigma2_alpha = trace.hyper_values[-1]
    return prior.with_hyper(sigma2_beta, sigma2_alpha)


def predict(fit: VariationalFit, data: DesignData, integrated: bool = False) -> Tuple[np.ndarray, np.ndarray]:
    """Predictive mean x^T mu_beta and plug-in variance exp(z^T mu_alpha)"""
    if fit.p != data.p or fit.q != data.q:
        raise ValidationError("Fit dimensions do not match the design")
    mean = data.X @ fit.mu_beta_q
    variance = np.exp(data.Z @ fit.mu_alpha_q)
    if integrated:
        variance = variance + np.einsum("ij,jk,ik->i", data.X, fit.Sigma_beta_q, data.X)
    return mean, variance
