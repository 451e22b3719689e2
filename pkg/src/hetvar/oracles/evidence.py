"""
Sampling and quadrature references for the bound and the log evidence.

Nothing here reuses the bound or solver code: densities are written out
directly so the checks stay independent of what they check.
"""

import itertools
from typing import Dict, Iterable, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial.hermite_e import hermegauss
from scipy import linalg, optimize
from scipy.special import logsumexp

from ..core.models import DesignData, PriorSpec, VariationalFit
from ..exceptions import DimensionError, OracleError
from ..utils.logger import get_logger

logger = get_logger(__name__)

LOG_2PI = np.log(2.0 * np.pi)
SAMPLE_BUDGET = 2_000_000
MAX_QUADRATURE_DIM = 4
NODE_SCHEDULE = (12, 20, 28, 36)
GRID_CHUNK = 200_000


def _gaussian_logpdf(samples: np.ndarray, mean: np.ndarray, chol: np.ndarray) -> np.ndarray:
    """Row-wise log N(x; mean, L L^T)"""
    diff = (samples - mean).T
    solved = linalg.solve_triangular(chol, diff, lower=True)
    d = mean.shape[0]
    return -0.5 * np.sum(solved ** 2, axis=0) - 0.5 * d * LOG_2PI - np.sum(np.log(np.diag(chol)))


def _log_likelihood(data: DesignData, beta: np.ndarray, alpha: np.ndarray) -> np.ndarray:
    """log p(y | beta, alpha) for each row of beta and alpha"""
    if data.n == 0:
        return np.zeros(beta.shape[0])
    mean = beta @ data.X.T
    log_var = alpha @ data.Z.T
    return np.sum(-0.5 * LOG_2PI - 0.5 * log_var - 0.5 * (data.y - mean) ** 2 * np.exp(-log_var), axis=1)


def _check(data: DesignData, prior: PriorSpec, fit: VariationalFit):
    if not data.p == prior.p == fit.p or not data.q == prior.q == fit.q:
        raise DimensionError("Data, prior and fit dimensions disagree")


def _sample_terms(data: DesignData, prior: PriorSpec, fit: VariationalFit,
                  n_samples: int, seed: int) -> Iterable[Tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """Yield (log prior, log likelihood, log q) for chunks of joint draws"""
    rng = np.random.Generator(np.random.Philox(seed))
    L_bq = linalg.cholesky(fit.Sigma_beta_q, lower=True)
    L_aq = linalg.cholesky(fit.Sigma_alpha_q, lower=True)
    L_b0 = linalg.cholesky(prior.Sigma_beta0, lower=True)
    L_a0 = linalg.cholesky(prior.Sigma_alpha0, lower=True)

    chunk = max(1, SAMPLE_BUDGET // max(data.n, 1))
    remaining = n_samples
    while remaining > 0:
        k = min(chunk, remaining)
        remaining -= k
        beta = fit.mu_beta_q + rng.standard_normal((k, data.p)) @ L_bq.T
        alpha = fit.mu_alpha_q + rng.standard_normal((k, data.q)) @ L_aq.T
        log_prior = _gaussian_logpdf(beta, prior.mu_beta0, L_b0) + _gaussian_logpdf(alpha, prior.mu_alpha0, L_a0)
        log_q = _gaussian_logpdf(beta, fit.mu_beta_q, L_bq) + _gaussian_logpdf(alpha, fit.mu_alpha_q, L_aq)
        yield log_prior, _log_likelihood(data, beta, alpha), log_q


def _mean_and_stderr(values: np.ndarray) -> Tuple[float, float]:
    return float(np.mean(values)), float(np.std(values, ddof=1) / np.sqrt(values.size))


def mc_elbo_oracle(data: DesignData, prior: PriorSpec, fit: VariationalFit,
                   n_samples: int = 100_000, seed: int = 0) -> Tuple[float, float]:
    """Monte Carlo estimate of E_q[log p(theta) p(y|theta) / q(theta)] and its standard error"""
    if n_samples < 1000:
        raise OracleError(f"Monte Carlo oracle needs at least 1000 samples, got {n_samples}")
    _check(data, prior, fit)
    values = np.concatenate([lp + ll - lq for lp, ll, lq in _sample_terms(data, prior, fit, n_samples, seed)])
    return _mean_and_stderr(values)


def mc_term_estimates(data: DesignData, prior: PriorSpec, fit: VariationalFit,
                      n_samples: int = 100_000, seed: int = 0) -> Dict[str, Tuple[float, float]]:
    """Separate estimates of E_q log p(theta), E_q log p(y|theta) and -E_q log q(theta)"""
    if n_samples < 1000:
        raise OracleError(f"Monte Carlo oracle needs at least 1000 samples, got {n_samples}")
    _check(data, prior, fit)
    parts = list(_sample_terms(data, prior, fit, n_samples, seed))
    return {
        "t1": _mean_and_stderr(np.concatenate([lp for lp, _, _ in parts])),
        "t2": _mean_and_stderr(np.concatenate([ll for _, ll, _ in parts])),
        "t3": _mean_and_stderr(-np.concatenate([lq for _, _, lq in parts])),
    }


class _LogJoint:
    """log p(beta) + log p(alpha) + log p(y | beta, alpha) with derivatives"""

    def __init__(self, data: DesignData, prior: PriorSpec):
        self.data = data
        self.p = data.p
        self.prior = prior
        self.P_b = linalg.inv(prior.Sigma_beta0)
        self.P_a = linalg.inv(prior.Sigma_alpha0)
        self.L_b = linalg.cholesky(prior.Sigma_beta0, lower=True)
        self.L_a = linalg.cholesky(prior.Sigma_alpha0, lower=True)

    def batch(self, theta: np.ndarray) -> np.ndarray:
        beta, alpha = theta[:, :self.p], theta[:, self.p:]
        return (_gaussian_logpdf(beta, self.prior.mu_beta0, self.L_b)
                + _gaussian_logpdf(alpha, self.prior.mu_alpha0, self.L_a)
                + _log_likelihood(self.data, beta, alpha))

    def value(self, theta: np.ndarray) -> float:
        return float(self.batch(theta[None, :])[0])

    def gradient(self, theta: np.ndarray) -> np.ndarray:
        X, Z, y = self.data.X, self.data.Z, self.data.y
        beta, alpha = theta[:self.p], theta[self.p:]
        r = y - X @ beta
        s = np.exp(-(Z @ alpha))
        g_beta = -self.P_b @ (beta - self.prior.mu_beta0) + X.T @ (s * r)
        g_alpha = -self.P_a @ (alpha - self.prior.mu_alpha0) - 0.5 * Z.sum(axis=0) + 0.5 * Z.T @ (s * r ** 2)
        return np.concatenate([g_beta, g_alpha])

    def hessian(self, theta: np.ndarray) -> np.ndarray:
        X, Z, y = self.data.X, self.data.Z, self.data.y
        beta, alpha = theta[:self.p], theta[self.p:]
        r = y - X @ beta
        s = np.exp(-(Z @ alpha))
        H_bb = -self.P_b - X.T @ (s[:, None] * X)
        H_ba = -X.T @ ((s * r)[:, None] * Z)
        H_aa = -self.P_a - 0.5 * Z.T @ ((s * r ** 2)[:, None] * Z)
        return np.block([[H_bb, H_ba], [H_ba.T, H_aa]])


def _laplace(joint: _LogJoint) -> Tuple[np.ndarray, np.ndarray]:
    """Mode and covariance of the log joint"""
    data, prior = joint.data, joint.prior
    if data.n > 0:
        beta0 = np.linalg.lstsq(data.X, data.y, rcond=None)[0]
        log_r2 = np.log(np.maximum((data.y - data.X @ beta0) ** 2, 1e-10))
        alpha0 = np.linalg.lstsq(data.Z, log_r2, rcond=None)[0]
    else:
        beta0, alpha0 = prior.mu_beta0, prior.mu_alpha0
    start = np.concatenate([beta0, alpha0])

    result = optimize.minimize(
        lambda t: -joint.value(t),
        start,
        jac=lambda t: -joint.gradient(t),
        hess=lambda t: -joint.hessian(t),
        method="trust-exact",
    )
    mode = result.x
    precision = -joint.hessian(mode)
    try:
        L = linalg.cholesky(precision, lower=True)
        covariance = linalg.cho_solve((L, True), np.eye(mode.size))
    except linalg.LinAlgError:
        shift = abs(float(np.min(np.linalg.eigvalsh(precision)))) + 1.0
        logger.warning("Laplace precision not positive definite; shifting its spectrum")
        covariance = linalg.inv(precision + shift * np.eye(mode.size))
    return mode, 0.5 * (covariance + covariance.T)


def _grid_log_integral(joint: _LogJoint, mode: np.ndarray, covariance: np.ndarray, nodes: int) -> float:
    dim = mode.size
    u, w = hermegauss(nodes)
    L = linalg.cholesky(covariance, lower=True)
    half_logdet = float(np.sum(np.log(np.diag(L))))
    pieces = []
    points = itertools.product(range(nodes), repeat=dim)
    while True:
        block = np.array(list(itertools.islice(points, GRID_CHUNK)), dtype=int)
        if block.size == 0:
            break
        U = u[block]
        theta = mode + U @ L.T
        pieces.append(logsumexp(np.log(w[block]).sum(axis=1) + joint.batch(theta) + 0.5 * np.sum(U ** 2, axis=1)))
    return float(logsumexp(pieces) + half_logdet)


def log_evidence_quadrature(data: DesignData, prior: PriorSpec, tol: float = 1e-4,
                            node_schedule: Sequence[int] = NODE_SCHEDULE,
                            inflation: float = 1.25) -> float:
    """
    log p(y) by tensor Gauss-Hermite quadrature around the Laplace mode.

    The Laplace covariance is inflated by inflation^2 and the node count grows
    along node_schedule until two successive values agree within tol.
    """
    dim = data.p + data.q
    if dim > MAX_QUADRATURE_DIM:
        raise OracleError(f"Quadrature oracle supports p + q <= {MAX_QUADRATURE_DIM}, got {dim}")
    if data.p != prior.p or data.q != prior.q:
        raise DimensionError("Data and prior dimensions disagree")

    joint = _LogJoint(data, prior)
    mode, covariance = _laplace(joint)
    covariance = inflation ** 2 * covariance

    previous: Optional[float] = None
    value = float("nan")
    for nodes in node_schedule:
        value = _grid_log_integral(joint, mode, covariance, nodes)
        if previous is not None and abs(value - previous) <= tol:
            return value
        previous = value
    logger.warning(f"Quadrature did not settle within {tol} by {node_schedule[-1]} nodes per axis")
    return value
