"""
Log prior probabilities over (C, V)
"""

from typing import Sequence, Tuple, Union

import numpy as np
from scipy.special import gammaln

from ..core.models import ModelIndex, ModelPriorPolicy, PriorKind
from ..exceptions import ConfigurationError


def log_binomial(n: int, k: int) -> float:
    return float(gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1))


def _bernoulli_part(active: Sequence[int], pool: Sequence[int], pi: Union[float, Tuple[float, ...]], label: str) -> float:
    if isinstance(pi, tuple):
        if len(pi) != len(pool):
            raise ConfigurationError(
                f"{label} has {len(pi)} inclusion probabilities for {len(pool)} candidate predictors"
            )
        included = np.isin(pool, active)
        pi = np.asarray(pi)
        return float(np.sum(np.log(pi[included])) + np.sum(np.log1p(-pi[~included])))
    k = len(active)
    return float(k * np.log(pi) + (len(pool) - k) * np.log1p(-pi))


def model_log_prior(index: ModelIndex, policy: ModelPriorPolicy) -> float:
    """
    log p(C, V) with intercepts excluded from every count.

    uniform drops the constant; bernoulli uses independent inclusions
    (scalar or per-predictor probabilities); ebic uses inverse binomial
    coefficients in each model.
    """
    if policy.kind is PriorKind.UNIFORM:
        return 0.0

    mean_pool = [j for j in range(index.p) if j != index.intercept_mean]
    var_pool = [j for j in range(index.q) if j != index.intercept_var]

    if policy.kind is PriorKind.BERNOULLI:
        return (_bernoulli_part(index.mean_predictors, mean_pool, policy.pi_mu, "pi_mu")
                + _bernoulli_part(index.var_predictors, var_pool, policy.pi_sigma, "pi_sigma"))

    return -log_binomial(len(mean_pool), len(index.mean_predictors)) - log_binomial(
        len(var_pool), len(index.var_predictors)
    )


def log_prior_delta(current: ModelIndex, proposed: ModelIndex, policy: ModelPriorPolicy) -> float:
    return model_log_prior(proposed, policy) - model_log_prior(current, policy)
