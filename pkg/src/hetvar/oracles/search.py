"""
Exhaustive model search over small universes
"""

from itertools import chain, combinations
from typing import List, Optional, Sequence, Tuple

from ..core.engine import fit_vb
from ..core.models import DesignData, ModelIndex, ModelPriorPolicy, PriorSpec, SolverConfig
from ..exceptions import OracleError
from ..selection.priors import model_log_prior
from ..utils.logger import get_logger

logger = get_logger(__name__)

MAX_UNIVERSE = 8


def _subsets(items: Sequence[int]):
    return chain.from_iterable(combinations(items, k) for k in range(len(items) + 1))


def enumerate_models(data: DesignData, restricted: bool = False,
                     homoscedastic: bool = False) -> List[ModelIndex]:
    """Every (C, V) pair containing both intercepts"""
    if data.intercept_mean_col is None or data.intercept_var_col is None:
        raise OracleError("Exhaustive search needs intercepts in both designs")
    int_m, int_v = data.intercept_mean_col, data.intercept_var_col
    mean_pool = [j for j in range(data.p) if j != int_m]
    var_pool = [] if homoscedastic else [j for j in range(data.q) if j != int_v]

    models = []
    for C in _subsets(mean_pool):
        for V in _subsets(var_pool):
            if restricted and not set(V) <= set(C):
                continue
            models.append(ModelIndex((int_m,) + C, (int_v,) + V, data.p, data.q, int_m, int_v))
    return models


def exhaustive_search(data: DesignData, prior: PriorSpec, policy: ModelPriorPolicy,
                      max_universe: int = MAX_UNIVERSE, restricted: bool = False,
                      config: Optional[SolverConfig] = None) -> Tuple[ModelIndex, float]:
    """
    Fit every submodel and return the maximizer of bound plus log model prior.

    Ties keep the first model in enumeration order.
    """
    config = config or SolverConfig()
    candidates = (data.p - 1) + (0 if config.homoscedastic else data.q - 1)
    if max_universe > MAX_UNIVERSE:
        raise OracleError(f"max_universe is capped at {MAX_UNIVERSE}")
    if candidates > max_universe:
        raise OracleError(f"{candidates} candidate predictors exceed the universe cap {max_universe}")
    if restricted and data.column_names_mean != data.column_names_var:
        raise OracleError("Restricted enumeration needs identical mean and variance columns")

    best_index, best_score = None, float("-inf")
    models = enumerate_models(data, restricted, config.homoscedastic)
    for index in models:
        fit, _ = fit_vb(data.subset(index.C, index.V), prior.subset(index.C, index.V), config)
        score = fit.elbo + model_log_prior(index, policy)
        if score > best_score:
            best_index, best_score = index, score
    logger.debug(f"Exhaustive search over {len(models)} models: best C={best_index.C}, V={best_index.V}")
    return best_index, best_score
