"""
Greedy variable selection for the mean and variance models
"""

from .priors import log_prior_delta, model_log_prior
from .ranking import (
    SearchState,
    best_score,
    mean_add_increment,
    order_scores,
    rank,
    rank_mean_add,
    rank_mean_add_all,
    rank_mean_drop,
    rank_var_add,
    rank_var_add_all,
    rank_var_drop,
)
from .search import (
    GreedySearch,
    ModelFitter,
    forward_backward_var,
    forward_var,
    select_model,
    selection_prior,
)

__all__ = [
    'GreedySearch',
    'ModelFitter',
    'SearchState',
    'best_score',
    'forward_backward_var',
    'forward_var',
    'log_prior_delta',
    'mean_add_increment',
    'model_log_prior',
    'order_scores',
    'rank',
    'rank_mean_add',
    'rank_mean_add_all',
    'rank_mean_drop',
    'rank_var_add',
    'rank_var_add_all',
    'rank_var_drop',
    'select_model',
    'selection_prior',
]
