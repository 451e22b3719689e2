"""
Core models, bound evaluation and the variational solver
"""

from .data import (
    ColumnRoles,
    apply_scaling,
    quadratic_expansion,
    standardize,
    train_validation_split,
    unstandardize,
    unstandardize_fit,
    validate_dataset,
)
from .engine import (
    fit_vb,
    init_fit,
    newton_gamma_glm_mode,
    predict,
    pseudo_responses,
    update_alpha,
    update_beta,
    update_hyper,
)
from .homoscedastic import update_alpha_scalar
from .lower_bound import elbo, elbo_terms
from .models import (
    DesignData,
    ElboTerms,
    FitTrace,
    ModelIndex,
    PriorSpec,
    ScalingInfo,
    SolverConfig,
    VariationalFit,
)

__all__ = [
    'ColumnRoles',
    'DesignData',
    'ElboTerms',
    'FitTrace',
    'ModelIndex',
    'PriorSpec',
    'ScalingInfo',
    'SolverConfig',
    'VariationalFit',
    'apply_scaling',
    'elbo',
    'elbo_terms',
    'fit_vb',
    'init_fit',
    'newton_gamma_glm_mode',
    'predict',
    'pseudo_responses',
    'quadratic_expansion',
    'standardize',
    'train_validation_split',
    'unstandardize',
    'unstandardize_fit',
    'update_alpha',
    'update_alpha_scalar',
    'update_beta',
    'update_hyper',
    'validate_dataset',
]
