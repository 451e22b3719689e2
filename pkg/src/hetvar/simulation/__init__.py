"""
Simulation, evaluation metrics and replication studies
"""

from .generator import derive_seeds, make_generator, simulate_hetero
from .metrics import (
    FitClassification,
    classify_fit,
    coef_mse,
    coefficient_frame,
    evaluate,
    full_coefficients,
    mse,
    original_scale_fit,
    pps,
)
from .study import replicate_study, run_replication, summarize

__all__ = [
    'FitClassification',
    'classify_fit',
    'coef_mse',
    'coefficient_frame',
    'derive_seeds',
    'evaluate',
    'full_coefficients',
    'make_generator',
    'mse',
    'original_scale_fit',
    'pps',
    'replicate_study',
    'run_replication',
    'simulate_hetero',
    'summarize',
]
