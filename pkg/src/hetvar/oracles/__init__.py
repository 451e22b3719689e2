"""
Independent verification oracles: sampling and quadrature references,
finite differences, grid maximization and exhaustive model search
"""

from .evidence import log_evidence_quadrature, mc_elbo_oracle, mc_term_estimates
from .numeric import finite_diff_grad, grid_max_1d
from .report import OracleReport, reports_frame, write_reports
from .search import enumerate_models, exhaustive_search

__all__ = [
    'OracleReport',
    'enumerate_models',
    'exhaustive_search',
    'finite_diff_grad',
    'grid_max_1d',
    'log_evidence_quadrature',
    'mc_elbo_oracle',
    'mc_term_estimates',
    'reports_frame',
    'write_reports',
]
