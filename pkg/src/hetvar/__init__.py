# src/hetvar/__init__.py
"""
hetvar
Bayesian heteroscedastic linear regression by variational approximation,
with fast greedy selection of mean and variance predictors
"""

# Import utilities first (no circular dependency)
from .utils.config import get_config
from .utils.logger import get_logger, setup_logging

# Import core components
from .core.models import (
    DesignData,
    ModelIndex,
    ModelPriorPolicy,
    PriorSpec,
    SelectionConfig,
    SelectionResult,
    SimulationSpec,
    SolverConfig,
    VariationalFit,
)
from .core.data import ColumnRoles, standardize, validate_dataset
from .core.engine import fit_vb, predict
from .core.lower_bound import elbo
from .selection.search import forward_backward_var, forward_var, select_model
from .simulation.generator import simulate_hetero
from .simulation.study import replicate_study

# Import file handlers
from .file_handlers.factory import FileHandlerFactory

# Import exceptions
from .exceptions import (
    HetVarError,
    ValidationError,
    DataError,
    ConfigurationError,
    SolverError,
    FileHandlerError,
    UnsupportedFileTypeError,
    OracleError,
)

__version__ = "1.0.0"

__all__ = [
    # Core functionality
    "fit_vb",
    "elbo",
    "predict",
    "standardize",
    "validate_dataset",
    "forward_var",
    "forward_backward_var",
    "select_model",
    "simulate_hetero",
    "replicate_study",

    # Models
    "ColumnRoles",
    "DesignData",
    "ModelIndex",
    "ModelPriorPolicy",
    "PriorSpec",
    "SelectionConfig",
    "SelectionResult",
    "SimulationSpec",
    "SolverConfig",
    "VariationalFit",

    # Components
    "FileHandlerFactory",

    # Utilities
    "get_config",
    "get_logger",
    "setup_logging",

    # Exceptions
    "HetVarError",
    "ValidationError",
    "DataError",
    "ConfigurationError",
    "SolverError",
    "FileHandlerError",
    "UnsupportedFileTypeError",
    "OracleError",
]

# Initialize logging when package is imported
try:
    setup_logging()
except Exception:
    # If logging setup fails, continue anyway
    pass
