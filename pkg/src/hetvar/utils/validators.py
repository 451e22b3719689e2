"""
Input validation utilities
"""

from typing import Sequence

import numpy as np

from ..exceptions import ConfigurationError

def validate_positive(name: str, value: float, allow_zero: bool = False) -> float:
    """Validate a positive (or non-negative) scalar setting"""
    if value is None or not np.isfinite(value):
        raise ConfigurationError(f"{name} must be a finite number, got {value!r}")
    if allow_zero and value < 0:
        raise ConfigurationError(f"{name} must be non-negative, got {value}")
    if not allow_zero and value <= 0:
        raise ConfigurationError(f"{name} must be positive, got {value}")
    return float(value)

def validate_count(name: str, value: int, minimum: int = 1) -> int:
    """Validate an integer count"""
    if int(value) != value or value < minimum:
        raise ConfigurationError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)

def validate_probability(name: str, value: float) -> float:
    """Validate an inclusion probability (open interval)"""
    if value is None or not 0.0 < value < 1.0:
        raise ConfigurationError(f"{name} must lie strictly between 0 and 1, got {value!r}")
    return float(value)

def validate_probabilities(name: str, values: Sequence[float]) -> tuple:
    """Validate a vector of inclusion probabilities"""
    return tuple(validate_probability(f"{name}[{i}]", v) for i, v in enumerate(values))

