"""
Utility modules for hetvar
"""

# Only import utilities, not core modules to avoid circular imports
from .config import get_config, reset_config
from .logger import get_logger, setup_logging

__all__ = [
    'get_config',
    'reset_config',
    'get_logger',
    'setup_logging'
]
