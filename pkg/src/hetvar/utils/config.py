"""
Configuration management
"""

import copy
import os
import yaml
from typing import Dict, Any, Optional

from ..exceptions import ConfigurationError

DEFAULT_CONFIG: Dict[str, Any] = {
    "solver": {
        "elbo_tol": 1e-6,
        "max_outer_iters": 200,
        "newton_tol": 1e-10,
        "newton_max_iters": 50,
        "exponent_clip": 30.0,
        "jitter": 1e-10,
        "homoscedastic": False,
    },
    "prior": {
        "sigma2_beta": 10000.0,
        "sigma2_alpha": 10000.0,
        "shrink": False,
        "a": 0.01,
        "b": 0.01,
    },
    "selection": {
        "policy": "ebic",
        "pi_mu": None,
        "pi_sigma": None,
        "method": "fbvar",
        "restricted": False,
        "standardize": "unit_ss",
        "try_next_k": 1,
        "max_steps": 1000,
    },
    "study": {
        "threads": 1,
        "replications": 100,
        "integrated_pps": False,
    },
    "logging": {
        "level": "INFO",
        "format": "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    },
}


class Config:
    """Configuration manager"""

    def __init__(self, config_path: Optional[str] = None):
        """Initialize configuration"""
        self._config: Dict[str, Any] = {}
        self._load_config(config_path)

    def _load_config(self, config_path: Optional[str] = None):
        """Load configuration from defaults, file (argument or HETVAR_CONFIG) and environment"""
        config_path = config_path or os.getenv("HETVAR_CONFIG")
        self._config = copy.deepcopy(DEFAULT_CONFIG)

        if config_path:
            if not os.path.exists(config_path):
                raise ConfigurationError(f"Config file not found: {config_path}")
            try:
                with open(config_path, "r", encoding="utf-8") as f:
                    file_config = yaml.safe_load(f) or {}
            except yaml.YAMLError as e:
                raise ConfigurationError(f"Could not parse config file {config_path}: {e}")
            if not isinstance(file_config, dict):
                raise ConfigurationError(f"Config file {config_path} must hold a mapping")
            self._merge_config(self._config, file_config)

        self._load_from_environment()

    def _merge_config(self, base: Dict, override: Dict):
        """Recursively merge configuration dictionaries"""
        for key, value in override.items():
            if key in base and isinstance(base[key], dict) and isinstance(value, dict):
                self._merge_config(base[key], value)
            else:
                base[key] = value

    def _load_from_environment(self):
        """Load configuration from environment variables"""
        env_mappings = {
            "HETVAR_ELBO_TOL": ("solver", "elbo_tol", float),
            "HETVAR_MAX_ITER": ("solver", "max_outer_iters", int),
            "HETVAR_NEWTON_TOL": ("solver", "newton_tol", float),
            "HETVAR_EXPONENT_CLIP": ("solver", "exponent_clip", float),
            "HETVAR_PRIOR_VAR": ("prior", "sigma2_beta", float),
            "HETVAR_THREADS": ("study", "threads", int),
            "LOG_LEVEL": ("logging", "level", str),
        }

        for env_var, (section, key, type_converter) in env_mappings.items():
            value = os.getenv(env_var)
            if value is not None:
                try:
                    self._config[section][key] = type_converter(value)
                except ValueError:
                    raise ConfigurationError(f"Invalid value for {env_var}: {value}")

        # one variable sets both prior scales
        if os.getenv("HETVAR_PRIOR_VAR") is not None:
            self._config["prior"]["sigma2_alpha"] = self._config["prior"]["sigma2_beta"]

    def get(self, section: str, key: str, default=None):
        """Get configuration value"""
        return self._config.get(section, {}).get(key, default)

    def get_section(self, section: str) -> Dict[str, Any]:
        """Get entire configuration section"""
        return dict(self._config.get(section, {}))

    def get_all(self) -> Dict[str, Any]:
        """Get all configuration"""
        return copy.deepcopy(self._config)


# Global config instance
_config_instance = None

def get_config(config_path: Optional[str] = None) -> Config:
    """Get global configuration instance"""
    global _config_instance
    if _config_instance is None or config_path is not None:
        _config_instance = Config(config_path)
    return _config_instance

def reset_config():
    """Drop the cached configuration so the next call re-reads file and environment"""
    global _config_instance
    _config_instance = None
