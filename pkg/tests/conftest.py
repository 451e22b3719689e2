# tests/conftest.py
"""
Test configuration and fixtures
"""

import pytest
import os
import sys
from pathlib import Path

import numpy as np
import pandas as pd

# Add src to Python path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from hetvar.core.models import DesignData, PriorSpec, SolverConfig
from hetvar.utils.config import reset_config

FIXTURES = Path(__file__).parent / "fixtures"


def random_instance(seed, n=60, p=3, q=3, shared=True, alpha_scale=0.5):
    """
    Heteroscedastic data with intercepts at column 0 of X and Z.

    shared=True uses the mean design for the variance model (names x1..).
    """
    rng = np.random.Generator(np.random.Philox(seed))
    X = np.hstack([np.ones((n, 1)), rng.standard_normal((n, p - 1))])
    names_mean = ["(Intercept)"] + [f"x{k}" for k in range(1, p)]
    if shared:
        if q != p:
            raise ValueError("shared designs need p == q")
        Z, names_var = X, names_mean
    else:
        Z = np.hstack([np.ones((n, 1)), rng.standard_normal((n, q - 1))])
        names_var = ["(Intercept)"] + [f"z{k}" for k in range(1, q)]
    beta = rng.normal(0.0, 1.0, p)
    alpha = rng.uniform(-alpha_scale, alpha_scale, q)
    y = X @ beta + np.exp(0.5 * Z @ alpha) * rng.standard_normal(n)
    return DesignData(y=y, X=X, Z=Z, column_names_mean=names_mean, column_names_var=names_var,
                      intercept_mean_col=0, intercept_var_col=0)


def planted_instance(seed, n=200):
    """Mean signal on x1 and x3, variance signal on x1, four candidates each"""
    rng = np.random.Generator(np.random.Philox(seed))
    x = rng.standard_normal((n, 4))
    X = np.hstack([np.ones((n, 1)), x])
    beta = np.array([1.0, 3.0, 0.0, -2.0, 0.0])
    alpha = np.array([0.0, 1.5, 0.0, 0.0, 0.0])
    y = X @ beta + np.exp(0.5 * X @ alpha) * rng.standard_normal(n)
    names = ["(Intercept)", "x1", "x2", "x3", "x4"]
    return DesignData(y=y, X=X, Z=X, column_names_mean=names, column_names_var=names,
                      intercept_mean_col=0, intercept_var_col=0)


@pytest.fixture(autouse=True)
def fresh_config(monkeypatch):
    """Every test starts from defaults plus its own environment"""
    for name in ("HETVAR_CONFIG", "HETVAR_ELBO_TOL", "HETVAR_MAX_ITER", "HETVAR_NEWTON_TOL",
                 "HETVAR_EXPONENT_CLIP", "HETVAR_PRIOR_VAR", "HETVAR_THREADS", "LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)
    reset_config()
    yield
    reset_config()


@pytest.fixture
def instance_factory():
    return random_instance


@pytest.fixture
def hetero_data():
    return random_instance(7, n=80, p=3, q=3)


@pytest.fixture
def hetero_prior(hetero_data):
    return PriorSpec.isotropic_prior(hetero_data.p, hetero_data.q)


@pytest.fixture
def planted_data():
    return planted_instance(11)


@pytest.fixture
def solver_config():
    return SolverConfig()


@pytest.fixture
def sample_csv_path():
    """Small numeric table: response y, predictors a, b, c"""
    return str(FIXTURES / "sample_data.csv")


@pytest.fixture
def nan_csv_path():
    """Same layout with one missing cell in column b"""
    return str(FIXTURES / "sample_with_nan.csv")


@pytest.fixture
def temp_csv_file(tmp_path):
    """Write a frame to a temporary CSV and return its path"""
    def _write(frame: pd.DataFrame, name: str = "data.csv") -> str:
        path = tmp_path / name
        frame.to_csv(path, index=False)
        return str(path)
    return _write


@pytest.fixture
def sniffer_csv():
    """
    Vapour-recovery table with columns y, g1, g2, g3, x2, x4.

    tests/fixtures/sniffer.csv is used unless HETVAR_SNIFFER_CSV points elsewhere.
    """
    path = os.getenv("HETVAR_SNIFFER_CSV") or str(FIXTURES / "sniffer.csv")
    if not os.path.isfile(path):
        pytest.skip(f"sniffer dataset not found at {path} (add tests/fixtures/sniffer.csv or set HETVAR_SNIFFER_CSV)")
    return path


@pytest.fixture
def diabetes_csv():
    """Ten numeric inputs plus a response column named y (any case)"""
    path = os.getenv("HETVAR_DIABETES_CSV")
    if not path or not os.path.isfile(path):
        pytest.skip("diabetes dataset not available (set HETVAR_DIABETES_CSV)")
    return path


@pytest.fixture
def planted_factory():
    return planted_instance
