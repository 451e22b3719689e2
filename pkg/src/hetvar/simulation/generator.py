"""
Synthetic heteroscedastic regression data
"""

from typing import List, Tuple

import numpy as np
from scipy.special import ndtr

from ..core.models import DesignData, ModelIndex, SimulationSpec
from ..utils.logger import get_logger

logger = get_logger(__name__)


def make_generator(seed) -> np.random.Generator:
    """Counter-based generator used everywhere randomness is needed"""
    return np.random.Generator(np.random.Philox(seed))


def derive_seeds(seed: int, count: int) -> List[int]:
    """Independent integer seeds split off a master seed"""
    children = np.random.SeedSequence(seed).spawn(count)
    return [int(child.generate_state(1, dtype=np.uint64)[0]) for child in children]


def ar1_design(rng: np.random.Generator, n: int, dim: int, decay: float) -> np.ndarray:
    """Rows from N(0, Sigma) with Sigma_ij = decay^|i-j|"""
    noise = rng.standard_normal((n, dim))
    x = np.empty_like(noise)
    x[:, 0] = noise[:, 0]
    innovation = np.sqrt(1.0 - decay ** 2)
    for k in range(1, dim):
        x[:, k] = decay * x[:, k - 1] + innovation * noise[:, k]
    return x


def simulate_hetero(spec: SimulationSpec, seed: int) -> Tuple[DesignData, DesignData, ModelIndex]:
    """
    Draw training and validation sets from
    y = intercept + x^T beta + sigma exp(x^T alpha / 2) eps.

    Designs carry an intercept at column 0 followed by x1..xd; the returned
    truth indexes the non-zero coefficients in that layout.
    """
    rng = make_generator(seed)
    n = spec.n_train + spec.n_valid
    x = ar1_design(rng, n, spec.dim, spec.correlation_decay)
    if spec.transform_to_unit:
        x = ndtr(x)
    eps = rng.standard_normal(n)
    y = spec.intercept_mean + x @ spec.beta_tilde + spec.sigma * np.exp(0.5 * x @ spec.alpha_tilde) * eps

    design = np.hstack([np.ones((n, 1)), x])
    names = ["(Intercept)"] + [f"x{k + 1}" for k in range(spec.dim)]

    def _part(rows: slice) -> DesignData:
        return DesignData(
            y=y[rows],
            X=design[rows],
            Z=design[rows],
            column_names_mean=names,
            column_names_var=names,
            intercept_mean_col=0,
            intercept_var_col=0,
        )

    truth = ModelIndex(
        C=(0,) + tuple(int(j) + 1 for j in np.flatnonzero(spec.beta_tilde)),
        V=(0,) + tuple(int(j) + 1 for j in np.flatnonzero(spec.alpha_tilde)),
        p=spec.dim + 1,
        q=spec.dim + 1,
        intercept_mean=0,
        intercept_var=0,
    )
    logger.debug(f"Simulated n={n}, dim={spec.dim} with seed {seed}")
    return _part(slice(0, spec.n_train)), _part(slice(spec.n_train, n)), truth
