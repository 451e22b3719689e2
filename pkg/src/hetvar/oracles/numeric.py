"""
Finite differences and one-dimensional grid maximization
"""

from typing import Callable, Tuple

import numpy as np
from scipy import optimize

from ..exceptions import OracleError


def _central(func: Callable[[np.ndarray], float], point: np.ndarray, step: float) -> np.ndarray:
    grad = np.empty_like(point)
    for k in range(point.size):
        offset = np.zeros_like(point)
        offset[k] = step
        grad[k] = (func(point + offset) - func(point - offset)) / (2.0 * step)
    return grad


def finite_diff_grad(func: Callable[[np.ndarray], float], point, step: float = 1e-5,
                     richardson: bool = False) -> np.ndarray:
    """Central-difference gradient, optionally Richardson-extrapolated from steps h and h/2"""
    if not step > 0:
        raise OracleError(f"Finite-difference step must be positive, got {step}")
    point = np.array(point, dtype=float, copy=True).reshape(-1)
    coarse = _central(func, point, step)
    if not richardson:
        return coarse
    fine = _central(func, point, 0.5 * step)
    return (4.0 * fine - coarse) / 3.0


def grid_max_1d(func: Callable[[float], float], bracket: Tuple[float, float],
                resolution: float = 1e-4) -> Tuple[float, float]:
    """Dense scan of [lo, hi] at the given resolution, refined by golden-section search"""
    lo, hi = float(bracket[0]), float(bracket[1])
    if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi):
        raise OracleError(f"Invalid bracket {bracket}")
    if not resolution > 0:
        raise OracleError(f"Resolution must be positive, got {resolution}")

    grid = np.linspace(lo, hi, int(np.ceil((hi - lo) / resolution)) + 1)
    values = np.array([func(x) for x in grid])
    k = int(np.nanargmax(values))
    best_x, best_f = float(grid[k]), float(values[k])
    if k == 0 or k == grid.size - 1:
        return best_x, best_f

    try:
        refined = optimize.minimize_scalar(
            lambda x: -func(x),
            bracket=(grid[k - 1], grid[k], grid[k + 1]),
            method="golden",
            options={"xtol": 1e-12},
        )
    except ValueError:
        return best_x, best_f
    if refined.success and -refined.fun >= best_f and grid[k - 1] <= refined.x <= grid[k + 1]:
        return float(refined.x), float(-refined.fun)
    return best_x, best_f
