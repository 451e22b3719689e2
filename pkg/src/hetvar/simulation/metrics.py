"""
Prediction and selection metrics
"""

from typing import NamedTuple, Optional, Sequence

import numpy as np
import pandas as pd

from ..core.data import unstandardize_fit
from ..core.engine import predict
from ..core.lower_bound import LOG_2PI
from ..core.models import DesignData, ModelIndex, ScalingInfo, SelectionResult, VariationalFit
from ..exceptions import DimensionError, ValidationError


class FitClassification(NamedTuple):
    correct_mean: bool
    correct_var: bool
    nzc_mean: int
    nzc_var: int


def mse(predictions: Sequence[float], truth: Sequence[float]) -> float:
    """Mean squared prediction error"""
    predictions = np.asarray(predictions, dtype=float).reshape(-1)
    truth = np.asarray(truth, dtype=float).reshape(-1)
    if predictions.shape != truth.shape:
        raise DimensionError(f"Length mismatch: {predictions.shape[0]} predictions, {truth.shape[0]} values")
    if predictions.size == 0:
        raise ValidationError("mse needs at least one value")
    return float(np.mean((truth - predictions) ** 2))


def pps(fit: VariationalFit, validation: DesignData, integrated: bool = False) -> float:
    """
    Average negative log predictive density on validation data.

    The plug-in density is N(y; x^T mu_beta, exp(z^T mu_alpha)); integrated
    adds x^T Sigma_beta x to the variance.
    """
    if validation.n == 0:
        raise ValidationError("pps needs at least one validation row")
    mean, variance = predict(fit, validation, integrated=integrated)
    return float(np.mean(0.5 * LOG_2PI + 0.5 * np.log(variance) + 0.5 * (validation.y - mean) ** 2 / variance))


def classify_fit(selected: ModelIndex, truth: ModelIndex) -> FitClassification:
    """
    Exact support recovery flags and zero-estimated counts, intercepts excluded.

    A predictor outside the selected model has an estimated coefficient of
    exactly zero, so the counts are the number of excluded candidates.
    """
    if (selected.p, selected.q) != (truth.p, truth.q):
        raise DimensionError("Selected and true models live in different universes")
    return FitClassification(
        correct_mean=set(selected.mean_predictors) == set(truth.mean_predictors),
        correct_var=set(selected.var_predictors) == set(truth.var_predictors),
        nzc_mean=selected.p_candidates - len(selected.mean_predictors),
        nzc_var=selected.q_candidates - len(selected.var_predictors),
    )


def original_scale_fit(result: SelectionResult) -> VariationalFit:
    """Selected model's factors on the unstandardized design"""
    scaling = result.scaling
    if scaling is None:
        return result.fit
    return unstandardize_fit(result.fit, scaling, result.index.C, result.index.V)


def full_coefficients(result: SelectionResult, model: str = "mean") -> np.ndarray:
    """Original-scale coefficient vector over the whole universe, zeros where excluded"""
    fit = original_scale_fit(result)
    if model == "mean":
        values = np.zeros(result.index.p)
        values[list(result.index.C)] = fit.mu_beta_q
    else:
        values = np.zeros(result.index.q)
        values[list(result.index.V)] = fit.mu_alpha_q
    return values


def coef_mse(estimate: Sequence[float], truth: Sequence[float]) -> float:
    """Squared error between true and estimated coefficient vectors"""
    estimate = np.asarray(estimate, dtype=float)
    truth = np.asarray(truth, dtype=float)
    if estimate.shape != truth.shape:
        raise DimensionError(f"Coefficient vectors differ in length: {estimate.shape} vs {truth.shape}")
    return float(np.sum((estimate - truth) ** 2))


def evaluate(result: SelectionResult, validation: DesignData, integrated: bool = False):
    """MSE and PPS of a selection result on (unstandardized) validation data"""
    fit = original_scale_fit(result)
    subset = validation.subset(result.index.C, result.index.V)
    mean, _ = predict(fit, subset)
    return mse(mean, subset.y), pps(fit, subset, integrated=integrated)


def coefficient_frame(data: DesignData, fit: VariationalFit, mean_idx: Sequence[int], var_idx: Sequence[int],
                      scaling: Optional[ScalingInfo] = None) -> pd.DataFrame:
    """name, mu, sd, model rows for the active coefficients (original scale when scaling is given)"""
    if scaling is not None:
        fit = unstandardize_fit(fit, scaling, mean_idx, var_idx)
    rows = [
        {"name": data.column_names_mean[j], "mu": float(fit.mu_beta_q[k]), "sd": float(fit.beta_sd[k]), "model": "mean"}
        for k, j in enumerate(mean_idx)
    ]
    rows += [
        {"name": data.column_names_var[j], "mu": float(fit.mu_alpha_q[k]), "sd": float(fit.alpha_sd[k]), "model": "var"}
        for k, j in enumerate(var_idx)
    ]
    return pd.DataFrame(rows, columns=["name", "mu", "sd", "model"])
