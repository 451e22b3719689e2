"""
Dataset validation, standardization and design helpers
"""

from dataclasses import dataclass, field
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from .models import DesignData, ScalingInfo, StandardizePolicy, VariationalFit
from ..exceptions import DataError, ValidationError
from ..utils.logger import get_logger

logger = get_logger(__name__)

INTERCEPT_NAME = "(Intercept)"


@dataclass
class ColumnRoles:
    """Which table columns feed the response, the mean model and the variance model"""
    response: str
    mean: List[str]
    var: List[str] = field(default_factory=list)
    add_intercepts: bool = True


def _numeric_block(table: pd.DataFrame, columns: Sequence[str], row_offset: int) -> np.ndarray:
    """Coerce columns to float, naming the first offending cell"""
    block = np.empty((len(table), len(columns)))
    for k, name in enumerate(columns):
        coerced = pd.to_numeric(table[name], errors="coerce").to_numpy(dtype=float)
        bad = np.flatnonzero(~np.isfinite(coerced))
        if bad.size:
            row = int(bad[0])
            raw = table[name].iloc[row]
            raise DataError(
                f"Non-finite or non-numeric value {raw!r} in column '{name}', row {row + row_offset}"
            )
        block[:, k] = coerced
    return block


def validate_dataset(raw_table: pd.DataFrame, roles: ColumnRoles, row_offset: int = 1) -> DesignData:
    """
    Build a DesignData from a table and a column-role map.

    Intercepts, when requested, are inserted as column 0 of both designs.
    row_offset turns zero-based positions into the row numbers reported in
    errors (1 for plain tables, 2 for headed CSV files).
    """
    if not isinstance(raw_table, pd.DataFrame):
        raw_table = pd.DataFrame(raw_table)

    duplicated = raw_table.columns[raw_table.columns.duplicated()]
    if len(duplicated):
        raise DataError(f"Duplicate column names: {sorted(set(map(str, duplicated)))}")
    if len(raw_table) == 0:
        raise DataError("Dataset has zero rows")
    if not roles.mean:
        raise ValidationError("At least one mean predictor is required")

    referenced = [roles.response] + list(roles.mean) + list(roles.var)
    missing = [c for c in referenced if c not in raw_table.columns]
    if missing:
        raise DataError(f"Columns not found in table: {missing}")
    for label, names in (("mean", roles.mean), ("variance", roles.var)):
        if len(set(names)) != len(names):
            raise DataError(f"Column listed twice in the {label} model: {list(names)}")
        if roles.response in names:
            raise DataError(f"Response '{roles.response}' cannot also be a {label} predictor")

    y = _numeric_block(raw_table, [roles.response], row_offset)[:, 0]
    X = _numeric_block(raw_table, roles.mean, row_offset)
    Z = _numeric_block(raw_table, roles.var, row_offset) if roles.var else np.empty((len(raw_table), 0))

    names_mean = [str(c) for c in roles.mean]
    names_var = [str(c) for c in roles.var]
    intercept_mean = intercept_var = None

    if roles.add_intercepts:
        if INTERCEPT_NAME in names_mean or INTERCEPT_NAME in names_var:
            raise DataError(f"Column name '{INTERCEPT_NAME}' is reserved for intercepts")
        ones = np.ones((len(raw_table), 1))
        X = np.hstack([ones, X])
        Z = np.hstack([ones, Z])
        names_mean.insert(0, INTERCEPT_NAME)
        names_var.insert(0, INTERCEPT_NAME)
        intercept_mean = intercept_var = 0

    data = DesignData(
        y=y,
        X=X,
        Z=Z,
        column_names_mean=names_mean,
        column_names_var=names_var,
        intercept_mean_col=intercept_mean,
        intercept_var_col=intercept_var,
        response_name=str(roles.response),
    )
    logger.debug(f"Validated dataset: n={data.n}, p={data.p}, q={data.q}")
    return data


def _column_scaling(design: np.ndarray, names: Sequence[str], intercept: Optional[int],
                    policy: StandardizePolicy) -> Tuple[np.ndarray, np.ndarray]:
    k = design.shape[1]
    shift = np.zeros(k)
    scale = np.ones(k)
    if policy is StandardizePolicy.NONE:
        return shift, scale

    for j in range(k):
        if j == intercept:
            continue
        column = design[:, j]
        if np.ptp(column) == 0.0:
            raise DataError(
                f"Column '{names[j]}' is constant and cannot be standardized; flag it as an intercept or drop it"
            )
        if policy is StandardizePolicy.UNIT_SS:
            scale[j] = np.sqrt(np.mean(column ** 2))
        else:
            shift[j] = np.mean(column)
            scale[j] = np.std(column)
    return shift, scale


def standardize(data: DesignData, policy="unit_ss") -> Tuple[DesignData, ScalingInfo]:
    """Scale non-intercept columns of X and Z; intercepts are left untouched"""
    policy = StandardizePolicy(policy)
    shift_mean, scale_mean = _column_scaling(data.X, data.column_names_mean, data.intercept_mean_col, policy)
    shift_var, scale_var = _column_scaling(data.Z, data.column_names_var, data.intercept_var_col, policy)
    scaling = ScalingInfo(
        policy=policy,
        shift_mean=shift_mean,
        scale_mean=scale_mean,
        shift_var=shift_var,
        scale_var=scale_var,
        intercept_mean_col=data.intercept_mean_col,
        intercept_var_col=data.intercept_var_col,
    )
    return apply_scaling(data, scaling), scaling


def apply_scaling(data: DesignData, scaling: ScalingInfo) -> DesignData:
    """Apply previously computed scaling (e.g. training statistics to validation data)"""
    if data.p != scaling.scale_mean.shape[0] or data.q != scaling.scale_var.shape[0]:
        raise ValidationError("Scaling was computed for designs of a different width")
    return DesignData(
        y=data.y,
        X=(data.X - scaling.shift_mean) / scaling.scale_mean,
        Z=(data.Z - scaling.shift_var) / scaling.scale_var,
        column_names_mean=data.column_names_mean,
        column_names_var=data.column_names_var,
        intercept_mean_col=data.intercept_mean_col,
        intercept_var_col=data.intercept_var_col,
        response_name=data.response_name,
    )


def unstandardize(data: DesignData, scaling: ScalingInfo) -> DesignData:
    """Invert apply_scaling"""
    if data.p != scaling.scale_mean.shape[0] or data.q != scaling.scale_var.shape[0]:
        raise ValidationError("Scaling was computed for designs of a different width")
    return DesignData(
        y=data.y,
        X=data.X * scaling.scale_mean + scaling.shift_mean,
        Z=data.Z * scaling.scale_var + scaling.shift_var,
        column_names_mean=data.column_names_mean,
        column_names_var=data.column_names_var,
        intercept_mean_col=data.intercept_mean_col,
        intercept_var_col=data.intercept_var_col,
        response_name=data.response_name,
    )


def unstandardize_fit(fit: VariationalFit, scaling: ScalingInfo,
                      mean_idx: Sequence[int], var_idx: Sequence[int]) -> VariationalFit:
    """Map variational factors of the active columns back to the original design scale"""
    T_mean = scaling.coefficient_transform("mean", mean_idx)
    T_var = scaling.coefficient_transform("var", var_idx)
    return VariationalFit(
        mu_beta_q=T_mean @ fit.mu_beta_q,
        Sigma_beta_q=T_mean @ fit.Sigma_beta_q @ T_mean.T,
        mu_alpha_q=T_var @ fit.mu_alpha_q,
        Sigma_alpha_q=T_var @ fit.Sigma_alpha_q @ T_var.T,
        elbo=fit.elbo,
        iterations=fit.iterations,
        converged=fit.converged,
    )


def quadratic_expansion(table: pd.DataFrame, inputs: Sequence[str]) -> pd.DataFrame:
    """
    Main effects, pairwise interactions and squares of non-binary inputs.

    Columns are named 'a', 'a:b' and 'a^2'. Inputs with two or fewer
    distinct values get no square term.
    """
    missing = [c for c in inputs if c not in table.columns]
    if missing:
        raise DataError(f"Columns not found in table: {missing}")

    numeric = {name: pd.to_numeric(table[name], errors="coerce") for name in inputs}
    for name, values in numeric.items():
        if values.isna().any():
            row = int(np.flatnonzero(values.isna().to_numpy())[0])
            raise DataError(f"Non-numeric value in column '{name}', row {row + 1}")

    expanded = {name: numeric[name] for name in inputs}
    for a, b in combinations(inputs, 2):
        expanded[f"{a}:{b}"] = numeric[a] * numeric[b]
    for name in inputs:
        if numeric[name].nunique() > 2:
            expanded[f"{name}^2"] = numeric[name] ** 2
    return pd.DataFrame(expanded, index=table.index)


def train_validation_split(data: DesignData, n_train: int, seed: int) -> Tuple[DesignData, DesignData]:
    """Random partition into training and validation rows"""
    if not 1 <= n_train < data.n:
        raise ValidationError(f"n_train must lie in [1, {data.n - 1}], got {n_train}")
    rng = np.random.Generator(np.random.Philox(seed))
    order = rng.permutation(data.n)
    return data.rows(np.sort(order[:n_train])), data.rows(np.sort(order[n_train:]))
