# tests/test_core/test_data.py
"""
Test dataset validation, standardization and design helpers
"""

import numpy as np
import pandas as pd
import pytest

from hetvar.core.data import (
    INTERCEPT_NAME,
    ColumnRoles,
    apply_scaling,
    quadratic_expansion,
    standardize,
    train_validation_split,
    unstandardize,
    unstandardize_fit,
    validate_dataset,
)
from hetvar.core.models import StandardizePolicy, VariationalFit
from hetvar.exceptions import DataError, ValidationError


@pytest.fixture
def table():
    return pd.DataFrame({
        "out": [1.0, 2.5, 0.3, 4.1, 2.2],
        "a": [0.1, -1.2, 0.7, 2.0, -0.4],
        "b": [3.0, 1.0, 2.0, 5.0, 4.0],
    })


class TestValidateDataset:
    """Test validate_dataset"""

    def test_three_rows(self):
        raw = pd.DataFrame({"out": [1.0, 2.0, 3.0], "a": [0.5, 1.5, -0.5]})
        data = validate_dataset(raw, ColumnRoles(response="out", mean=["a"], var=["a"]))
        assert (data.n, data.p, data.q) == (3, 2, 2)
        assert data.intercept_mean_col == 0
        assert data.intercept_var_col == 0
        assert data.column_names_mean == (INTERCEPT_NAME, "a")
        assert data.response_name == "out"
        np.testing.assert_array_equal(data.X[:, 0], 1.0)

    def test_without_intercepts(self, table):
        data = validate_dataset(table, ColumnRoles("out", ["a", "b"], ["b"], add_intercepts=False))
        assert data.p == 2 and data.q == 1
        assert data.intercept_mean_col is None

    def test_non_numeric_cell_named(self, table):
        table = table.astype(object)
        table.loc[3, "b"] = "oops"
        with pytest.raises(DataError, match=r"column 'b', row 4"):
            validate_dataset(table, ColumnRoles("out", ["a", "b"], ["a"]))

    def test_nan_cell_named(self, table):
        table.loc[1, "a"] = np.nan
        with pytest.raises(DataError, match=r"column 'a', row 2"):
            validate_dataset(table, ColumnRoles("out", ["a"], ["a"]))

    def test_zero_rows(self, table):
        with pytest.raises(DataError):
            validate_dataset(table.iloc[:0], ColumnRoles("out", ["a"], ["a"]))

    def test_missing_column(self, table):
        with pytest.raises(DataError, match="not found"):
            validate_dataset(table, ColumnRoles("out", ["a", "zzz"], ["a"]))

    def test_duplicate_columns(self):
        raw = pd.DataFrame([[1.0, 2.0, 3.0]], columns=["out", "a", "a"])
        with pytest.raises(DataError, match="Duplicate"):
            validate_dataset(raw, ColumnRoles("out", ["a"]))

    def test_response_as_predictor(self, table):
        with pytest.raises(DataError):
            validate_dataset(table, ColumnRoles("out", ["a", "out"]))

    def test_reserved_intercept_name(self):
        raw = pd.DataFrame({"out": [1.0, 2.0], INTERCEPT_NAME: [1.0, 1.0]})
        with pytest.raises(DataError, match="reserved"):
            validate_dataset(raw, ColumnRoles("out", [INTERCEPT_NAME]))

    def test_needs_mean_predictor(self, table):
        with pytest.raises(ValidationError):
            validate_dataset(table, ColumnRoles("out", []))


class TestStandardize:
    """Test column scaling"""

    def test_unit_sum_of_squares(self, table):
        data = validate_dataset(table, ColumnRoles("out", ["a", "b"], ["a", "b"]))
        scaled, scaling = standardize(data, "unit_ss")
        np.testing.assert_allclose((scaled.X[:, 1:] ** 2).sum(axis=0), data.n)
        np.testing.assert_allclose((scaled.Z[:, 1:] ** 2).sum(axis=0), data.n)
        np.testing.assert_array_equal(scaled.X[:, 0], 1.0)
        assert scaling.unit_ss
        assert scaling.policy is StandardizePolicy.UNIT_SS

    def test_zscore_is_centered(self, table):
        data = validate_dataset(table, ColumnRoles("out", ["a", "b"], ["a"]))
        scaled, _ = standardize(data, "zscore")
        np.testing.assert_allclose(scaled.X[:, 1:].mean(axis=0), 0.0, atol=1e-12)
        np.testing.assert_allclose((scaled.X[:, 1:] ** 2).sum(axis=0), data.n)

    def test_none_is_identity(self, table):
        data = validate_dataset(table, ColumnRoles("out", ["a", "b"], ["a"]))
        scaled, scaling = standardize(data, "none")
        np.testing.assert_array_equal(scaled.X, data.X)
        assert not scaling.unit_ss

    def test_constant_column(self):
        raw = pd.DataFrame({"out": [1.0, 2.0, 3.0], "k": [2.0, 2.0, 2.0]})
        data = validate_dataset(raw, ColumnRoles("out", ["k"], ["k"]))
        with pytest.raises(DataError, match="constant"):
            standardize(data, "unit_ss")

    def test_round_trip(self, table):
        data = validate_dataset(table, ColumnRoles("out", ["a", "b"], ["b"]))
        scaled, scaling = standardize(data, "zscore")
        np.testing.assert_allclose(unstandardize(scaled, scaling).X, data.X)
        np.testing.assert_allclose(apply_scaling(data, scaling).Z, scaled.Z)

    @pytest.mark.parametrize("policy", ["unit_ss", "zscore"])
    def test_fit_back_transform_preserves_predictions(self, table, policy):
        data = validate_dataset(table, ColumnRoles("out", ["a", "b"], ["a", "b"]))
        scaled, scaling = standardize(data, policy)
        rng = np.random.Generator(np.random.Philox(3))
        A = rng.standard_normal((3, 3))
        fit = VariationalFit(rng.standard_normal(3), A @ A.T + np.eye(3), rng.standard_normal(3), np.eye(3))
        original = unstandardize_fit(fit, scaling, [0, 1, 2], [0, 1, 2])
        np.testing.assert_allclose(data.X @ original.mu_beta_q, scaled.X @ fit.mu_beta_q)
        np.testing.assert_allclose(data.Z @ original.mu_alpha_q, scaled.Z @ fit.mu_alpha_q)
        # predictive variances x^T Sigma x agree too
        np.testing.assert_allclose(
            np.einsum("ij,jk,ik->i", data.X, original.Sigma_beta_q, data.X),
            np.einsum("ij,jk,ik->i", scaled.X, fit.Sigma_beta_q, scaled.X),
        )


class TestQuadraticExpansion:
    """Test the quadratic design builder"""

    def test_columns(self):
        table = pd.DataFrame({
            "age": [50, 60, 45, 33],
            "sex": [1, 2, 1, 2],
            "bmi": [20.1, 31.0, 25.5, 22.2],
        })
        expanded = quadratic_expansion(table, ["age", "sex", "bmi"])
        assert list(expanded.columns) == ["age", "sex", "bmi", "age:sex", "age:bmi", "sex:bmi", "age^2", "bmi^2"]
        assert expanded["age:bmi"].iloc[1] == pytest.approx(60 * 31.0)

    def test_ten_inputs_give_sixty_four(self):
        rng = np.random.Generator(np.random.Philox(0))
        inputs = [f"v{k}" for k in range(10)]
        table = pd.DataFrame(rng.standard_normal((20, 10)), columns=inputs)
        table["v1"] = rng.integers(0, 2, 20)
        assert quadratic_expansion(table, inputs).shape[1] == 64

    def test_missing_input(self):
        with pytest.raises(DataError):
            quadratic_expansion(pd.DataFrame({"a": [1.0]}), ["a", "b"])


class TestTrainValidationSplit:
    """Test random partition"""

    def test_partition(self, instance_factory):
        data = instance_factory(1, n=30)
        train, valid = train_validation_split(data, 20, seed=5)
        assert (train.n, valid.n) == (20, 10)
        combined = np.sort(np.concatenate([train.y, valid.y]))
        np.testing.assert_array_equal(combined, np.sort(data.y))

    def test_reproducible(self, instance_factory):
        data = instance_factory(1, n=30)
        first, _ = train_validation_split(data, 10, seed=9)
        second, _ = train_validation_split(data, 10, seed=9)
        np.testing.assert_array_equal(first.y, second.y)

    def test_sizes_checked(self, instance_factory):
        data = instance_factory(1, n=30)
        with pytest.raises(ValidationError):
            train_validation_split(data, 30, seed=0)
