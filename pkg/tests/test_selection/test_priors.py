# tests/test_selection/test_priors.py
"""
Test model priors over (C, V)
"""

import numpy as np
import pytest

from hetvar.core.models import ModelIndex, ModelPriorPolicy
from hetvar.exceptions import ConfigurationError
from hetvar.selection.priors import log_binomial, log_prior_delta, model_log_prior


@pytest.fixture
def index():
    """Two of four mean candidates and one of four variance candidates"""
    return ModelIndex(C=(0, 1, 3), V=(0, 2), p=5, q=5, intercept_mean=0, intercept_var=0)


class TestModelLogPrior:
    """Test model_log_prior"""

    def test_uniform(self, index):
        assert model_log_prior(index, ModelPriorPolicy.uniform()) == 0.0

    def test_ebic(self, index):
        expected = -np.log(6.0) - np.log(4.0)
        assert model_log_prior(index, ModelPriorPolicy.ebic()) == pytest.approx(expected)

    def test_ebic_intercepts_only_is_zero(self):
        index = ModelIndex(C=(0,), V=(0,), p=5, q=5, intercept_mean=0, intercept_var=0)
        assert model_log_prior(index, ModelPriorPolicy.ebic()) == pytest.approx(0.0)

    def test_bernoulli_scalar(self, index):
        policy = ModelPriorPolicy.bernoulli(0.2, 0.1)
        expected = 2 * np.log(0.2) + 2 * np.log(0.8) + np.log(0.1) + 3 * np.log(0.9)
        assert model_log_prior(index, policy) == pytest.approx(expected)

    def test_bernoulli_per_predictor(self, index):
        policy = ModelPriorPolicy.bernoulli((0.5, 0.4, 0.3, 0.2), (0.1, 0.2, 0.3, 0.4))
        # mean pool (1, 2, 3, 4) with 1 and 3 active; variance pool with 2 active
        expected = (np.log(0.5) + np.log(0.6) + np.log(0.3) + np.log(0.8)
                    + np.log(0.9) + np.log(0.2) + np.log(0.7) + np.log(0.6))
        assert model_log_prior(index, policy) == pytest.approx(expected)

    def test_bernoulli_length_mismatch(self, index):
        policy = ModelPriorPolicy.bernoulli((0.5, 0.5), 0.1)
        with pytest.raises(ConfigurationError, match="pi_mu"):
            model_log_prior(index, policy)

    def test_bernoulli_half_matches_uniform_differences(self, index):
        """pi = 1/2 is the uniform prior up to a constant"""
        policy = ModelPriorPolicy.bernoulli(0.5, 0.5)
        bigger = index.add_mean(2)
        assert log_prior_delta(index, bigger, policy) == pytest.approx(0.0)


class TestLogPriorDelta:
    """Test log_prior_delta"""

    def test_ebic_add(self, index):
        bigger = index.add_mean(2)
        expected = -np.log(4.0) + np.log(6.0)
        assert log_prior_delta(index, bigger, ModelPriorPolicy.ebic()) == pytest.approx(expected)

    def test_antisymmetric(self, index):
        policy = ModelPriorPolicy.bernoulli(0.3, 0.2)
        other = index.add_var(4)
        assert log_prior_delta(index, other, policy) == pytest.approx(-log_prior_delta(other, index, policy))


class TestLogBinomial:
    """Test log_binomial"""

    @pytest.mark.parametrize("n, k, value", [(5, 2, 10), (4, 0, 1), (10, 10, 1), (30, 15, 155117520)])
    def test_values(self, n, k, value):
        assert log_binomial(n, k) == pytest.approx(np.log(value))
