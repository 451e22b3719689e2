# tests/test_core/test_lower_bound.py
"""
Test the closed-form variational lower bound
"""

import numpy as np
import pytest

from hetvar.core.engine import fit_vb
from hetvar.core.lower_bound import elbo, elbo_terms, variance_exponent
from hetvar.core.models import DesignData, PriorSpec, SolverConfig, VariationalFit
from hetvar.exceptions import DimensionError, ValidationError
from hetvar.oracles.evidence import mc_elbo_oracle, mc_term_estimates


def prior_as_fit(prior):
    return VariationalFit(prior.mu_beta0, prior.Sigma_beta0, prior.mu_alpha0, prior.Sigma_alpha0)


class TestElbo:
    """Test elbo and elbo_terms"""

    def test_no_data_and_q_equal_prior(self):
        """With n = 0 the bound is minus KL(q || prior), zero when q is the prior"""
        empty = DesignData(
            y=np.zeros(0), X=np.zeros((0, 2)), Z=np.zeros((0, 2)),
            column_names_mean=["a", "b"], column_names_var=["c", "d"],
        )
        prior = PriorSpec(
            mu_beta0=np.array([0.5, -1.0]),
            Sigma_beta0=np.array([[2.0, 0.3], [0.3, 1.0]]),
            mu_alpha0=np.zeros(2),
            Sigma_alpha0=np.diag([4.0, 0.5]),
        )
        assert elbo(empty, prior, prior_as_fit(prior)) == pytest.approx(0.0, abs=1e-10)

    def test_no_data_is_negative_kl(self):
        empty = DesignData(
            y=np.zeros(0), X=np.zeros((0, 1)), Z=np.zeros((0, 1)),
            column_names_mean=["a"], column_names_var=["b"],
        )
        prior = PriorSpec.isotropic_prior(1, 1, sigma2_beta=1.0, sigma2_alpha=1.0)
        fit = VariationalFit(np.array([1.0]), np.array([[0.5]]), np.array([0.0]), np.array([[1.0]]))
        # KL(N(1, 0.5) || N(0, 1)) = (0.5 + 1 - 1 - log 0.5) / 2
        expected = -0.5 * (0.5 + 1.0 - 1.0 - np.log(0.5))
        assert elbo(empty, prior, fit) == pytest.approx(expected, abs=1e-12)

    def test_terms_sum_to_total(self, hetero_data, hetero_prior):
        fit, _ = fit_vb(hetero_data, hetero_prior)
        terms = elbo_terms(hetero_data, hetero_prior, fit)
        assert terms.total == pytest.approx(elbo(hetero_data, hetero_prior, fit), abs=1e-12)

    def test_agrees_with_monte_carlo(self, hetero_data, hetero_prior):
        fit, _ = fit_vb(hetero_data, hetero_prior)
        estimate, stderr = mc_elbo_oracle(hetero_data, hetero_prior, fit, n_samples=50_000, seed=1)
        assert abs(elbo(hetero_data, hetero_prior, fit) - estimate) <= 4.0 * stderr + 1e-8

    def test_each_term_agrees_with_monte_carlo(self, instance_factory):
        data = instance_factory(21, n=40)
        prior = PriorSpec.isotropic_prior(data.p, data.q, sigma2_beta=2.0, sigma2_alpha=1.5)
        rng = np.random.Generator(np.random.Philox(4))
        A = 0.1 * rng.standard_normal((3, 3))
        fit = VariationalFit(
            rng.standard_normal(3), A @ A.T + 0.05 * np.eye(3),
            0.3 * rng.standard_normal(3), 0.02 * np.eye(3),
        )
        terms = elbo_terms(data, prior, fit)
        estimates = mc_term_estimates(data, prior, fit, n_samples=50_000, seed=2)
        for name in ("t1", "t2", "t3"):
            value, stderr = estimates[name]
            assert abs(getattr(terms, name) - value) <= 4.0 * stderr + 1e-8, name

    def test_dimension_mismatch(self, hetero_data):
        prior = PriorSpec.isotropic_prior(2, hetero_data.q)
        with pytest.raises(DimensionError):
            elbo(hetero_data, prior, prior_as_fit(prior))

    def test_non_spd_covariance(self, hetero_data, hetero_prior):
        fit = VariationalFit(np.zeros(3), -np.eye(3), np.zeros(3), np.eye(3))
        with pytest.raises(ValidationError):
            elbo(hetero_data, hetero_prior, fit)

    def test_deterministic(self, hetero_data, hetero_prior):
        fit, _ = fit_vb(hetero_data, hetero_prior)
        assert elbo(hetero_data, hetero_prior, fit) == elbo(hetero_data, hetero_prior, fit)


class TestVarianceExponent:
    """Test variance_exponent"""

    def test_clipped(self):
        Z = np.array([[1.0], [1.0]])
        e = variance_exponent(Z, np.array([100.0]), np.array([[1e-6]]), clip=30.0)
        np.testing.assert_array_equal(e, [30.0, 30.0])

    def test_value(self):
        Z = np.array([[1.0, 2.0]])
        Sigma = np.array([[0.5, 0.1], [0.1, 0.2]])
        e = variance_exponent(Z, np.array([0.3, -0.1]), Sigma)
        expected = 0.3 - 0.2 - 0.5 * (0.5 + 4 * 0.1 + 4 * 0.2)
        assert e[0] == pytest.approx(expected)

    def test_config_clip_used(self, hetero_data, hetero_prior):
        """A tighter clip changes the bound only when exponents reach it"""
        fit, _ = fit_vb(hetero_data, hetero_prior)
        loose = elbo(hetero_data, hetero_prior, fit, SolverConfig(exponent_clip=30.0))
        tight = elbo(hetero_data, hetero_prior, fit, SolverConfig(exponent_clip=1e-3))
        assert loose != tight
