# tests/test_core/test_engine.py
"""
Test the coordinate-ascent solver
"""

import numpy as np
import pytest

from hetvar.core.engine import (
    fit_vb,
    fitted_prior,
    gamma_glm_derivatives,
    gamma_glm_log_density,
    init_fit,
    log_hyperprior,
    newton_gamma_glm_mode,
    predict,
    pseudo_responses,
    update_alpha,
    update_beta,
    update_hyper,
)
from hetvar.core.lower_bound import elbo
from hetvar.core.models import PriorSpec, SolverConfig, VariationalFit
from hetvar.exceptions import ConfigurationError, ValidationError
from hetvar.oracles.numeric import finite_diff_grad, grid_max_1d


class TestFitVb:
    """Test fit_vb"""

    def test_trace_monotone_and_converged(self, hetero_data, hetero_prior):
        fit, trace = fit_vb(hetero_data, hetero_prior)
        assert fit.converged
        assert trace.is_monotone
        assert len(trace.elbo_per_iteration) == fit.iterations + 1
        assert len(trace.alpha_update_accepted) == fit.iterations
        assert trace.hyper_values is None

    def test_reported_bound_matches_factors(self, hetero_data, hetero_prior):
        fit, _ = fit_vb(hetero_data, hetero_prior)
        assert fit.elbo == pytest.approx(elbo(hetero_data, hetero_prior, fit), rel=1e-12)
        assert fit.elbo >= elbo(hetero_data, hetero_prior, init_fit(hetero_data, hetero_prior))

    def test_mean_factor_is_stationary(self, hetero_data, hetero_prior):
        fit, _ = fit_vb(hetero_data, hetero_prior)

        def bound(mu):
            return elbo(hetero_data, hetero_prior, fit.with_beta(mu, fit.Sigma_beta_q))

        grad = finite_diff_grad(bound, fit.mu_beta_q, step=1e-4)
        assert np.max(np.abs(grad)) <= 1e-5

    def test_reproducible(self, hetero_data, hetero_prior):
        first, _ = fit_vb(hetero_data, hetero_prior)
        second, _ = fit_vb(hetero_data, hetero_prior)
        np.testing.assert_array_equal(first.mu_beta_q, second.mu_beta_q)
        np.testing.assert_array_equal(first.Sigma_alpha_q, second.Sigma_alpha_q)
        assert first.elbo == second.elbo

    def test_every_accepted_variance_update_is_stationary(self, hetero_data, hetero_prior):
        _, trace = fit_vb(hetero_data, hetero_prior)
        assert len(trace.newton_iterations) == len(trace.alpha_update_accepted)
        assert len(trace.newton_gradients) == sum(trace.alpha_update_accepted)
        assert trace.newton_gradients
        assert max(trace.newton_gradients) <= 1e-8

    def test_recovers_coefficients(self, instance_factory):
        data = instance_factory(3, n=2000)
        prior = PriorSpec.isotropic_prior(data.p, data.q)
        fit, _ = fit_vb(data, prior)
        ols = np.linalg.lstsq(data.X, data.y, rcond=None)[0]
        np.testing.assert_allclose(fit.mu_beta_q, ols, atol=0.1)

    def test_iteration_cap_reports_non_convergence(self, hetero_data, hetero_prior):
        config = SolverConfig(max_outer_iters=1, elbo_tol=1e-300)
        fit, trace = fit_vb(hetero_data, hetero_prior, config)
        assert not fit.converged
        assert fit.iterations == 1
        assert len(trace.elbo_per_iteration) == 2

    def test_more_columns_than_rows(self, instance_factory):
        data = instance_factory(5, n=5, p=6, q=6)
        prior = PriorSpec.isotropic_prior(6, 6, sigma2_beta=10.0, sigma2_alpha=10.0)
        start = init_fit(data, prior)
        assert np.all(np.isfinite(start.mu_beta_q))
        assert np.all(np.isfinite(start.mu_alpha_q))
        fit, trace = fit_vb(data, prior)
        assert np.isfinite(fit.elbo)
        assert trace.is_monotone

    def test_homoscedastic_needs_intercept_only_variance(self, hetero_data, hetero_prior):
        with pytest.raises(ConfigurationError):
            fit_vb(hetero_data, hetero_prior, SolverConfig(homoscedastic=True))

    def test_explicit_start(self, hetero_data, hetero_prior):
        start = init_fit(hetero_data, hetero_prior)
        fit, trace = fit_vb(hetero_data, hetero_prior, init=start)
        assert trace.elbo_per_iteration[0] == pytest.approx(elbo(hetero_data, hetero_prior, start))
        assert fit.converged


class TestShrinkage:
    """Test the inverse-gamma hyperparameter updates"""

    def test_hyper_values_traced(self, hetero_data):
        prior = PriorSpec.isotropic_prior(hetero_data.p, hetero_data.q, shrink=True)
        fit, trace = fit_vb(hetero_data, prior)
        assert trace.hyper_values is not None
        assert len(trace.hyper_values) == fit.iterations
        assert all(b > 0 and a > 0 for b, a in trace.hyper_values)
        assert trace.is_monotone
        # the vague starting variances shrink towards the fitted coefficients
        assert trace.hyper_values[-1][0] < 10000.0

    def test_update_formula(self):
        prior = PriorSpec.isotropic_prior(2, 1, shrink=True, a=1.0, b=2.0)
        fit = VariationalFit(np.array([1.0, 2.0]), np.eye(2), np.array([3.0]), np.array([[0.5]]))
        sigma2_beta, sigma2_alpha = update_hyper(fit, prior)
        assert sigma2_beta == pytest.approx((2.0 + 0.5 * 5.0 + 0.5 * 2.0) / (1.0 + 1.0 + 1.0))
        assert sigma2_alpha == pytest.approx((2.0 + 0.5 * 9.0 + 0.5 * 0.5) / (1.0 + 1.0 + 0.5))

    def test_needs_shrink(self, hetero_prior):
        fit = VariationalFit(np.zeros(3), np.eye(3), np.zeros(3), np.eye(3))
        with pytest.raises(ValidationError):
            update_hyper(fit, hetero_prior)

    def test_log_hyperprior(self, hetero_prior):
        assert log_hyperprior(hetero_prior) == 0.0
        shrunk = PriorSpec.isotropic_prior(1, 1, sigma2_beta=1.0, sigma2_alpha=1.0, shrink=True, a=1.0, b=1.0)
        # log IG(1; 1, 1) = -1 for each variance
        assert log_hyperprior(shrunk) == pytest.approx(-2.0)

    def test_fitted_prior(self, hetero_data):
        prior = PriorSpec.isotropic_prior(hetero_data.p, hetero_data.q, shrink=True)
        _, trace = fit_vb(hetero_data, prior)
        final = fitted_prior(prior, trace)
        assert final.isotropic.sigma2_beta == trace.hyper_values[-1][0]
        assert fitted_prior(prior, type(trace)()) is prior


class TestBlockUpdates:
    """Test update_beta, update_alpha and the Newton mode search"""

    def test_beta_update_never_lowers_bound(self, hetero_data, hetero_prior):
        start = init_fit(hetero_data, hetero_prior)
        shifted = start.with_beta(start.mu_beta_q + 0.5, start.Sigma_beta_q)
        mu, Sigma = update_beta(hetero_data, hetero_prior, shifted)
        updated = shifted.with_beta(mu, Sigma)
        assert elbo(hetero_data, hetero_prior, updated) >= elbo(hetero_data, hetero_prior, shifted)

    def test_alpha_update_guard(self, hetero_data, hetero_prior):
        start = init_fit(hetero_data, hetero_prior)
        current = elbo(hetero_data, hetero_prior, start)
        update = update_alpha(hetero_data, hetero_prior, start, current_elbo=current)
        candidate = start.with_alpha(update.mu_alpha_q, update.Sigma_alpha_q)
        if update.accepted:
            assert elbo(hetero_data, hetero_prior, candidate) > current
        else:
            np.testing.assert_array_equal(update.mu_alpha_q, start.mu_alpha_q)

    def test_alpha_update_rejected_at_optimum(self, hetero_data, hetero_prior):
        """An inflated current value forces the guard to keep the old factor"""
        start = init_fit(hetero_data, hetero_prior)
        update = update_alpha(hetero_data, hetero_prior, start, current_elbo=np.inf)
        assert not update.accepted
        np.testing.assert_array_equal(update.Sigma_alpha_q, start.Sigma_alpha_q)

    def test_newton_gradient_below_tolerance(self, hetero_data, hetero_prior):
        fit = init_fit(hetero_data, hetero_prior)
        pseudo = pseudo_responses(hetero_data, fit)
        config = SolverConfig()
        mode, info = newton_gamma_glm_mode(
            hetero_data.Z, pseudo, hetero_prior.mu_alpha0, hetero_prior.alpha_precision,
            np.zeros(hetero_data.q), config,
        )
        grad, _ = gamma_glm_derivatives(hetero_data.Z, pseudo.w, mode, hetero_prior.mu_alpha0,
                                        hetero_prior.alpha_precision)
        assert info.converged
        assert np.max(np.abs(grad)) <= 1e-8
        assert info.iterations <= config.newton_max_iters

    def test_newton_rejects_non_positive_responses(self, hetero_data, hetero_prior):
        w = np.zeros(hetero_data.n)
        with pytest.raises(ValidationError):
            newton_gamma_glm_mode(hetero_data.Z, w, hetero_prior.mu_alpha0,
                                  hetero_prior.alpha_precision, np.zeros(hetero_data.q))

    def test_scalar_newton_mode_matches_grid(self):
        rng = np.random.Generator(np.random.Philox(7))
        n = 40
        Z = rng.standard_normal((n, 1))
        w = rng.gamma(2.0, 1.0, n)
        prior_mu, prior_precision = np.zeros(1), np.array([[0.01]])
        mode, info = newton_gamma_glm_mode(Z, w, prior_mu, prior_precision, np.zeros(1))
        x, _ = grid_max_1d(
            lambda a: gamma_glm_log_density(Z, w, np.array([a]), prior_mu, prior_precision),
            (mode[0] - 1.0, mode[0] + 1.0),
        )
        assert info.converged
        assert x == pytest.approx(mode[0], abs=1e-6)

    @pytest.mark.parametrize("c", [0.2, 3.7, 50.0])
    def test_constant_responses_give_log_mode(self, c):
        n = 30
        Z = np.ones((n, 1))
        mode, info = newton_gamma_glm_mode(Z, np.full(n, c), np.zeros(1), np.array([[1e-10]]), np.zeros(1))
        assert info.converged
        assert mode[0] == pytest.approx(np.log(c), abs=1e-6)

    def test_pseudo_responses_positive(self, hetero_data, hetero_prior):
        pseudo = pseudo_responses(hetero_data, init_fit(hetero_data, hetero_prior))
        assert np.all(pseudo.w > 0) and np.all(pseudo.v > 0)


class TestPredict:
    """Test predict"""

    def test_plug_in_and_integrated(self, hetero_data, hetero_prior):
        fit, _ = fit_vb(hetero_data, hetero_prior)
        mean, variance = predict(fit, hetero_data)
        _, integrated = predict(fit, hetero_data, integrated=True)
        np.testing.assert_allclose(mean, hetero_data.X @ fit.mu_beta_q)
        np.testing.assert_allclose(variance, np.exp(hetero_data.Z @ fit.mu_alpha_q))
        assert np.all(integrated > variance)

    def test_dimension_check(self, hetero_data):
        fit = VariationalFit(np.zeros(2), np.eye(2), np.zeros(3), np.eye(3))
        with pytest.raises(ValidationError):
            predict(fit, hetero_data)
