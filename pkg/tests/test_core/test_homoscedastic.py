# tests/test_core/test_homoscedastic.py
"""
Test the homoscedastic fast path
"""

import numpy as np
import pytest

from hetvar.core.data import standardize
from hetvar.core.engine import fit_vb
from hetvar.core.homoscedastic import (
    rank_mean_add_homo,
    residual_correlations,
    scalar_log_density,
    update_alpha_scalar,
)
from hetvar.core.models import (
    DesignData,
    ModelIndex,
    ModelPriorPolicy,
    PriorSpec,
    ScalingInfo,
    SolverConfig,
)
from hetvar.exceptions import ValidationError
from hetvar.oracles.numeric import grid_max_1d
from hetvar.selection.ranking import SearchState, rank_mean_add_all
from hetvar.selection.search import ModelFitter


def intercept_only_variance(data):
    """Same mean design with the variance design cut to its intercept"""
    return DesignData(
        y=data.y, X=data.X, Z=np.ones((data.n, 1)),
        column_names_mean=data.column_names_mean, column_names_var=["(Intercept)"],
        intercept_mean_col=data.intercept_mean_col, intercept_var_col=0,
    )


def homo_state(data, scaling, config=None):
    config = config or SolverConfig(homoscedastic=True)
    prior = PriorSpec.isotropic_prior(data.p, data.q)
    index = ModelIndex.intercepts_only(data)
    fit = ModelFitter(data, prior, config).fit(index)
    return SearchState(data=data, prior=prior, index=index, fit=fit,
                       policy=ModelPriorPolicy.ebic(), config=config, scaling=scaling)


class TestUpdateAlphaScalar:
    """Test update_alpha_scalar"""

    def test_refined_mode_is_stationary(self):
        v, n, prior_var = 37.0, 50, 100.0
        factor = update_alpha_scalar(v, prior_var, n)
        grad = -0.5 * n + 0.5 * v * np.exp(-factor.mu_alpha_q) - factor.mu_alpha_q / prior_var
        assert abs(grad) <= 1e-8
        assert factor.converged

    def test_refined_mode_matches_grid(self):
        v, n, prior_var = 220.0, 80, 4.0
        factor = update_alpha_scalar(v, prior_var, n)
        x, _ = grid_max_1d(lambda a: scalar_log_density(a, v, n, prior_var), (-5.0, 5.0))
        assert factor.mu_alpha_q == pytest.approx(x, abs=1e-6)

    def test_closed_form_without_refinement(self):
        v, n, prior_var = 37.0, 50, 100.0
        factor = update_alpha_scalar(v, prior_var, n, refine=False)
        assert factor.mu_alpha_q == pytest.approx((v - n) / (v + 2.0 / prior_var))
        assert factor.newton_iterations == 0
        assert factor.var_alpha_q == pytest.approx(
            1.0 / (0.5 * v * np.exp(-factor.mu_alpha_q) + 1.0 / prior_var)
        )

    def test_closed_form_is_exact_when_v_equals_n(self):
        """At v = n the first-order value 0 is already the mode"""
        factor = update_alpha_scalar(50.0, 1e6, 50, refine=False)
        assert factor.mu_alpha_q == pytest.approx(0.0)

    @pytest.mark.parametrize("v, prior_var, n", [(0.0, 1.0, 5), (1.0, 0.0, 5), (1.0, 1.0, 0)])
    def test_invalid_inputs(self, v, prior_var, n):
        with pytest.raises(ValidationError):
            update_alpha_scalar(v, prior_var, n)


class TestHomoscedasticFit:
    """Test fit_vb with a scalar log-variance"""

    def test_matches_general_solver(self, instance_factory):
        data = intercept_only_variance(instance_factory(13, n=120))
        prior = PriorSpec.isotropic_prior(data.p, 1)
        fast, _ = fit_vb(data, prior, SolverConfig(homoscedastic=True))
        general, _ = fit_vb(data, prior, SolverConfig())
        assert fast.converged and general.converged
        np.testing.assert_allclose(fast.mu_beta_q, general.mu_beta_q, atol=1e-5)
        np.testing.assert_allclose(fast.mu_alpha_q, general.mu_alpha_q, atol=1e-5)
        np.testing.assert_allclose(fast.Sigma_alpha_q, general.Sigma_alpha_q, rtol=1e-5)
        assert fast.elbo == pytest.approx(general.elbo, abs=1e-5)


class TestRankMeanAddHomo:
    """Test homoscedastic mean-add ranking"""

    def test_order_follows_residual_correlation(self, planted_data):
        data = intercept_only_variance(planted_data)
        scaled, scaling = standardize(data, "unit_ss")
        state = homo_state(scaled, scaling)
        scores = rank_mean_add_homo(state)
        by_score = [s.candidate for s in sorted(scores, key=lambda s: -s.total)]
        by_stat = [s.candidate for s in sorted(scores, key=lambda s: -s.statistic)]
        assert by_score == by_stat
        np.testing.assert_allclose(
            [s.statistic for s in scores],
            residual_correlations(scaled, state.residual, [s.candidate for s in scores]),
        )

    def test_scores_equal_general_scores(self, planted_data):
        data = intercept_only_variance(planted_data)
        scaled, scaling = standardize(data, "unit_ss")
        state = homo_state(scaled, scaling)
        general = {s.candidate: s.total for s in rank_mean_add_all(state)}
        for score in rank_mean_add_homo(state):
            assert score.total == pytest.approx(general[score.candidate], rel=1e-12)

    def test_requires_unit_scaling(self, planted_data):
        data = intercept_only_variance(planted_data)
        state = homo_state(data, ScalingInfo.identity(data))
        with pytest.raises(ValidationError):
            rank_mean_add_homo(state)

    def test_requires_intercept_only_variance(self, planted_data):
        scaled, scaling = standardize(planted_data, "unit_ss")
        config = SolverConfig()
        prior = PriorSpec.isotropic_prior(scaled.p, scaled.q)
        index = ModelIndex.intercepts_only(scaled).add_var(1)
        fit = ModelFitter(scaled, prior, config).fit(index)
        state = SearchState(data=scaled, prior=prior, index=index, fit=fit,
                            policy=ModelPriorPolicy.ebic(), config=config, scaling=scaling)
        with pytest.raises(ValidationError):
            rank_mean_add_homo(state)
