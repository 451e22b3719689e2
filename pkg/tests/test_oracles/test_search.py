# tests/test_oracles/test_search.py
"""
Test exhaustive model enumeration
"""

import pytest

from hetvar.core.models import DesignData, ModelPriorPolicy, PriorSpec, SolverConfig
from hetvar.exceptions import OracleError
from hetvar.oracles.search import MAX_UNIVERSE, enumerate_models, exhaustive_search


class TestEnumerateModels:
    """Test enumerate_models"""

    def test_counts(self, instance_factory):
        data = instance_factory(0, p=3, q=3)
        assert len(enumerate_models(data)) == 16
        assert len(enumerate_models(data, restricted=True)) == 9
        assert len(enumerate_models(data, homoscedastic=True)) == 4

    def test_intercepts_always_present(self, instance_factory):
        data = instance_factory(0, p=3, q=3)
        for index in enumerate_models(data):
            assert 0 in index.C and 0 in index.V

    def test_needs_intercepts(self, hetero_data):
        data = DesignData(y=hetero_data.y, X=hetero_data.X, Z=hetero_data.Z,
                          column_names_mean=hetero_data.column_names_mean,
                          column_names_var=hetero_data.column_names_var)
        with pytest.raises(OracleError):
            enumerate_models(data)


class TestExhaustiveSearch:
    """Test exhaustive_search"""

    def test_finds_planted_model(self, planted_factory):
        data = planted_factory(11, n=200)
        small = data.subset([0, 1, 2, 3], [0, 1, 2])
        prior = PriorSpec.isotropic_prior(small.p, small.q)
        best, score = exhaustive_search(small, prior, ModelPriorPolicy.ebic())
        assert {1, 3} <= set(best.mean_predictors)
        assert 1 in best.var_predictors

    def test_universe_cap(self, planted_factory):
        data = planted_factory(1, n=50)
        prior = PriorSpec.isotropic_prior(data.p, data.q)
        with pytest.raises(OracleError):
            exhaustive_search(data, prior, ModelPriorPolicy.ebic(), max_universe=6)
        with pytest.raises(OracleError):
            exhaustive_search(data, prior, ModelPriorPolicy.ebic(), max_universe=MAX_UNIVERSE + 1)

    def test_restricted_needs_identical_columns(self, instance_factory):
        data = instance_factory(4, p=3, q=3, shared=False)
        prior = PriorSpec.isotropic_prior(data.p, data.q)
        with pytest.raises(OracleError):
            exhaustive_search(data, prior, ModelPriorPolicy.ebic(), restricted=True)

    def test_homoscedastic_universe(self, instance_factory):
        data = instance_factory(6, n=50, p=3, q=3)
        prior = PriorSpec.isotropic_prior(data.p, data.q)
        best, _ = exhaustive_search(data, prior, ModelPriorPolicy.uniform(),
                                    config=SolverConfig(homoscedastic=True))
        assert best.V == (0,)
