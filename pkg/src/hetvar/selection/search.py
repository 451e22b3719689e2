"""
Greedy forward and forward-backward model search
"""

from dataclasses import replace
from typing import Dict, Optional, Tuple

from ..core.data import standardize, unstandardize_fit
from ..core.engine import fit_vb
from ..core.models import (
    DesignData,
    Direction,
    ModelIndex,
    ModelPriorPolicy,
    PathStep,
    PriorSpec,
    ScalingInfo,
    SelectionConfig,
    SelectionResult,
    SolverConfig,
    StandardizePolicy,
    VariationalFit,
)
from ..exceptions import ConfigurationError
from ..utils.logger import get_logger
from .priors import model_log_prior
from .ranking import SearchState, rank

logger = get_logger(__name__)


class ModelFitter:
    """Exact refits of submodels, cached by their (C, V) key"""

    def __init__(self, data: DesignData, prior: PriorSpec, config: SolverConfig):
        self.data = data
        self.prior = prior
        self.config = config
        self._cache: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], VariationalFit] = {}

    @property
    def refits(self) -> int:
        return len(self._cache)

    def fit(self, index: ModelIndex) -> VariationalFit:
        """Fit the submodel from its own least-squares start"""
        key = index.key
        if key not in self._cache:
            sub_data = self.data.subset(index.C, index.V)
            sub_prior = self.prior.subset(index.C, index.V)
            fit, _ = fit_vb(sub_data, sub_prior, self.config)
            if not fit.converged:
                logger.warning(f"Refit of model C={index.C}, V={index.V} did not converge")
            self._cache[key] = fit
        return self._cache[key]


def selection_prior(data: DesignData, config: SelectionConfig) -> PriorSpec:
    """Zero-mean isotropic prior over the full candidate universe"""
    return PriorSpec.isotropic_prior(data.p, data.q, config.sigma2_beta, config.sigma2_alpha)


class GreedySearch:
    """
    State machine behind fVAR and fbVAR.

    Candidates are ranked by one-step scores against the frozen current fit;
    a move is accepted only if the exact refitted bound plus log model prior
    beats the incumbent.
    """

    def __init__(self, data: DesignData, prior: PriorSpec, policy: ModelPriorPolicy,
                 config: SelectionConfig, scaling: Optional[ScalingInfo] = None,
                 start: Optional[ModelIndex] = None):
        if config.restricted and data.column_names_mean != data.column_names_var:
            raise ConfigurationError("Restricted search needs identical mean and variance columns")
        if data.intercept_mean_col is None or data.intercept_var_col is None:
            raise ConfigurationError("Model search needs intercepts in both designs")
        if prior.shrink:
            logger.warning("Hyperparameter shrinkage is not used during model search; fixed prior variances apply")
            prior = PriorSpec(prior.mu_beta0, prior.Sigma_beta0, prior.mu_alpha0, prior.Sigma_alpha0)

        self.data = data
        self.prior = prior
        self.policy = policy
        self.config = config
        self.scaling = scaling or ScalingInfo.identity(data)
        self.fitter = ModelFitter(data, prior, config.solver)

        self.index = start or ModelIndex.intercepts_only(data)
        if config.homoscedastic and self.index.var_predictors:
            raise ConfigurationError("Homoscedastic search keeps the variance model at its intercept")
        self.fit = self.fitter.fit(self.index)
        self.log_prior = model_log_prior(self.index, policy)
        self.moves = 0
        self.iterations = 0
        self.stopped_reason = "not_started"
        self.path = [self._path_step("init", None, None)]

    @property
    def total(self) -> float:
        return self.fit.elbo + self.log_prior

    def state(self) -> SearchState:
        return SearchState(
            data=self.data,
            prior=self.prior,
            index=self.index,
            fit=self.fit,
            policy=self.policy,
            config=self.config.solver,
            scaling=self.scaling,
            restricted=self.config.restricted,
        )

    def _path_step(self, action: str, predictor: Optional[int], score: Optional[float]) -> PathStep:
        original = unstandardize_fit(self.fit, self.scaling, self.index.C, self.index.V)
        names_mean = self.data.column_names_mean
        names_var = self.data.column_names_var
        if predictor is None:
            name = ""
        elif action.endswith("mean"):
            name = names_mean[predictor]
        else:
            name = names_var[predictor]
        return PathStep(
            step=self.moves,
            action=action,
            predictor=predictor,
            name=name,
            one_step_score=score,
            elbo=self.fit.elbo,
            log_prior=self.log_prior,
            coefficients_mean={names_mean[j]: float(original.mu_beta_q[k]) for k, j in enumerate(self.index.C)},
            coefficients_var={names_var[j]: float(original.mu_alpha_q[k]) for k, j in enumerate(self.index.V)},
        )

    def _propose(self, direction: Direction, j: int) -> ModelIndex:
        if direction is Direction.ADD_MEAN:
            return self.index.add_mean(j)
        if direction is Direction.ADD_VAR:
            return self.index.add_var(j)
        if direction is Direction.DROP_MEAN:
            return self.index.drop_mean(j, couple_variance=self.config.restricted)
        return self.index.drop_var(j)

    def attempt(self, direction: Direction) -> bool:
        """Try the best-ranked move(s) of one type; True if one was accepted"""
        if self.moves >= self.config.max_steps:
            return False
        scores = rank(self.state(), direction, limit=self.config.try_next_k)
        for score in scores:
            proposed = self._propose(direction, score.candidate)
            fit = self.fitter.fit(proposed)
            log_prior = model_log_prior(proposed, self.policy)
            if fit.elbo + log_prior > self.total:
                self.index, self.fit, self.log_prior = proposed, fit, log_prior
                self.moves += 1
                self.path.append(self._path_step(direction.value, score.candidate, score.total))
                logger.info(
                    f"Step {self.moves}: {direction.value} {self.path[-1].name} "
                    f"(score {self.total:.4f}, one-step {score.total:.4f})"
                )
                return True
            logger.debug(
                f"Rejected {direction.value} of column {score.candidate}: "
                f"{fit.elbo + log_prior:.6f} <= {self.total:.6f}"
            )
        return False

    def _run(self, directions) -> str:
        while True:
            self.iterations += 1
            changed = False
            for direction in directions:
                changed = self.attempt(direction) or changed
            if not changed:
                return "no_improvement"
            if self.moves >= self.config.max_steps:
                return "max_steps"

    def forward(self) -> str:
        directions = [Direction.ADD_MEAN]
        if not self.config.homoscedastic:
            directions.append(Direction.ADD_VAR)
        self.stopped_reason = self._run(directions)
        return self.stopped_reason

    def backward(self) -> str:
        directions = [Direction.DROP_MEAN]
        if not self.config.homoscedastic:
            directions.append(Direction.DROP_VAR)
        self.stopped_reason = self._run(directions)
        return self.stopped_reason

    def result(self) -> SelectionResult:
        return SelectionResult(
            index=self.index,
            fit=self.fit,
            path=list(self.path),
            stopped_reason=self.stopped_reason,
            prior=self.prior.subset(self.index.C, self.index.V),
            iterations=self.iterations,
            scaling=self.scaling,
        )


def forward_var(data: DesignData, prior: PriorSpec, policy: ModelPriorPolicy,
                config: Optional[SelectionConfig] = None, scaling: Optional[ScalingInfo] = None,
                start: Optional[ModelIndex] = None) -> SelectionResult:
    """Forward-only greedy search"""
    search = GreedySearch(data, prior, policy, config or SelectionConfig(policy=policy), scaling, start)
    search.forward()
    logger.info(
        f"Forward search stopped ({search.stopped_reason}) after {search.iterations} iterations: "
        f"{len(search.index.mean_predictors)} mean, {len(search.index.var_predictors)} variance predictors"
    )
    return search.result()


def forward_backward_var(data: DesignData, prior: PriorSpec, policy: ModelPriorPolicy,
                         config: Optional[SelectionConfig] = None, restricted: Optional[bool] = None,
                         scaling: Optional[ScalingInfo] = None,
                         start: Optional[ModelIndex] = None) -> SelectionResult:
    """Forward phase followed by backward elimination"""
    config = config or SelectionConfig(policy=policy)
    if restricted is not None and restricted != config.restricted:
        config = replace(config, restricted=restricted)
    search = GreedySearch(data, prior, policy, config, scaling, start)
    search.forward()
    forward_reason = search.stopped_reason
    if forward_reason != "max_steps":
        search.backward()
    logger.info(
        f"Forward-backward search stopped ({search.stopped_reason}) after {search.iterations} iterations: "
        f"{len(search.index.mean_predictors)} mean, {len(search.index.var_predictors)} variance predictors"
    )
    return search.result()


def select_model(data: DesignData, config: Optional[SelectionConfig] = None) -> Tuple[SelectionResult, DesignData]:
    """
    Standardize, build the isotropic selection prior and run the configured
    search. Returns the result and the standardized data it was computed on.
    """
    config = config or SelectionConfig()
    scaled, scaling = standardize(data, config.standardize)
    if config.standardize is StandardizePolicy.NONE:
        logger.debug("Selecting on unstandardized columns")
    prior = selection_prior(scaled, config)
    if config.method == "fvar":
        result = forward_var(scaled, prior, config.policy, config, scaling)
    else:
        result = forward_backward_var(scaled, prior, config.policy, config, scaling=scaling)
    return result, scaled
