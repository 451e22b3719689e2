"""
Data models and types for hetvar
"""

from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cached_property
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from scipy import linalg

from ..exceptions import ConfigurationError, DataError, DimensionError, ValidationError
from ..utils.validators import (
    validate_count,
    validate_positive,
    validate_probabilities,
    validate_probability,
)


def _frozen_array(values, ndim: int, name: str) -> np.ndarray:
    """Copy into a read-only float array of the given rank"""
    array = np.array(values, dtype=float, copy=True)
    if ndim == 1:
        array = array.reshape(-1)
    if array.ndim != ndim:
        raise DimensionError(f"{name} must be {ndim}-dimensional, got shape {array.shape}")
    array.setflags(write=False)
    return array


class StandardizePolicy(str, Enum):
    """Column scaling policies"""
    NONE = "none"
    UNIT_SS = "unit_ss"    # sum_i x_ij^2 = n, no centering
    ZSCORE = "zscore"      # centered, population sd 1 (also sum of squares n)


class PriorKind(str, Enum):
    """Model prior families"""
    UNIFORM = "uniform"
    BERNOULLI = "bernoulli"
    EBIC = "ebic"


class Direction(str, Enum):
    """One-step move directions"""
    ADD_MEAN = "add_mean"
    ADD_VAR = "add_var"
    DROP_MEAN = "drop_mean"
    DROP_VAR = "drop_var"

    @property
    def model(self) -> str:
        return "mean" if self in (Direction.ADD_MEAN, Direction.DROP_MEAN) else "var"


@dataclass(frozen=True, eq=False)
class DesignData:
    """Response plus mean and variance designs"""
    y: np.ndarray
    X: np.ndarray
    Z: np.ndarray
    column_names_mean: Tuple[str, ...]
    column_names_var: Tuple[str, ...]
    intercept_mean_col: Optional[int] = None
    intercept_var_col: Optional[int] = None
    response_name: str = "y"

    def __post_init__(self):
        y = _frozen_array(self.y, 1, "y")
        X = _frozen_array(self.X, 2, "X")
        Z = _frozen_array(self.Z, 2, "Z")
        n = y.shape[0]

        if X.shape[0] != n or Z.shape[0] != n:
            raise DimensionError(
                f"Row counts disagree: y has {n}, X has {X.shape[0]}, Z has {Z.shape[0]}"
            )
        if X.shape[1] < 1 or Z.shape[1] < 1:
            raise DimensionError("Mean and variance designs need at least one column each")

        for name, array in (("y", y), ("X", X), ("Z", Z)):
            if not np.all(np.isfinite(array)):
                raise DataError(f"{name} contains non-finite entries")

        names_mean = tuple(str(c) for c in self.column_names_mean)
        names_var = tuple(str(c) for c in self.column_names_var)
        if len(names_mean) != X.shape[1]:
            raise DimensionError(f"Expected {X.shape[1]} mean column names, got {len(names_mean)}")
        if len(names_var) != Z.shape[1]:
            raise DimensionError(f"Expected {Z.shape[1]} variance column names, got {len(names_var)}")
        for label, names in (("mean", names_mean), ("variance", names_var)):
            if len(set(names)) != len(names):
                raise DataError(f"Duplicate {label} column names: {names}")

        for label, col, design in (("mean", self.intercept_mean_col, X),
                                   ("variance", self.intercept_var_col, Z)):
            if col is None:
                continue
            if not 0 <= col < design.shape[1]:
                raise DimensionError(f"Intercept column {col} out of range for {label} design")
            if not np.all(design[:, col] == 1.0):
                raise DataError(f"Flagged {label} intercept column {col} is not constant 1")

        object.__setattr__(self, "y", y)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Z", Z)
        object.__setattr__(self, "column_names_mean", names_mean)
        object.__setattr__(self, "column_names_var", names_var)

    @property
    def n(self) -> int:
        return self.y.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]

    @property
    def q(self) -> int:
        return self.Z.shape[1]

    def subset(self, mean_idx: Sequence[int], var_idx: Sequence[int]) -> "DesignData":
        """Restrict to the given (sorted) mean and variance columns"""
        mean_idx = list(mean_idx)
        var_idx = list(var_idx)
        int_mean = mean_idx.index(self.intercept_mean_col) if self.intercept_mean_col in mean_idx else None
        int_var = var_idx.index(self.intercept_var_col) if self.intercept_var_col in var_idx else None
        return DesignData(
            y=self.y,
            X=self.X[:, mean_idx],
            Z=self.Z[:, var_idx],
            column_names_mean=[self.column_names_mean[j] for j in mean_idx],
            column_names_var=[self.column_names_var[j] for j in var_idx],
            intercept_mean_col=int_mean,
            intercept_var_col=int_var,
            response_name=self.response_name,
        )

    def rows(self, index: Sequence[int]) -> "DesignData":
        """Select observations"""
        index = np.asarray(index, dtype=int)
        return replace(self, y=self.y[index], X=self.X[index], Z=self.Z[index])

    def to_frame(self) -> pd.DataFrame:
        """Flatten into one table (response, mean columns, variance-only columns)"""
        frame = pd.DataFrame(self.X, columns=list(self.column_names_mean))
        for j, name in enumerate(self.column_names_var):
            if name not in frame.columns:
                frame[name] = self.Z[:, j]
        frame.insert(0, self.response_name, self.y)
        return frame


@dataclass(frozen=True, eq=False)
class ScalingInfo:
    """Per-column shift and scale applied to X and Z"""
    policy: StandardizePolicy
    shift_mean: np.ndarray
    scale_mean: np.ndarray
    shift_var: np.ndarray
    scale_var: np.ndarray
    intercept_mean_col: Optional[int] = None
    intercept_var_col: Optional[int] = None

    def __post_init__(self):
        for name in ("shift_mean", "scale_mean", "shift_var", "scale_var"):
            object.__setattr__(self, name, _frozen_array(getattr(self, name), 1, name))
        if np.any(self.scale_mean <= 0) or np.any(self.scale_var <= 0):
            raise ValidationError("Scale factors must be strictly positive")
        for col, shift, scale in ((self.intercept_mean_col, self.shift_mean, self.scale_mean),
                                  (self.intercept_var_col, self.shift_var, self.scale_var)):
            if col is not None and (shift[col] != 0.0 or scale[col] != 1.0):
                raise ValidationError("Intercept columns must keep shift 0 and scale 1")

    @property
    def unit_ss(self) -> bool:
        """Whether every non-intercept column has sum of squares n"""
        return self.policy in (StandardizePolicy.UNIT_SS, StandardizePolicy.ZSCORE)

    @classmethod
    def identity(cls, data: DesignData) -> "ScalingInfo":
        return cls(
            policy=StandardizePolicy.NONE,
            shift_mean=np.zeros(data.p),
            scale_mean=np.ones(data.p),
            shift_var=np.zeros(data.q),
            scale_var=np.ones(data.q),
            intercept_mean_col=data.intercept_mean_col,
            intercept_var_col=data.intercept_var_col,
        )

    def coefficient_transform(self, model: str, active: Sequence[int]) -> np.ndarray:
        """
        Matrix T mapping standardized coefficients of the active columns to
        the original design scale (mu -> T mu, Sigma -> T Sigma T^T).
        """
        if model == "mean":
            shift, scale, intercept = self.shift_mean, self.scale_mean, self.intercept_mean_col
        elif model == "var":
            shift, scale, intercept = self.shift_var, self.scale_var, self.intercept_var_col
        else:
            raise ValidationError(f"Unknown model '{model}'")

        active = list(active)
        k = len(active)
        T = np.zeros((k, k))
        int_pos = active.index(intercept) if intercept in active else None
        for a, j in enumerate(active):
            if j == intercept:
                T[a, a] = 1.0
                continue
            T[a, a] = 1.0 / scale[j]
            if shift[j] != 0.0:
                if int_pos is None:
                    raise ValidationError(
                        "Centered columns can only be mapped back when the intercept is active"
                    )
                T[int_pos, a] = -shift[j] / scale[j]
        return T


@dataclass(frozen=True)
class IsotropicPrior:
    """Scalar prior variances with optional inverse-gamma shrinkage"""
    sigma2_beta: float = 10000.0
    sigma2_alpha: float = 10000.0
    shrink: bool = False
    a: float = 0.01
    b: float = 0.01

    def __post_init__(self):
        validate_positive("sigma2_beta", self.sigma2_beta)
        validate_positive("sigma2_alpha", self.sigma2_alpha)
        validate_positive("a", self.a)
        validate_positive("b", self.b)


@dataclass(frozen=True, eq=False)
class PriorSpec:
    """Gaussian priors on beta and alpha"""
    mu_beta0: np.ndarray
    Sigma_beta0: np.ndarray
    mu_alpha0: np.ndarray
    Sigma_alpha0: np.ndarray
    isotropic: Optional[IsotropicPrior] = None

    def __post_init__(self):
        for name, ndim in (("mu_beta0", 1), ("Sigma_beta0", 2), ("mu_alpha0", 1), ("Sigma_alpha0", 2)):
            object.__setattr__(self, name, _frozen_array(getattr(self, name), ndim, name))

        for label, mu, Sigma in (("beta", self.mu_beta0, self.Sigma_beta0),
                                 ("alpha", self.mu_alpha0, self.Sigma_alpha0)):
            k = mu.shape[0]
            if Sigma.shape != (k, k):
                raise DimensionError(f"Prior covariance for {label} must be {k}x{k}, got {Sigma.shape}")
            if not np.allclose(Sigma, Sigma.T, rtol=1e-12, atol=0.0):
                raise ValidationError(f"Prior covariance for {label} is not symmetric")
            try:
                linalg.cholesky(Sigma, lower=True)
            except linalg.LinAlgError:
                raise ValidationError(f"Prior covariance for {label} is not positive definite")

        iso = self.isotropic
        if iso is not None:
            expected_b = iso.sigma2_beta * np.eye(self.p)
            expected_a = iso.sigma2_alpha * np.eye(self.q)
            if (np.any(self.mu_beta0 != 0) or np.any(self.mu_alpha0 != 0)
                    or not np.array_equal(self.Sigma_beta0, expected_b)
                    or not np.array_equal(self.Sigma_alpha0, expected_a)):
                raise ValidationError(
                    "Isotropic prior record requires zero means and sigma^2 * I covariances"
                )

    @classmethod
    def isotropic_prior(cls, p: int, q: int, sigma2_beta: float = 10000.0,
                        sigma2_alpha: float = 10000.0, shrink: bool = False,
                        a: float = 0.01, b: float = 0.01) -> "PriorSpec":
        """Zero-mean sigma^2 I priors"""
        iso = IsotropicPrior(sigma2_beta, sigma2_alpha, shrink, a, b)
        return cls(
            mu_beta0=np.zeros(p),
            Sigma_beta0=sigma2_beta * np.eye(p),
            mu_alpha0=np.zeros(q),
            Sigma_alpha0=sigma2_alpha * np.eye(q),
            isotropic=iso,
        )

    @property
    def p(self) -> int:
        return self.mu_beta0.shape[0]

    @property
    def q(self) -> int:
        return self.mu_alpha0.shape[0]

    @property
    def shrink(self) -> bool:
        return self.isotropic is not None and self.isotropic.shrink

    @cached_property
    def beta_chol(self) -> np.ndarray:
        return linalg.cholesky(self.Sigma_beta0, lower=True)

    @cached_property
    def alpha_chol(self) -> np.ndarray:
        return linalg.cholesky(self.Sigma_alpha0, lower=True)

    @cached_property
    def beta_precision(self) -> np.ndarray:
        return linalg.cho_solve((self.beta_chol, True), np.eye(self.p))

    @cached_property
    def alpha_precision(self) -> np.ndarray:
        return linalg.cho_solve((self.alpha_chol, True), np.eye(self.q))

    @cached_property
    def beta_logdet(self) -> float:
        return float(2.0 * np.sum(np.log(np.diag(self.beta_chol))))

    @cached_property
    def alpha_logdet(self) -> float:
        return float(2.0 * np.sum(np.log(np.diag(self.alpha_chol))))

    def subset(self, mean_idx: Sequence[int], var_idx: Sequence[int]) -> "PriorSpec":
        """Marginal prior of the given coefficients"""
        mean_idx = list(mean_idx)
        var_idx = list(var_idx)
        return PriorSpec(
            mu_beta0=self.mu_beta0[mean_idx],
            Sigma_beta0=self.Sigma_beta0[np.ix_(mean_idx, mean_idx)],
            mu_alpha0=self.mu_alpha0[var_idx],
            Sigma_alpha0=self.Sigma_alpha0[np.ix_(var_idx, var_idx)],
            isotropic=self.isotropic,
        )

    def with_hyper(self, sigma2_beta: float, sigma2_alpha: float) -> "PriorSpec":
        """Same isotropic prior with new scalar variances"""
        if self.isotropic is None:
            raise ValidationError("Only isotropic priors carry scalar variances")
        iso = replace(self.isotropic, sigma2_beta=sigma2_beta, sigma2_alpha=sigma2_alpha)
        return PriorSpec(
            mu_beta0=self.mu_beta0,
            Sigma_beta0=sigma2_beta * np.eye(self.p),
            mu_alpha0=self.mu_alpha0,
            Sigma_alpha0=sigma2_alpha * np.eye(self.q),
            isotropic=iso,
        )


@dataclass(frozen=True, eq=False)
class VariationalFit:
    """Gaussian variational factors q(beta) q(alpha) and the bound they reach"""
    mu_beta_q: np.ndarray
    Sigma_beta_q: np.ndarray
    mu_alpha_q: np.ndarray
    Sigma_alpha_q: np.ndarray
    elbo: float = float("nan")
    iterations: int = 0
    converged: bool = False

    def __post_init__(self):
        for name, ndim in (("mu_beta_q", 1), ("Sigma_beta_q", 2), ("mu_alpha_q", 1), ("Sigma_alpha_q", 2)):
            object.__setattr__(self, name, _frozen_array(getattr(self, name), ndim, name))
        if self.Sigma_beta_q.shape != (self.p, self.p):
            raise DimensionError(f"Sigma_beta_q must be {self.p}x{self.p}")
        if self.Sigma_alpha_q.shape != (self.q, self.q):
            raise DimensionError(f"Sigma_alpha_q must be {self.q}x{self.q}")

    @property
    def p(self) -> int:
        return self.mu_beta_q.shape[0]

    @property
    def q(self) -> int:
        return self.mu_alpha_q.shape[0]

    @property
    def beta_sd(self) -> np.ndarray:
        return np.sqrt(np.diag(self.Sigma_beta_q))

    @property
    def alpha_sd(self) -> np.ndarray:
        return np.sqrt(np.diag(self.Sigma_alpha_q))

    def with_beta(self, mu: np.ndarray, Sigma: np.ndarray) -> "VariationalFit":
        return replace(self, mu_beta_q=mu, Sigma_beta_q=Sigma)

    def with_alpha(self, mu: np.ndarray, Sigma: np.ndarray) -> "VariationalFit":
        return replace(self, mu_alpha_q=mu, Sigma_alpha_q=Sigma)


@dataclass(frozen=True)
class SolverConfig:
    """Tolerances and safeguards for the coordinate-ascent solver"""
    elbo_tol: float = 1e-6
    max_outer_iters: int = 200
    newton_tol: float = 1e-10
    newton_max_iters: int = 50
    exponent_clip: float = 30.0
    jitter: float = 1e-10
    homoscedastic: bool = False

    def __post_init__(self):
        validate_positive("elbo_tol", self.elbo_tol)
        validate_count("max_outer_iters", self.max_outer_iters)
        validate_positive("newton_tol", self.newton_tol)
        validate_count("newton_max_iters", self.newton_max_iters)
        validate_positive("exponent_clip", self.exponent_clip)
        validate_positive("jitter", self.jitter, allow_zero=True)

    @classmethod
    def from_config(cls, config=None, **overrides) -> "SolverConfig":
        """Build from the 'solver' configuration section"""
        from ..utils.config import get_config

        section = (config or get_config()).get_section("solver")
        values = {key: section[key] for key in cls.__dataclass_fields__ if key in section}
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


@dataclass(frozen=True)
class ElboTerms:
    """Expected log prior, expected log likelihood and entropy"""
    t1: float
    t2: float
    t3: float

    @property
    def total(self) -> float:
        return self.t1 + self.t2 + self.t3


@dataclass(frozen=True, eq=False)
class PseudoResponses:
    """Gamma-GLM responses w and their scaled version v"""
    w: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "w", _frozen_array(self.w, 1, "w"))
        object.__setattr__(self, "v", _frozen_array(self.v, 1, "v"))
        if np.any(self.w <= 0) or np.any(self.v <= 0):
            raise ValidationError("Pseudo-responses must be strictly positive")


@dataclass
class FitTrace:
    """Per-iteration record of a coordinate-ascent run"""
    elbo_per_iteration: List[float] = field(default_factory=list)
    alpha_update_accepted: List[bool] = field(default_factory=list)
    hyper_values: Optional[List[Tuple[float, float]]] = None
    newton_iterations: List[int] = field(default_factory=list)
    newton_gradients: List[float] = field(default_factory=list)

    @property
    def is_monotone(self) -> bool:
        values = np.asarray(self.elbo_per_iteration)
        return bool(np.all(np.diff(values) >= 0))

    def to_frame(self) -> pd.DataFrame:
        """Iteration 0 is the initial value; later rows carry the alpha flag"""
        accepted = [None] + list(self.alpha_update_accepted)
        frame = pd.DataFrame({
            "iteration": np.arange(len(self.elbo_per_iteration)),
            "elbo": self.elbo_per_iteration,
            "alpha_accepted": accepted[:len(self.elbo_per_iteration)],
        })
        if self.hyper_values:
            hyper = [(None, None)] + list(self.hyper_values)
            frame["sigma2_beta"] = [h[0] for h in hyper[:len(frame)]]
            frame["sigma2_alpha"] = [h[1] for h in hyper[:len(frame)]]
        return frame


@dataclass(frozen=True)
class ModelIndex:
    """Active mean (C) and variance (V) columns within universes of size p and q"""
    C: Tuple[int, ...]
    V: Tuple[int, ...]
    p: int
    q: int
    intercept_mean: Optional[int] = None
    intercept_var: Optional[int] = None

    def __post_init__(self):
        C = tuple(sorted(set(int(j) for j in self.C)))
        V = tuple(sorted(set(int(j) for j in self.V)))
        if any(not 0 <= j < self.p for j in C):
            raise ValidationError(f"Mean index {C} outside 0..{self.p - 1}")
        if any(not 0 <= j < self.q for j in V):
            raise ValidationError(f"Variance index {V} outside 0..{self.q - 1}")
        if self.intercept_mean is not None and self.intercept_mean not in C:
            raise ValidationError("The mean intercept must stay in the model")
        if self.intercept_var is not None and self.intercept_var not in V:
            raise ValidationError("The variance intercept must stay in the model")
        if not C or not V:
            raise ValidationError("Mean and variance models need at least one column")
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "V", V)

    @classmethod
    def intercepts_only(cls, data: DesignData) -> "ModelIndex":
        C = (data.intercept_mean_col,) if data.intercept_mean_col is not None else ()
        V = (data.intercept_var_col,) if data.intercept_var_col is not None else ()
        if not C or not V:
            raise ValidationError("An intercepts-only start needs intercepts in both designs")
        return cls(C, V, data.p, data.q, data.intercept_mean_col, data.intercept_var_col)

    @classmethod
    def full(cls, data: DesignData) -> "ModelIndex":
        return cls(tuple(range(data.p)), tuple(range(data.q)), data.p, data.q,
                   data.intercept_mean_col, data.intercept_var_col)

    @property
    def key(self) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        return self.C, self.V

    @property
    def mean_predictors(self) -> Tuple[int, ...]:
        return tuple(j for j in self.C if j != self.intercept_mean)

    @property
    def var_predictors(self) -> Tuple[int, ...]:
        return tuple(j for j in self.V if j != self.intercept_var)

    @property
    def p_candidates(self) -> int:
        return self.p - (self.intercept_mean is not None)

    @property
    def q_candidates(self) -> int:
        return self.q - (self.intercept_var is not None)

    def mean_pool(self) -> Tuple[int, ...]:
        """Mean columns that may be added"""
        return tuple(j for j in range(self.p) if j not in self.C and j != self.intercept_mean)

    def var_pool(self, restricted: bool = False) -> Tuple[int, ...]:
        """Variance columns that may be added (restricted: only columns already in C)"""
        pool = (j for j in range(self.q) if j not in self.V and j != self.intercept_var)
        if restricted:
            return tuple(j for j in pool if j in self.C)
        return tuple(pool)

    def add_mean(self, j: int) -> "ModelIndex":
        return replace(self, C=self.C + (j,))

    def add_var(self, j: int) -> "ModelIndex":
        return replace(self, V=self.V + (j,))

    def drop_mean(self, j: int, couple_variance: bool = False) -> "ModelIndex":
        if j == self.intercept_mean:
            raise ValidationError("The mean intercept cannot be dropped")
        V = tuple(k for k in self.V if k != j) if couple_variance else self.V
        return replace(self, C=tuple(k for k in self.C if k != j), V=V)

    def drop_var(self, j: int) -> "ModelIndex":
        if j == self.intercept_var:
            raise ValidationError("The variance intercept cannot be dropped")
        return replace(self, V=tuple(k for k in self.V if k != j))


ProbabilitySpec = Union[float, Tuple[float, ...]]


@dataclass(frozen=True)
class ModelPriorPolicy:
    """Prior over (C, V): uniform, independent Bernoulli inclusions, or EBIC"""
    kind: PriorKind = PriorKind.EBIC
    pi_mu: Optional[ProbabilitySpec] = None
    pi_sigma: Optional[ProbabilitySpec] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", PriorKind(self.kind))
        if self.kind is PriorKind.BERNOULLI:
            if self.pi_mu is None or self.pi_sigma is None:
                raise ConfigurationError("The Bernoulli model prior needs both pi_mu and pi_sigma")
            for name in ("pi_mu", "pi_sigma"):
                value = getattr(self, name)
                if isinstance(value, (list, tuple, np.ndarray)):
                    object.__setattr__(self, name, validate_probabilities(name, value))
                else:
                    object.__setattr__(self, name, validate_probability(name, value))

    @classmethod
    def uniform(cls) -> "ModelPriorPolicy":
        return cls(PriorKind.UNIFORM)

    @classmethod
    def bernoulli(cls, pi_mu: ProbabilitySpec, pi_sigma: ProbabilitySpec) -> "ModelPriorPolicy":
        return cls(PriorKind.BERNOULLI, pi_mu, pi_sigma)

    @classmethod
    def ebic(cls) -> "ModelPriorPolicy":
        return cls(PriorKind.EBIC)


@dataclass(frozen=True)
class RankScore:
    """One-step add/drop score of a candidate"""
    candidate: int
    direction: Direction
    bound_delta: float
    log_prior_delta: float
    candidate_mu: float
    candidate_var: float
    statistic: Optional[float] = None
    newton_iterations: int = 0
    converged: bool = True
    total: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "direction", Direction(self.direction))
        if not self.candidate_var > 0:
            raise ValidationError(f"Candidate variance must be positive, got {self.candidate_var}")
        object.__setattr__(self, "total", self.bound_delta + self.log_prior_delta)


@dataclass(frozen=True)
class PathStep:
    """One accepted move of a greedy search (step 0 is the starting model)"""
    step: int
    action: str
    predictor: Optional[int]
    name: str
    one_step_score: Optional[float]
    elbo: float
    log_prior: float
    coefficients_mean: Dict[str, float] = field(default_factory=dict)
    coefficients_var: Dict[str, float] = field(default_factory=dict)

    @property
    def exact_score(self) -> float:
        return self.elbo + self.log_prior


@dataclass
class SelectionResult:
    """Outcome of a greedy model search"""
    index: ModelIndex
    fit: VariationalFit
    path: List[PathStep]
    stopped_reason: str
    prior: Optional[PriorSpec] = None
    iterations: int = 0
    scaling: Optional[ScalingInfo] = None

    @property
    def score(self) -> float:
        return self.path[-1].exact_score

    def path_frame(self) -> pd.DataFrame:
        """step, action, predictor, one_step_score, exact_score"""
        return pd.DataFrame([
            {
                "step": s.step,
                "action": s.action,
                "predictor": s.name,
                "one_step_score": s.one_step_score,
                "exact_score": s.exact_score,
                "elbo": s.elbo,
                "log_prior": s.log_prior,
            }
            for s in self.path
        ])

    def snapshot_frame(self) -> pd.DataFrame:
        """Long-format coefficient snapshots (step, model, predictor, coefficient)"""
        rows = []
        for s in self.path:
            for model, coefs in (("mean", s.coefficients_mean), ("var", s.coefficients_var)):
                for name, value in coefs.items():
                    rows.append({"step": s.step, "model": model, "predictor": name, "coefficient": value})
        return pd.DataFrame(rows, columns=["step", "model", "predictor", "coefficient"])


@dataclass(frozen=True)
class ScalarAlphaFactor:
    """Normal factor for a scalar log-variance"""
    mu_alpha_q: float
    var_alpha_q: float
    prior_var: float
    newton_iterations: int = 0
    converged: bool = True

    def __post_init__(self):
        if not self.var_alpha_q > 0 or not self.prior_var > 0:
            raise ValidationError("Scalar factor variances must be positive")


@dataclass(frozen=True, eq=False)
class SimulationSpec:
    """y = intercept + x^T beta + sigma exp(x^T alpha / 2) eps with AR(1)-correlated x"""
    beta_tilde: np.ndarray
    alpha_tilde: np.ndarray
    intercept_mean: float = 2.0
    sigma: float = 0.5
    n_train: int = 200
    n_valid: int = 200
    correlation_decay: float = 0.5
    transform_to_unit: bool = True

    def __post_init__(self):
        object.__setattr__(self, "beta_tilde", _frozen_array(self.beta_tilde, 1, "beta_tilde"))
        object.__setattr__(self, "alpha_tilde", _frozen_array(self.alpha_tilde, 1, "alpha_tilde"))
        if self.beta_tilde.shape != self.alpha_tilde.shape:
            raise ValidationError("beta_tilde and alpha_tilde must have equal length")
        validate_positive("sigma", self.sigma)
        validate_count("n_train", self.n_train)
        validate_count("n_valid", self.n_valid)
        if not -1.0 < self.correlation_decay < 1.0:
            raise ValidationError("correlation_decay must lie in (-1, 1)")

    @property
    def dim(self) -> int:
        return self.beta_tilde.shape[0]

    @classmethod
    def small_p(cls, n: int = 200, sigma: float = 0.5) -> "SimulationSpec":
        return cls(
            beta_tilde=[3, 1.5, 0, 0, 2, 0, 0, 0],
            alpha_tilde=[0, 3, 0, 0, -3, 0, 0, 0],
            sigma=sigma, n_train=n, n_valid=n,
        )

    @classmethod
    def large_p(cls, n: int = 100, sigma: float = 0.5, p: int = 500) -> "SimulationSpec":
        beta = np.zeros(p)
        alpha = np.zeros(p)
        for k in range(50, min(p, 250) + 1, 50):
            beta[k - 1] = 5.0
        for k in range(300, p + 1, 50):
            beta[k - 1] = -5.0
        for k, value in ((100, 5.0), (200, 5.0), (300, -5.0), (400, -5.0)):
            if k <= p:
                alpha[k - 1] = value
        return cls(beta_tilde=beta, alpha_tilde=alpha, sigma=sigma, n_train=n, n_valid=n)

    @classmethod
    def homoscedastic(cls, n: int = 200, sigma: float = 1.0, p: int = 1000) -> "SimulationSpec":
        beta = np.zeros(p)
        beta[:5] = [5, -4, 3, -2, 2]
        return cls(beta_tilde=beta, alpha_tilde=np.zeros(p), sigma=sigma,
                   n_train=n, n_valid=n, transform_to_unit=False)


@dataclass(frozen=True)
class ReplicationRecord:
    """Metrics of one simulated replication"""
    replication: int
    seed: int
    correct_mean: bool = False
    correct_var: bool = False
    nzc_mean: int = 0
    nzc_var: int = 0
    mse: float = float("nan")
    pps: float = float("nan")
    coef_mse: float = float("nan")
    error: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "replication": self.replication,
            "seed": self.seed,
            "correct_mean": self.correct_mean,
            "correct_var": self.correct_var,
            "nzc_mean": self.nzc_mean,
            "nzc_var": self.nzc_var,
            "mse": self.mse,
            "pps": self.pps,
            "coef_mse": self.coef_mse,
            "error": self.error or "",
        }


@dataclass(frozen=True)
class StudySummary:
    """Averages over replications (percentages for the correctly-fitted rates)"""
    cfr_mean: float
    cfr_var: float
    nzc_mean: float
    nzc_var: float
    mse: float
    pps: float
    coef_mse: float
    cfr_mean_sd: float
    cfr_var_sd: float
    nzc_mean_sd: float
    nzc_var_sd: float
    mse_sd: float
    pps_sd: float
    coef_mse_sd: float
    replications: int
    failures: int = 0
    records: Tuple[ReplicationRecord, ...] = ()

    def __post_init__(self):
        if self.replications < 1:
            raise ValidationError("A study summary needs at least one replication")
        for name in ("cfr_mean", "cfr_var"):
            value = getattr(self, name)
            if not np.isnan(value) and not 0.0 <= value <= 100.0:
                raise ValidationError(f"{name} must be a percentage, got {value}")

    def to_frame(self) -> pd.DataFrame:
        """One row per replication plus a trailing summary row"""
        rows = [r.to_dict() for r in self.records]
        rows.append({
            "replication": "summary",
            "seed": "",
            "correct_mean": self.cfr_mean,
            "correct_var": self.cfr_var,
            "nzc_mean": self.nzc_mean,
            "nzc_var": self.nzc_var,
            "mse": self.mse,
            "pps": self.pps,
            "coef_mse": self.coef_mse,
            "error": f"failures={self.failures}",
        })
        return pd.DataFrame(rows)


@dataclass(frozen=True)
class SelectionConfig:
    """Settings of a greedy search"""
    policy: ModelPriorPolicy = field(default_factory=ModelPriorPolicy.ebic)
    method: str = "fbvar"
    restricted: bool = False
    homoscedastic: bool = False
    standardize: StandardizePolicy = StandardizePolicy.UNIT_SS
    sigma2_beta: float = 10000.0
    sigma2_alpha: float = 10000.0
    try_next_k: int = 1
    max_steps: int = 1000
    solver: SolverConfig = field(default_factory=SolverConfig)

    def __post_init__(self):
        if self.method not in ("fvar", "fbvar"):
            raise ConfigurationError(f"Unknown selection method '{self.method}' (use fvar or fbvar)")
        object.__setattr__(self, "standardize", StandardizePolicy(self.standardize))
        validate_positive("sigma2_beta", self.sigma2_beta)
        validate_positive("sigma2_alpha", self.sigma2_alpha)
        validate_count("try_next_k", self.try_next_k)
        validate_count("max_steps", self.max_steps)
        if self.homoscedastic and not self.solver.homoscedastic:
            object.__setattr__(self, "solver", replace(self.solver, homoscedastic=True))

    @classmethod
    def from_config(cls, config=None, **overrides) -> "SelectionConfig":
        """Build from the 'selection', 'prior' and 'solver' configuration sections"""
        from ..utils.config import get_config

        config = config or get_config()
        section = config.get_section("selection")
        prior = config.get_section("prior")
        kind = PriorKind(overrides.pop("policy_kind", None) or section.get("policy", "ebic"))
        pi_mu = overrides.pop("pi_mu", None) or section.get("pi_mu")
        pi_sigma = overrides.pop("pi_sigma", None) or section.get("pi_sigma")
        policy = ModelPriorPolicy(kind, pi_mu if kind is PriorKind.BERNOULLI else None,
                                  pi_sigma if kind is PriorKind.BERNOULLI else None)
        solver = overrides.pop("solver", None) or SolverConfig.from_config(config)
        values = {
            "method": section.get("method", "fbvar"),
            "restricted": section.get("restricted", False),
            "standardize": section.get("standardize", "unit_ss"),
            "try_next_k": section.get("try_next_k", 1),
            "max_steps": section.get("max_steps", 1000),
            "sigma2_beta": prior.get("sigma2_beta", 10000.0),
            "sigma2_alpha": prior.get("sigma2_alpha", 10000.0),
            "homoscedastic": solver.homoscedastic,
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(policy=policy, solver=solver, **values)
