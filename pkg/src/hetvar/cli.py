"""
Command-line interface

    hetvar fit      --data d.csv --response y [--mean ...] [--var ...]
    hetvar select   --data d.csv --response y [--method fbvar] [--prior ebic]
    hetvar paths    --result sel/ --output paths.csv   (or --data d.csv --response y)
    hetvar evaluate --data train.csv --validation valid.csv --response y
    hetvar simulate --preset small_p --seed 1 --output-dir sim/
    hetvar study    --preset small_p --replications 100 --seed 1

Exit codes: 0 success, 1 data, file or validation error, 2 solver failure
or non-convergence (outputs are still written), 64 usage error.
"""

import argparse
import os
import sys
from typing import Any, Dict, List, Literal, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field, ValidationError as PydanticValidationError, field_validator, model_validator

from .core.data import INTERCEPT_NAME, ColumnRoles, standardize
from .core.engine import fit_vb
from .core.models import (
    DesignData,
    ModelPriorPolicy,
    PriorKind,
    PriorSpec,
    SelectionConfig,
    SelectionResult,
    SimulationSpec,
    SolverConfig,
)
from .exceptions import DataError, HetVarError, SolverError
from .file_handlers.base import FileInfo
from .file_handlers.config_handler import normalize_key
from .file_handlers.csv_handler import write_frame_atomic, write_text_atomic
from .file_handlers.factory import DATASET, FLAGS, FileHandlerFactory
from .selection.search import select_model
from .simulation.generator import simulate_hetero
from .simulation.metrics import coefficient_frame, evaluate
from .simulation.study import replicate_study
from .utils.config import get_config
from .utils.logger import get_logger, setup_logging

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_DATA_ERROR = 1
EXIT_SOLVER_ERROR = 2
EXIT_USAGE = 64

VERBS = ("fit", "select", "paths", "evaluate", "simulate", "study")

REQUIRED_FLAGS = {
    "fit": ("data", "response"),
    "select": ("data", "response"),
    "paths": (),
    "evaluate": ("data", "validation", "response"),
    "simulate": (),
    "study": (),
}


class UsageError(Exception):
    """Bad command line; maps to exit code 64"""
    pass


def flag_name(field_name: str) -> str:
    return "--" + field_name.replace("_", "-")


# (option, argparse keyword arguments); every default is None so that
# flag-file values and configuration defaults can be told apart from flags
_COMMON = [
    ("--config", dict(dest="config", metavar="FILE", help="key = value (or YAML) file supplying any flag")),
    ("--log-level", dict(dest="log_level", choices=["DEBUG", "INFO", "WARNING", "ERROR"])),
]
_DATA = [
    ("--data", dict(dest="data", metavar="CSV", help="Headed, comma-separated UTF-8 table")),
    ("--response", dict(dest="response", help="Response column")),
    ("--mean", dict(dest="mean", nargs="+", help="Mean-model columns (default: all but the response)")),
    ("--var", dict(dest="var", nargs="*", help="Variance-model columns (default: the mean columns)")),
    ("--no-intercepts", dict(dest="add_intercepts", action="store_false", default=None)),
    ("--standardize", dict(dest="standardize", choices=["unit_ss", "zscore", "none"])),
]
_PRIOR = [
    ("--sigma2-beta", dict(dest="sigma2_beta", type=float, help="Prior variance of mean coefficients")),
    ("--sigma2-alpha", dict(dest="sigma2_alpha", type=float, help="Prior variance of variance coefficients")),
    ("--homoscedastic", dict(dest="homoscedastic", action="store_true", default=None)),
]
_SHRINK = [
    ("--shrink", dict(dest="shrink", action="store_true", default=None,
                      help="Estimate the prior variances under inverse-gamma hyperpriors")),
    ("--a", dict(dest="a", type=float, help="Inverse-gamma shape")),
    ("--b", dict(dest="b", type=float, help="Inverse-gamma scale")),
]
_SELECTION = [
    ("--method", dict(dest="method", choices=["fvar", "fbvar"])),
    ("--prior", dict(dest="prior", choices=["uniform", "bernoulli", "ebic"], help="Model prior (default ebic)")),
    ("--pi-mu", dict(dest="pi_mu", nargs="+", type=float, help="Mean inclusion probability (or one per candidate)")),
    ("--pi-sigma", dict(dest="pi_sigma", nargs="+", type=float,
                        help="Variance inclusion probability (or one per candidate)")),
    ("--restricted", dict(dest="restricted", action="store_true", default=None,
                          help="Keep variance predictors inside the mean model")),
    ("--try-next-k", dict(dest="try_next_k", type=int)),
    ("--max-steps", dict(dest="max_steps", type=int)),
]
_SOLVER = [
    ("--elbo-tol", dict(dest="elbo_tol", type=float)),
    ("--max-iter", dict(dest="max_iter", type=int)),
    ("--newton-tol", dict(dest="newton_tol", type=float)),
    ("--newton-max-iter", dict(dest="newton_max_iter", type=int)),
    ("--exponent-clip", dict(dest="exponent_clip", type=float)),
    ("--jitter", dict(dest="jitter", type=float)),
]
_SIMULATION = [
    ("--preset", dict(dest="preset", choices=["small_p", "large_p", "homoscedastic"])),
    ("--n", dict(dest="n", type=int, help="Training (and validation) sample size")),
    ("--sigma", dict(dest="sigma", type=float)),
    ("--p", dict(dest="p", type=int, help="Candidate count for the large_p and homoscedastic presets")),
    ("--seed", dict(dest="seed", type=int)),
]
_STUDY = [
    ("--replications", dict(dest="replications", type=int)),
    ("--threads", dict(dest="threads", type=int, help="Worker threads (default HETVAR_THREADS)")),
]
_INTEGRATED = [
    ("--integrated-pps", dict(dest="integrated_pps", action="store_true", default=None,
                              help="Add x^T Sigma_beta x to the predictive variance")),
]
_OUTPUT = [("--output", dict(dest="output", metavar="CSV"))]
_OUTPUT_DIR = [("--output-dir", dict(dest="output_dir", metavar="DIR"))]
_VALIDATION = [("--validation", dict(dest="validation", metavar="CSV", help="Validation table"))]
_RESULT = [("--result", dict(dest="result", metavar="DIR",
                            help="Output directory of a finished select run (path.csv, snapshots.csv)"))]

VERB_FLAGS = {
    "fit": _COMMON + _DATA + _PRIOR + _SHRINK + _SOLVER + _OUTPUT_DIR,
    "select": _COMMON + _DATA + _PRIOR + _SHRINK + _SELECTION + _SOLVER + _OUTPUT_DIR,
    "paths": _COMMON + _RESULT + _DATA + _PRIOR + _SELECTION + _SOLVER + _OUTPUT,
    "evaluate": _COMMON + _DATA + _VALIDATION + _PRIOR + _SELECTION + _SOLVER + _INTEGRATED + _OUTPUT,
    "simulate": _COMMON + _SIMULATION + _OUTPUT_DIR,
    "study": _COMMON + _SIMULATION + _STUDY + _PRIOR + _SELECTION + _SOLVER + _INTEGRATED + _OUTPUT,
}

VERB_HELP = {
    "fit": "Fit one heteroscedastic model by variational approximation",
    "select": "Greedy selection of mean and variance predictors",
    "paths": "Coefficient values against search step, one column per predictor, from a select run or the data",
    "evaluate": "Select on a training table, score MSE and PPS on a validation table",
    "simulate": "Draw a synthetic training/validation pair",
    "study": "Replicated simulation study",
}


class Command(BaseModel):
    """Validated command: verb plus every flag, defaults filled"""
    verb: Literal["fit", "select", "paths", "evaluate", "simulate", "study"]

    data: Optional[str] = None
    validation: Optional[str] = None
    result: Optional[str] = None
    response: Optional[str] = None
    mean: Optional[List[str]] = None
    var: Optional[List[str]] = None
    add_intercepts: bool = True
    standardize: Optional[Literal["unit_ss", "zscore", "none"]] = None

    output: Optional[str] = None
    output_dir: str = "."

    prior: Literal["uniform", "bernoulli", "ebic"] = "ebic"
    pi_mu: Optional[List[float]] = None
    pi_sigma: Optional[List[float]] = None
    method: Literal["fvar", "fbvar"] = "fbvar"
    restricted: bool = False
    homoscedastic: bool = False
    try_next_k: int = Field(1, ge=1)
    max_steps: int = Field(1000, ge=1)

    shrink: bool = False
    a: float = Field(0.01, gt=0)
    b: float = Field(0.01, gt=0)
    sigma2_beta: float = Field(10000.0, gt=0)
    sigma2_alpha: float = Field(10000.0, gt=0)

    elbo_tol: float = Field(1e-6, gt=0)
    max_iter: int = Field(200, ge=1)
    newton_tol: float = Field(1e-10, gt=0)
    newton_max_iter: int = Field(50, ge=1)
    exponent_clip: float = Field(30.0, gt=0)
    jitter: float = Field(1e-10, ge=0)

    preset: Literal["small_p", "large_p", "homoscedastic"] = "small_p"
    n: int = Field(200, ge=1)
    sigma: Optional[float] = Field(None, gt=0)
    p: Optional[int] = Field(None, ge=1)
    seed: int = Field(0, ge=0)
    replications: int = Field(100, ge=1)
    threads: int = Field(1, ge=1)
    integrated_pps: bool = False

    log_level: Optional[str] = None

    @field_validator("mean", "var", mode="before")
    @classmethod
    def split_names(cls, v):
        if isinstance(v, str):
            return [name for name in v.replace(",", " ").split()]
        return v

    @field_validator("pi_mu", "pi_sigma", mode="before")
    @classmethod
    def split_probabilities(cls, v):
        if isinstance(v, str):
            return [float(x) for x in v.replace(",", " ").split()]
        if isinstance(v, (int, float)):
            return [float(v)]
        return v

    @model_validator(mode="after")
    def check_flags(self):
        if self.prior == "bernoulli":
            for name in ("pi_mu", "pi_sigma"):
                if not getattr(self, name):
                    raise ValueError(f"{flag_name(name)} is required with --prior bernoulli")
        for name in REQUIRED_FLAGS[self.verb]:
            if getattr(self, name) in (None, ""):
                raise ValueError(f"{flag_name(name)} is required for '{self.verb}'")
        if self.verb == "paths" and not self.result:
            for name in ("data", "response"):
                if getattr(self, name) in (None, ""):
                    raise ValueError(f"{flag_name(name)} is required for 'paths' without --result")
        if self.homoscedastic and self.var:
            raise ValueError("--var cannot be combined with --homoscedastic")
        if self.p is not None and self.preset == "small_p":
            raise ValueError("--p does not apply to the small_p preset")
        return self

    def column_roles(self, header: Sequence[str]) -> ColumnRoles:
        """Mean columns default to every non-response column, variance columns to the mean columns"""
        mean = list(self.mean) if self.mean else [c for c in header if c != self.response]
        if self.homoscedastic:
            var = []
        else:
            var = list(self.var) if self.var is not None else list(mean)
        return ColumnRoles(response=self.response, mean=mean, var=var, add_intercepts=self.add_intercepts)

    def solver_config(self) -> SolverConfig:
        return SolverConfig(
            elbo_tol=self.elbo_tol,
            max_outer_iters=self.max_iter,
            newton_tol=self.newton_tol,
            newton_max_iters=self.newton_max_iter,
            exponent_clip=self.exponent_clip,
            jitter=self.jitter,
            homoscedastic=self.homoscedastic,
        )

    def model_prior(self) -> ModelPriorPolicy:
        if self.prior != "bernoulli":
            return ModelPriorPolicy(PriorKind(self.prior))

        def _unwrap(values: List[float]):
            return values[0] if len(values) == 1 else tuple(values)

        return ModelPriorPolicy.bernoulli(_unwrap(self.pi_mu), _unwrap(self.pi_sigma))

    def selection_config(self) -> SelectionConfig:
        return SelectionConfig(
            policy=self.model_prior(),
            method=self.method,
            restricted=self.restricted,
            homoscedastic=self.homoscedastic,
            standardize=self.standardize or "unit_ss",
            sigma2_beta=self.sigma2_beta,
            sigma2_alpha=self.sigma2_alpha,
            try_next_k=self.try_next_k,
            max_steps=self.max_steps,
            solver=self.solver_config(),
        )

    def simulation_spec(self) -> SimulationSpec:
        kwargs: Dict[str, Any] = {"n": self.n}
        if self.sigma is not None:
            kwargs["sigma"] = self.sigma
        if self.p is not None:
            kwargs["p"] = self.p
        return getattr(SimulationSpec, self.preset)(**kwargs)


class _Parser(argparse.ArgumentParser):
    """Raises UsageError instead of exiting with status 2"""

    def error(self, message):
        raise UsageError(f"{message}\n{self.format_usage().rstrip()}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="hetvar",
        description="Bayesian heteroscedastic linear regression by variational approximation, "
                    "with greedy selection of mean and variance predictors",
        epilog="Exit codes: 0 success, 1 data/file error, 2 solver non-convergence, 64 usage error",
    )
    subparsers = parser.add_subparsers(dest="verb", metavar="VERB", required=True)
    for verb in VERBS:
        sub = subparsers.add_parser(verb, help=VERB_HELP[verb], description=VERB_HELP[verb])
        for option, kwargs in VERB_FLAGS[verb]:
            sub.add_argument(option, **kwargs)
    return parser


def _config_defaults() -> Dict[str, Any]:
    """Command defaults drawn from the layered configuration"""
    config = get_config()
    solver = config.get_section("solver")
    prior = config.get_section("prior")
    selection = config.get_section("selection")
    study = config.get_section("study")
    values = {
        "elbo_tol": solver.get("elbo_tol"),
        "max_iter": solver.get("max_outer_iters"),
        "newton_tol": solver.get("newton_tol"),
        "newton_max_iter": solver.get("newton_max_iters"),
        "exponent_clip": solver.get("exponent_clip"),
        "jitter": solver.get("jitter"),
        "homoscedastic": solver.get("homoscedastic"),
        "sigma2_beta": prior.get("sigma2_beta"),
        "sigma2_alpha": prior.get("sigma2_alpha"),
        "shrink": prior.get("shrink"),
        "a": prior.get("a"),
        "b": prior.get("b"),
        "prior": selection.get("policy"),
        "pi_mu": selection.get("pi_mu"),
        "pi_sigma": selection.get("pi_sigma"),
        "method": selection.get("method"),
        "restricted": selection.get("restricted"),
        "try_next_k": selection.get("try_next_k"),
        "max_steps": selection.get("max_steps"),
        "replications": study.get("replications"),
        "threads": study.get("threads"),
        "integrated_pps": study.get("integrated_pps"),
    }
    return {k: v for k, v in values.items() if v is not None}


_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def _as_bool(option: str, value) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in _TRUE:
        return True
    if text in _FALSE:
        return False
    raise UsageError(f"{option} in config file expects true or false, got {value!r}")


def read_flag_file(file_path: str, verb: str) -> Dict[str, Any]:
    """Flag values from a config file, keyed like the parsed namespace"""
    info = FileInfo.from_path(file_path)
    raw = FileHandlerFactory().get_handler(info, role=FLAGS).read(info)

    known = {normalize_key(option): (option, kwargs) for option, kwargs in VERB_FLAGS[verb]}
    values = {}
    for key, value in raw.items():
        if key == "config" or key not in known:
            raise UsageError(f"Unknown key '{key}' in {info.name} for '{verb}'")
        option, kwargs = known[key]
        action = kwargs.get("action")
        if action == "store_true":
            value = _as_bool(option, value)
        elif action == "store_false":
            value = not _as_bool(option, value)
        values[kwargs["dest"]] = value
    return values


def parse_args(argv: Optional[Sequence[str]] = None) -> Command:
    """
    Parse a command line into a Command.

    Precedence: configuration defaults, then the --config file, then flags.
    Raises UsageError (exit 64) naming the offending flag; --help exits 0.
    """
    namespace = build_parser().parse_args(argv)
    given = {k: v for k, v in vars(namespace).items() if v is not None}

    values = _config_defaults()
    if given.get("config"):
        values.update(read_flag_file(given["config"], given["verb"]))
    given.pop("config", None)
    values.update(given)

    try:
        return Command(**values)
    except PydanticValidationError as e:
        error = e.errors()[0]
        message = str(error["msg"]).removeprefix("Value error, ")
        if error.get("loc"):
            message = f"{flag_name(str(error['loc'][0]))}: {message}"
        raise UsageError(message) from None


def load_design(file_path: str, command: Command) -> DesignData:
    info = FileInfo.from_path(file_path)
    handler = FileHandlerFactory().get_handler(info, role=DATASET)
    roles = command.column_roles(handler.read_header(info.path))
    return handler.load_dataset(info, roles)


def _in_dir(command: Command, name: str) -> str:
    return os.path.join(command.output_dir, name)


def _select(command: Command, data: DesignData) -> SelectionResult:
    if command.shrink:
        logger.warning("--shrink is not used by model search; fixed prior variances apply")
    result, _ = select_model(data, command.selection_config())
    return result


def _selection_summary(data: DesignData, result: SelectionResult) -> pd.DataFrame:
    last = result.path[-1]
    mean = [data.column_names_mean[j] for j in result.index.mean_predictors]
    var = [data.column_names_var[j] for j in result.index.var_predictors]
    rows = [
        ("stopped_reason", result.stopped_reason),
        ("iterations", result.iterations),
        ("elbo", last.elbo),
        ("log_prior", last.log_prior),
        ("score", result.score),
        ("converged", result.fit.converged),
        ("mean_predictors", " ".join(mean)),
        ("var_predictors", " ".join(var)),
    ]
    return pd.DataFrame(rows, columns=["key", "value"])


SNAPSHOT_COLUMNS = ["step", "model", "predictor", "coefficient"]


def paths_frame(result: SelectionResult) -> pd.DataFrame:
    return wide_paths(result.path_frame(), result.snapshot_frame())


def wide_paths(path: pd.DataFrame, snapshots: pd.DataFrame) -> pd.DataFrame:
    """
    Wide solution paths: one row per search step, one column per predictor
    ever selected ('mean:x1', 'var:x1'); excluded predictors read 0.
    """
    steps = path[["step", "action", "predictor"]]
    if snapshots.empty:
        return steps
    snapshots = snapshots.assign(column=snapshots["model"] + ":" + snapshots["predictor"])
    order = list(dict.fromkeys(snapshots["column"]))
    wide = snapshots.pivot(index="step", columns="column", values="coefficient")
    wide = wide.reindex(columns=order).reindex(steps["step"]).fillna(0.0)
    wide.index.name = "step"
    wide.columns.name = None
    return steps.merge(wide.reset_index(), on="step", how="left")


def run_fit(command: Command) -> int:
    data = load_design(command.data, command)
    scaled, scaling = standardize(data, command.standardize or "none")
    prior = PriorSpec.isotropic_prior(
        scaled.p, scaled.q, command.sigma2_beta, command.sigma2_alpha, command.shrink, command.a, command.b,
    )
    fit, trace = fit_vb(scaled, prior, command.solver_config())

    write_frame_atomic(trace.to_frame(), _in_dir(command, "trace.csv"))
    write_frame_atomic(
        coefficient_frame(scaled, fit, range(scaled.p), range(scaled.q), scaling),
        _in_dir(command, "coefficients.csv"),
    )
    logger.info(f"Fit finished after {fit.iterations} iterations, bound {fit.elbo:.6f}")
    if not fit.converged:
        logger.error(f"Fit did not converge in {command.max_iter} iterations; trace written")
        return EXIT_SOLVER_ERROR
    return EXIT_OK


def run_select(command: Command) -> int:
    data = load_design(command.data, command)
    result = _select(command, data)

    write_frame_atomic(result.path_frame(), _in_dir(command, "path.csv"))
    write_frame_atomic(result.snapshot_frame(), _in_dir(command, "snapshots.csv"))
    write_frame_atomic(
        coefficient_frame(data, result.fit, result.index.C, result.index.V, result.scaling),
        _in_dir(command, "coefficients.csv"),
    )
    write_frame_atomic(_selection_summary(data, result), _in_dir(command, "summary.csv"))
    if not result.fit.converged:
        logger.error("Final fit of the selected model did not converge")
        return EXIT_SOLVER_ERROR
    return EXIT_OK


def load_selection_frames(directory: str) -> Tuple[pd.DataFrame, pd.DataFrame]:
    """path.csv and snapshots.csv of a select run, with numeric step and coefficient columns"""
    frames = []
    for name in ("path.csv", "snapshots.csv"):
        info = FileInfo.from_path(os.path.join(directory, name))
        frames.append(FileHandlerFactory().get_handler(info, role=DATASET).read(info))
    path, snapshots = frames

    for frame, columns in ((path, ["step", "action", "predictor"]), (snapshots, SNAPSHOT_COLUMNS)):
        missing = [c for c in columns if c not in frame.columns]
        if missing:
            raise DataError(f"Selection output in {directory} lacks columns {missing}")
    try:
        path["step"] = path["step"].astype(int)
        snapshots["step"] = snapshots["step"].astype(int)
        snapshots["coefficient"] = snapshots["coefficient"].astype(float)
    except ValueError as e:
        raise DataError(f"Selection output in {directory} is not numeric where expected: {e}")
    return path, snapshots


def run_paths(command: Command) -> int:
    if command.result:
        path, snapshots = load_selection_frames(command.result)
        frame = wide_paths(path, snapshots)
    else:
        frame = paths_frame(_select(command, load_design(command.data, command)))
    write_frame_atomic(frame, command.output or "paths.csv")
    return EXIT_OK


def run_evaluate(command: Command) -> int:
    train = load_design(command.data, command)
    validation = load_design(command.validation, command)
    result = _select(command, train)
    mse_value, pps_value = evaluate(result, validation, integrated=command.integrated_pps)
    frame = pd.DataFrame({
        "metric": ["mse", "pps", "mean_predictors", "var_predictors"],
        "value": [mse_value, pps_value, len(result.index.mean_predictors), len(result.index.var_predictors)],
    })
    write_frame_atomic(frame, command.output or "evaluation.csv")
    logger.info(f"Validation MSE {mse_value:.6f}, PPS {pps_value:.6f}")
    return EXIT_OK


def _simulated_frame(data: DesignData) -> pd.DataFrame:
    return data.to_frame().drop(columns=[INTERCEPT_NAME])


def run_simulate(command: Command) -> int:
    spec = command.simulation_spec()
    train, valid, _ = simulate_hetero(spec, command.seed)
    names = [f"x{k + 1}" for k in range(spec.dim)]
    truth = pd.DataFrame({
        "name": [INTERCEPT_NAME] + names,
        "beta": np.concatenate([[spec.intercept_mean], spec.beta_tilde]),
        "alpha": np.concatenate([[2.0 * np.log(spec.sigma)], spec.alpha_tilde]),
    })
    write_frame_atomic(_simulated_frame(train), _in_dir(command, "train.csv"))
    write_frame_atomic(_simulated_frame(valid), _in_dir(command, "validation.csv"))
    write_frame_atomic(truth, _in_dir(command, "truth.csv"))
    return EXIT_OK


def _study_flags(command: Command) -> str:
    """The study's settings as a flag file that reproduces it"""
    keys = ["preset", "n", "sigma", "p", "seed", "replications", "method", "prior", "pi_mu", "pi_sigma",
            "restricted", "homoscedastic", "sigma2_beta", "sigma2_alpha", "elbo_tol", "integrated_pps"]
    lines = []
    for key in keys:
        value = getattr(command, key)
        if value is None:
            continue
        if isinstance(value, list):
            value = " ".join(repr(v) for v in value)
        elif isinstance(value, bool):
            value = str(value).lower()
        lines.append(f"{key.replace('_', '-')} = {value}")
    return "\n".join(lines) + "\n"


def run_study(command: Command) -> int:
    output = command.output or "study.csv"
    summary = replicate_study(
        command.simulation_spec(),
        command.replications,
        command.selection_config(),
        seed=command.seed,
        threads=command.threads,
        integrated_pps=command.integrated_pps,
    )
    write_frame_atomic(summary.to_frame(), output)
    write_text_atomic(_study_flags(command), os.path.splitext(output)[0] + ".cfg")
    return EXIT_OK


HANDLERS = {
    "fit": run_fit,
    "select": run_select,
    "paths": run_paths,
    "evaluate": run_evaluate,
    "simulate": run_simulate,
    "study": run_study,
}


def run(command: Command) -> int:
    """Execute a verb and map failures to exit codes"""
    try:
        return HANDLERS[command.verb](command)
    except (SolverError, np.linalg.LinAlgError) as e:
        logger.error(f"Solver failure: {e}")
        return EXIT_SOLVER_ERROR
    except HetVarError as e:
        logger.error(str(e))
        return EXIT_DATA_ERROR


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        command = parse_args(argv)
    except UsageError as e:
        print(f"hetvar: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except HetVarError as e:
        print(f"hetvar: error: {e}", file=sys.stderr)
        return EXIT_DATA_ERROR

    setup_logging(command.log_level)
    return run(command)


if __name__ == "__main__":
    sys.exit(main())
