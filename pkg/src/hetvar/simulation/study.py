"""
Replication harness for simulation studies
"""

import math
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence

import numpy as np

from ..core.models import ReplicationRecord, SelectionConfig, SimulationSpec, StudySummary
from ..exceptions import HetVarError, ValidationError
from ..selection.search import select_model
from ..utils.config import get_config
from ..utils.logger import get_logger
from .generator import derive_seeds, simulate_hetero
from .metrics import classify_fit, coef_mse, evaluate, full_coefficients

logger = get_logger(__name__)


def run_replication(spec: SimulationSpec, config: SelectionConfig, replication: int, seed: int,
                    integrated_pps: bool = False) -> ReplicationRecord:
    """Simulate, select and evaluate once; failures are recorded, not raised"""
    try:
        train, valid, truth = simulate_hetero(spec, seed)
        result, _ = select_model(train, config)
        flags = classify_fit(result.index, truth)
        mse_value, pps_value = evaluate(result, valid, integrated=integrated_pps)
        truth_beta = np.concatenate([[spec.intercept_mean], spec.beta_tilde])
        estimate = full_coefficients(result, "mean")
        record = ReplicationRecord(
            replication=replication,
            seed=seed,
            correct_mean=flags.correct_mean,
            correct_var=flags.correct_var,
            nzc_mean=flags.nzc_mean,
            nzc_var=flags.nzc_var,
            mse=mse_value,
            pps=pps_value,
            coef_mse=coef_mse(estimate[1:], truth_beta[1:]),
        )
    except (HetVarError, np.linalg.LinAlgError, FloatingPointError) as e:
        logger.warning(f"Replication {replication} (seed {seed}) failed: {e}")
        return ReplicationRecord(replication=replication, seed=seed, error=str(e))

    logger.info(
        f"Replication {replication}: mean {'ok' if record.correct_mean else 'wrong'}, "
        f"var {'ok' if record.correct_var else 'wrong'}, mse {record.mse:.4f}"
    )
    return record


def _mean_sd(values: Sequence[float]):
    if not values:
        return float("nan"), float("nan")
    mean = math.fsum(values) / len(values)
    sd = math.sqrt(math.fsum((v - mean) ** 2 for v in values) / len(values))
    return mean, sd


def summarize(records: Sequence[ReplicationRecord]) -> StudySummary:
    """Order-independent aggregation (records are sorted by replication first)"""
    if not records:
        raise ValidationError("No replications to summarize")
    records = sorted(records, key=lambda r: r.replication)
    ok = [r for r in records if r.error is None]

    stats = {}
    for name, values in (
        ("cfr_mean", [100.0 * r.correct_mean for r in ok]),
        ("cfr_var", [100.0 * r.correct_var for r in ok]),
        ("nzc_mean", [float(r.nzc_mean) for r in ok]),
        ("nzc_var", [float(r.nzc_var) for r in ok]),
        ("mse", [r.mse for r in ok]),
        ("pps", [r.pps for r in ok]),
        ("coef_mse", [r.coef_mse for r in ok]),
    ):
        stats[name], stats[f"{name}_sd"] = _mean_sd(values)

    return StudySummary(
        replications=len(records),
        failures=len(records) - len(ok),
        records=tuple(records),
        **stats,
    )


def replicate_study(spec: SimulationSpec, replications: int, config: Optional[SelectionConfig] = None,
                    seed: int = 0, threads: Optional[int] = None,
                    integrated_pps: Optional[bool] = None) -> StudySummary:
    """
    Run independent replications with seeds split off the master seed.

    Threads default to the study.threads setting (HETVAR_THREADS); results
    do not depend on the thread count.
    """
    if replications < 1:
        raise ValidationError(f"replications must be >= 1, got {replications}")
    config = config or SelectionConfig()
    settings = get_config().get_section("study")
    threads = threads or settings.get("threads", 1)
    if integrated_pps is None:
        integrated_pps = settings.get("integrated_pps", False)

    seeds = derive_seeds(seed, replications)
    logger.info(f"Starting study: {replications} replications, {threads} thread(s), master seed {seed}")

    def _one(item):
        replication, child_seed = item
        return run_replication(spec, config, replication, child_seed, integrated_pps)

    items = list(enumerate(seeds, start=1))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records: List[ReplicationRecord] = list(pool.map(_one, items))
    else:
        records = [_one(item) for item in items]

    summary = summarize(records)
    logger.info(
        f"Study finished: CFR mean {summary.cfr_mean:.1f}%, CFR var {summary.cfr_var:.1f}%, "
        f"MSE {summary.mse:.4f}, failures {summary.failures}"
    )
    return summary
