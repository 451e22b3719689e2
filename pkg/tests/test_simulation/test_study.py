# tests/test_simulation/test_study.py
"""
Test the replication harness
"""

import numpy as np
import pytest

from hetvar.core.models import ReplicationRecord, SelectionConfig, SimulationSpec
from hetvar.exceptions import SolverError, ValidationError
from hetvar.simulation import study
from hetvar.simulation.study import replicate_study, run_replication, summarize


def record(replication, correct_mean, correct_var, nzc_mean, mse, error=None):
    return ReplicationRecord(
        replication=replication, seed=replication, correct_mean=correct_mean, correct_var=correct_var,
        nzc_mean=nzc_mean, nzc_var=1, mse=mse, pps=1.0, coef_mse=0.5, error=error,
    )


class TestSummarize:
    """Test summarize"""

    def test_aggregates(self):
        records = [
            record(2, True, False, 5, 1.0),
            record(1, True, True, 3, 3.0),
            ReplicationRecord(replication=3, seed=3, error="singular"),
        ]
        summary = summarize(records)
        assert summary.replications == 3
        assert summary.failures == 1
        assert summary.cfr_mean == pytest.approx(100.0)
        assert summary.cfr_var == pytest.approx(50.0)
        assert summary.cfr_var_sd == pytest.approx(50.0)
        assert summary.nzc_mean == pytest.approx(4.0)
        assert summary.mse == pytest.approx(2.0)
        assert summary.mse_sd == pytest.approx(1.0)
        assert [r.replication for r in summary.records] == [1, 2, 3]

    def test_order_independent(self):
        records = [record(k, k % 2 == 0, True, k, float(k)) for k in range(1, 6)]
        forward = summarize(records)
        backward = summarize(list(reversed(records)))
        assert forward == backward

    def test_all_failed(self):
        summary = summarize([ReplicationRecord(replication=1, seed=1, error="boom")])
        assert summary.failures == 1
        assert np.isnan(summary.mse)

    def test_empty(self):
        with pytest.raises(ValidationError):
            summarize([])

    def test_frame(self):
        summary = summarize([record(1, True, False, 2, 1.5)])
        frame = summary.to_frame()
        assert list(frame["replication"]) == [1, "summary"]
        assert frame["mse"].iloc[-1] == pytest.approx(1.5)


class TestReplicateStudy:
    """Test replicate_study"""

    def test_thread_count_does_not_change_results(self):
        spec = SimulationSpec.small_p(n=60)
        serial = replicate_study(spec, 3, seed=9, threads=1)
        parallel = replicate_study(spec, 3, seed=9, threads=3)
        assert serial.to_frame().equals(parallel.to_frame())
        assert serial.replications == 3

    def test_seed_changes_results(self):
        spec = SimulationSpec.small_p(n=60)
        first = replicate_study(spec, 2, seed=1)
        second = replicate_study(spec, 2, seed=2)
        assert [r.seed for r in first.records] != [r.seed for r in second.records]

    def test_threads_from_environment(self, monkeypatch):
        monkeypatch.setenv("HETVAR_THREADS", "2")
        seen = {}
        original = study.ThreadPoolExecutor

        def spy(max_workers):
            seen["workers"] = max_workers
            return original(max_workers=max_workers)

        monkeypatch.setattr(study, "ThreadPoolExecutor", spy)
        replicate_study(SimulationSpec.small_p(n=40), 2, seed=0)
        assert seen["workers"] == 2

    def test_replications_checked(self):
        with pytest.raises(ValidationError):
            replicate_study(SimulationSpec.small_p(n=40), 0)


class TestRunReplication:
    """Test run_replication"""

    def test_metrics_filled(self):
        rec = run_replication(SimulationSpec.small_p(n=100), SelectionConfig(), 1, seed=4)
        assert rec.error is None
        assert np.isfinite(rec.mse) and np.isfinite(rec.pps) and np.isfinite(rec.coef_mse)
        assert 0 <= rec.nzc_mean <= 8

    def test_failure_is_recorded(self, monkeypatch):
        def broken(*args, **kwargs):
            raise SolverError("Cholesky failed")

        monkeypatch.setattr(study, "select_model", broken)
        rec = run_replication(SimulationSpec.small_p(n=40), SelectionConfig(), 7, seed=1)
        assert rec.error == "Cholesky failed"
        assert rec.replication == 7
        assert np.isnan(rec.mse)
