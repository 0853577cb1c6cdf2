"""Tests for campaign execution, sweeps and their persisted outputs."""
import json
from unittest import mock

import numpy as np
import pytest

from annealing.benchmarks import RotationMatrix
from annealing.errors import CampaignError, ConfigurationError, EvaluationError
from annealing.harness import CampaignRunner, run_campaign, run_seed, sweep_config, sweep_tgen
from annealing.models import CampaignConfig
from annealing.records import Summary
from annealing.report import read_summary


def config_for(tmp_path, **overrides):
    values = dict(
        algorithm="po-csa",
        function_id=1,
        dimension=2,
        budget_per_optimizer=40,
        runs=3,
        seed=11,
        workers=1,
        output_dir=str(tmp_path / "campaign"),
    )
    values.update(overrides)
    return CampaignConfig(**values)


class TestRunCampaign:
    def test_writes_summary_and_manifest(self, tmp_path):
        record = run_campaign(config_for(tmp_path))
        out = tmp_path / "campaign"
        assert (out / "summary.csv").exists()
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["seed"] == 11
        assert manifest["run_seeds"] == [run_seed(11, i) for i in range(3)]
        assert manifest["finals"] == record.finals
        assert manifest["config"]["algorithm"] == "po-csa"
        assert len(record.runs) == 3

    def test_summary_matches_raw_finals(self, tmp_path):
        record = run_campaign(config_for(tmp_path, runs=5))
        manifest = json.loads((tmp_path / "campaign" / "manifest.json").read_text())
        recomputed = Summary.from_finals(manifest["finals"])
        for key, value in recomputed.to_dict().items():
            assert manifest["summary"][key] == pytest.approx(value, abs=1e-12)
        assert record.summary.mean == pytest.approx(np.mean(record.finals), abs=1e-12)

    def test_single_run_has_zero_stddev(self, tmp_path):
        run_campaign(config_for(tmp_path, runs=1))
        frame = read_summary(tmp_path / "campaign" / "summary.csv")
        assert frame.loc[0, "stddev"] == "0.00E+00"
        assert int(frame.loc[0, "runs"]) == 1

    def test_identical_campaigns_write_identical_summaries(self, tmp_path):
        run_campaign(config_for(tmp_path))
        first = (tmp_path / "campaign" / "summary.csv").read_bytes()
        run_campaign(config_for(tmp_path))
        assert (tmp_path / "campaign" / "summary.csv").read_bytes() == first

    def test_adding_runs_keeps_earlier_runs(self, tmp_path):
        two = run_campaign(config_for(tmp_path, runs=2, output_dir=str(tmp_path / "a")))
        three = run_campaign(config_for(tmp_path, runs=3, output_dir=str(tmp_path / "b")))
        assert three.finals[:2] == two.finals

    def test_worker_pool_gives_same_results(self, tmp_path):
        serial = run_campaign(config_for(tmp_path, output_dir=str(tmp_path / "serial")))
        pooled = run_campaign(config_for(tmp_path, workers=2, output_dir=str(tmp_path / "pooled")))
        assert pooled.finals == serial.finals
        assert [run.run_index for run in pooled.runs] == [0, 1, 2]

    @pytest.mark.parametrize("algorithm,extra", [("csa", {"t_gen_0": 1.0}), ("r-csa", {}), ("b-csa", {})])
    def test_every_algorithm_runs(self, tmp_path, algorithm, extra):
        record = run_campaign(config_for(tmp_path, algorithm=algorithm, runs=2, **extra))
        assert all(run.algorithm == algorithm for run in record.runs)

    def test_traces_written_when_requested(self, tmp_path):
        record = run_campaign(config_for(tmp_path, trace=True, trace_members=True, runs=2))
        out = tmp_path / "campaign"
        for run in record.runs:
            lines = (out / f"trace_{run.run_index}.csv").read_text().splitlines()
            assert lines[0].startswith("# config: ")
            assert lines[1] == "iteration,best_energy,t_ac,sigma2,t_gen_ref,t_gen_member_0,t_gen_member_1"
            assert len(lines) == run.iterations + 3

    def test_rotation_artifact(self, tmp_path):
        record = run_campaign(config_for(tmp_path, function_id=12, dimension=3, runs=1))
        path = tmp_path / "campaign" / "rotation_12_3.txt"
        assert record.outputs["rotation"] == str(path)
        reloaded = run_campaign(
            config_for(tmp_path, function_id=12, dimension=3, runs=1, seed=999,
                       rotation_file=str(path), output_dir=str(tmp_path / "again"))
        )
        rotation = RotationMatrix.load(path)
        assert rotation.orthogonality_error() < 1e-10
        assert reloaded.outputs["rotation"].endswith("rotation_12_3.txt")

    def test_failure_is_wrapped_and_logged(self, tmp_path):
        with mock.patch("annealing.harness.execute_run", side_effect=EvaluationError("f1 returned nan")), \
                mock.patch("annealing.harness.log_campaign_summary") as log_summary:
            with pytest.raises(CampaignError, match="nan"):
                CampaignRunner(config_for(tmp_path)).run()
        stats = log_summary.call_args[0][1]
        assert stats["status"] == "FAILED"
        assert "f1 returned nan" in stats["errors"][0]

    def test_success_is_logged(self, tmp_path):
        with mock.patch("annealing.harness.log_campaign_summary") as log_summary:
            run_campaign(config_for(tmp_path, runs=1))
        stats = log_summary.call_args[0][1]
        assert stats["status"] == "SUCCESS"
        assert stats["runs_completed"] == 1


class TestSweep:
    def test_marks_lowest_mean(self, tmp_path):
        records = sweep_tgen(config_for(tmp_path, algorithm="b-csa", runs=2, budget_per_optimizer=20))
        means = [record.summary.mean for record in records]
        assert len(records) == 7
        assert [record.selected for record in records].count(True) == 1
        assert all(record.parent_algorithm == "b-csa" for record in records)
        assert records[means.index(min(means))].selected

        out = tmp_path / "campaign"
        frame = read_summary(out / "summary.csv")
        assert list(frame["selected"]) == [int(record.selected) for record in records]
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["selected_t_gen_0"] == records[means.index(min(means))].t_gen_0
        assert (out / "t_gen_0" / "manifest.json").exists()

    def test_member_reproducible_standalone(self, tmp_path):
        config = config_for(tmp_path, algorithm="b-csa", runs=2, budget_per_optimizer=20)
        records = sweep_tgen(config)
        alone = run_campaign(
            sweep_config(config, 3, config.t_gen_sweep[3], None).model_copy(update={"output_dir": str(tmp_path / "alone")})
        )
        assert alone.finals == records[3].finals

    def test_rotated_members_share_rotation(self, tmp_path):
        config = config_for(tmp_path, algorithm="b-csa", function_id=9, dimension=3, runs=1, budget_per_optimizer=10,
                            t_gen_sweep=[1.0, 10.0])
        records = sweep_tgen(config)
        rotation_file = str(tmp_path / "campaign" / "rotation_9_3.txt")
        assert all(record.config["rotation_file"] == rotation_file for record in records)

    def test_requires_bcsa(self, tmp_path):
        with pytest.raises(ConfigurationError):
            sweep_tgen(config_for(tmp_path))
