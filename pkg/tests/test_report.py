"""Tests for summary, trace and manifest reports."""
import numpy as np
import pytest

from annealing.csa import TGEN_SWEEP
from annealing.errors import ReportError
from annealing.harness import run_campaign, sweep_tgen
from annealing.models import CampaignConfig
from annealing.records import CampaignRecord, RunRecord, Summary
from annealing.report import (
    SUMMARY_COLUMNS,
    format_sci,
    load_manifest,
    read_summary,
    read_trace,
    report,
    summary_from_traces,
    trace_frame,
    write_summary,
    write_trace,
)


def campaign(tmp_path, name, **overrides):
    values = dict(
        algorithm="po-csa", function_id=6, dimension=2, budget_per_optimizer=30,
        runs=3, seed=5, trace=True, workers=1, output_dir=str(tmp_path / name),
    )
    values.update(overrides)
    return run_campaign(CampaignConfig(**values))


def fake_record(mean_values):
    config = CampaignConfig(algorithm="csa", function_id=1, dimension=5, budget_per_optimizer=10, t_gen_0=1.0,
                            runs=len(mean_values), workers=1).reproducibility_dict()
    runs = [
        RunRecord("csa", "f1_sphere", 5, 5, i, {}, value, np.zeros(5), 50, 9, np.array([value]))
        for i, value in enumerate(mean_values)
    ]
    return CampaignRecord(config=config, runs=runs, summary=Summary.from_finals(mean_values))


class TestFormatting:
    @pytest.mark.parametrize(
        "value,expected",
        [(0.0, "0.00E+00"), (4.440892098500626e-16, "4.44E-16"), (0.0856, "8.56E-02"), (1234.5, "1.23E+03")],
    )
    def test_format_sci(self, value, expected):
        assert format_sci(value) == expected


class TestSummary:
    def test_single_record(self, tmp_path):
        path = write_summary([fake_record([0.0])], tmp_path / "summary.csv")
        lines = path.read_text().splitlines()
        assert lines[0].startswith("# config: {")
        assert lines[1] == ",".join(SUMMARY_COLUMNS)
        assert len(lines) == 3
        frame = read_summary(path)
        assert frame.loc[0, "mean"] == "0.00E+00"
        assert frame.loc[0, "function"] == "f1"

    def test_population_stddev(self):
        summary = Summary.from_finals([1.0, 3.0])
        assert summary.stddev == 1.0
        assert summary.median == 2.0

    def test_empty(self, tmp_path):
        with pytest.raises(ReportError):
            write_summary([], tmp_path / "summary.csv")
        with pytest.raises(ValueError):
            Summary.from_finals([])


class TestTraces:
    def test_traces_reaggregate_to_summary(self, tmp_path):
        record = campaign(tmp_path, "traced")
        paths = [record.outputs[f"trace_{i}"] for i in range(3)]
        summary = summary_from_traces(paths)
        for key, value in record.summary.to_dict().items():
            assert summary.to_dict()[key] == pytest.approx(value, abs=1e-12)

    def test_untraced_run_rejected(self, tmp_path):
        record = campaign(tmp_path, "plain", trace=False)
        with pytest.raises(ReportError):
            write_trace(record.runs[0], tmp_path / "trace.csv", record.config)

    def test_member_directions_are_written(self, tmp_path):
        record = campaign(tmp_path, "members", trace_members=True)
        frame = read_trace(record.outputs["trace_0"])
        assert [c for c in frame.columns if c.startswith("dir_member_")] == ["dir_member_0", "dir_member_1"]
        directions = frame[["dir_member_0", "dir_member_1"]].to_numpy()
        assert len(frame) == record.runs[0].iterations + 1
        assert np.all(np.count_nonzero(directions == 0, axis=1) == 1)
        assert set(np.unique(directions).tolist()) <= {-1, 0, 1}

    def test_reference_only_trace_has_no_member_columns(self, tmp_path):
        record = campaign(tmp_path, "reference")
        columns = list(trace_frame(record.runs[0]).columns)
        assert columns == ["iteration", "best_energy", "t_ac", "sigma2", "t_gen_ref"]


class TestReport:
    def test_merges_campaign_directories(self, tmp_path):
        campaign(tmp_path, "one")
        campaign(tmp_path, "two", function_id=1)
        path = report([tmp_path / "one", tmp_path / "two" / "manifest.json"], tmp_path / "merged" / "summary.csv")
        frame = read_summary(path)
        assert list(frame["function"]) == ["f6", "f1"]
        assert sum(line.startswith("# config:") for line in path.read_text().splitlines()) == 2

    def test_records_are_accepted(self, tmp_path):
        path = report([fake_record([1.0, 2.0])], tmp_path / "summary.csv")
        assert read_summary(path).loc[0, "mean"] == "1.50E+00"

    def test_plain_csa_record_has_no_sweep_columns(self, tmp_path):
        record = fake_record([1.0, 2.0])
        record.t_gen_0 = 1.0
        record.selected = True
        assert list(read_summary(report([record], tmp_path / "summary.csv")).columns) == SUMMARY_COLUMNS

    def test_sweep_columns_agree_for_records_and_manifests(self, tmp_path):
        config = CampaignConfig(algorithm="b-csa", function_id=1, dimension=2, budget_per_optimizer=10, runs=1,
                                seed=3, workers=1, output_dir=str(tmp_path / "sweep"))
        records = sweep_tgen(config)
        from_records = read_summary(report(records, tmp_path / "records.csv"))
        from_manifest = read_summary(report([tmp_path / "sweep"], tmp_path / "manifest.csv"))
        for frame in (from_records, from_manifest):
            assert list(frame.columns) == SUMMARY_COLUMNS + ["t_gen_0", "selected"]
            assert list(frame["t_gen_0"]) == [format_sci(t) for t in TGEN_SWEEP]
            assert frame["selected"].sum() == 1
        assert from_records.equals(from_manifest)

    def test_sweep_member_directory_reports_as_plain_csa(self, tmp_path):
        config = CampaignConfig(algorithm="b-csa", function_id=1, dimension=2, budget_per_optimizer=10, runs=1,
                                seed=3, workers=1, output_dir=str(tmp_path / "sweep"), t_gen_sweep=[1.0, 10.0])
        sweep_tgen(config)
        frame = read_summary(report([tmp_path / "sweep" / "t_gen_0"], tmp_path / "member.csv"))
        assert list(frame.columns) == SUMMARY_COLUMNS
        assert frame.loc[0, "algorithm"] == "csa"

    def test_empty_input(self, tmp_path):
        with pytest.raises(ReportError):
            report([], tmp_path / "summary.csv")

    def test_unreadable_manifest(self, tmp_path):
        with pytest.raises(ReportError):
            load_manifest(tmp_path / "missing")
