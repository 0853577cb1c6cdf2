"""
Campaign reports.

Writes the three artifact kinds of a campaign:

- ``summary.csv``: one row per campaign, statistics in ``%.2E`` notation
- ``trace_<run>.csv``: per-iteration series of one run at full precision
- ``manifest.json``: config, seeds, raw finals and full-precision statistics

Every CSV starts with a ``# config: <json>`` line naming the configuration
and seed that regenerate it; readers skip it with ``comment="#"``.
"""

import json
import platform
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from logs.logger import get_logger

from . import __version__
from .errors import ReportError
from .records import CampaignRecord, RunRecord, Summary

logger = get_logger(__name__)

SUMMARY_COLUMNS = [
    "function", "D", "m", "algorithm", "budget_per_optimizer", "runs",
    "mean", "median", "min", "max", "stddev", "seed",
]
SWEEP_COLUMNS = ["t_gen_0", "selected"]
TRACE_COLUMNS = ["iteration", "best_energy", "t_ac", "sigma2", "t_gen_ref"]
STAT_COLUMNS = ["mean", "median", "min", "max", "stddev"]
MANIFEST_NAME = "manifest.json"
SUMMARY_NAME = "summary.csv"


def format_sci(value: float) -> str:
    """Three significant digits in scientific notation, e.g. 0.00E+00."""
    return f"{float(value):.2E}"


def config_comment(config: Dict[str, Any]) -> str:
    return "# config: " + json.dumps(config, sort_keys=True)


def summary_row(config: Dict[str, Any], summary: Dict[str, float]) -> Dict[str, Any]:
    """Table row of one campaign from its config and full-precision statistics."""
    row = {
        "function": f"f{config['function_id']}",
        "D": config["dimension"],
        "m": config["optimizers"],
        "algorithm": config["algorithm"],
        "budget_per_optimizer": config["budget_per_optimizer"],
        "runs": summary["runs"],
    }
    row.update({column: format_sci(summary[column]) for column in STAT_COLUMNS})
    row["seed"] = config["seed"]
    return row


def add_sweep_columns(row: Dict[str, Any], t_gen_0: float, selected: bool) -> Dict[str, Any]:
    row["t_gen_0"] = format_sci(t_gen_0)
    row["selected"] = int(selected)
    return row


def is_sweep_member(record: CampaignRecord) -> bool:
    return record.parent_algorithm == "b-csa" and record.t_gen_0 is not None


def _write_csv(frame: pd.DataFrame, path: Path, comments: Sequence[str], float_format: Optional[str] = None) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        for comment in comments:
            handle.write(comment + "\n")
        frame.to_csv(handle, index=False, float_format=float_format, lineterminator="\n")
    return path


def write_summary(records: Sequence[CampaignRecord], path: Union[str, Path], sweep: bool = False) -> Path:
    """Summary table of ``records``; sweep tables add ``t_gen_0`` and ``selected``."""
    if not records:
        raise ReportError("no campaign records to summarize")
    rows = []
    for record in records:
        row = summary_row(record.config, record.summary.to_dict())
        if sweep:
            add_sweep_columns(row, record.t_gen_0, record.selected)
        rows.append(row)
    columns = SUMMARY_COLUMNS + (SWEEP_COLUMNS if sweep else [])
    comments = _unique_comments(record.config for record in records)
    path = _write_csv(pd.DataFrame(rows, columns=columns), Path(path), comments)
    logger.info(f"Summary with {len(rows)} rows written to {path}")
    return path


def _unique_comments(configs: Iterable[Dict[str, Any]]) -> List[str]:
    comments: List[str] = []
    for config in configs:
        comment = config_comment(config)
        if comment not in comments:
            comments.append(comment)
    return comments


def trace_frame(run: RunRecord) -> pd.DataFrame:
    """Long-form per-iteration series of one traced run.

    Member-level traces add ``t_gen_member_i`` and ``dir_member_i`` columns;
    the reference member's direction is 0.
    """
    if run.trace is None:
        raise ReportError(f"run {run.run_index} (seed {run.seed}) was not traced")
    trace = run.trace
    frame = pd.DataFrame({
        "iteration": trace.iteration,
        "best_energy": trace.best_energy,
        "t_ac": trace.t_ac,
        "sigma2": trace.sigma2,
        "t_gen_ref": trace.t_gen_ref,
    })
    if trace.t_gen_members:
        members = np.vstack(trace.t_gen_members)
        for i in range(members.shape[1]):
            frame[f"t_gen_member_{i}"] = members[:, i]
    if trace.directions:
        directions = np.vstack(trace.directions)
        for i in range(directions.shape[1]):
            frame[f"dir_member_{i}"] = directions[:, i]
    return frame


def write_trace(run: RunRecord, path: Union[str, Path], config: Dict[str, Any]) -> Path:
    comments = [config_comment({**config, "run_index": run.run_index, "run_seed": run.seed})]
    return _write_csv(trace_frame(run), Path(path), comments, float_format="%.17g")


def read_trace(path: Union[str, Path]) -> pd.DataFrame:
    return pd.read_csv(path, comment="#")


def read_summary(path: Union[str, Path]) -> pd.DataFrame:
    """Summary table with statistic columns as strings, exactly as rendered."""
    return pd.read_csv(path, comment="#", dtype={column: str for column in STAT_COLUMNS + ["t_gen_0"]})


def summary_from_traces(paths: Sequence[Union[str, Path]]) -> Summary:
    """Re-aggregate a campaign from the final best energy of each trace file."""
    if not paths:
        raise ReportError("no trace files to aggregate")
    finals = [float(read_trace(path)["best_energy"].iloc[-1]) for path in paths]
    return Summary.from_finals(finals)


def tool_versions() -> Dict[str, str]:
    return {
        "annealing": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "pandas": pd.__version__,
    }


def manifest_data(record: CampaignRecord, rotation_path: Optional[str] = None) -> Dict[str, Any]:
    return {
        "config": record.config,
        "seed": record.config["seed"],
        "run_seeds": record.run_seeds,
        "runs": [run.to_dict() for run in record.runs],
        "finals": record.finals,
        "eval_counts": [run.eval_count for run in record.runs],
        "iterations": [run.iterations for run in record.runs],
        "t_gen_0": [run.t_gen_0 for run in record.runs],
        "summary": record.summary.to_dict(),
        "rotation": rotation_path,
        "outputs": record.outputs,
        "versions": tool_versions(),
    }


def write_manifest(data: Dict[str, Any], path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    logger.info(f"Manifest written to {path}")
    return path


def load_manifest(path: Union[str, Path]) -> Dict[str, Any]:
    """Manifest at ``path``, or inside ``path`` when it is a campaign directory."""
    path = Path(path)
    if path.is_dir():
        path = path / MANIFEST_NAME
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except (OSError, ValueError) as e:
        raise ReportError(f"cannot read manifest {path}: {e}") from e


def _manifest_rows(manifest: Dict[str, Any]) -> List[Dict[str, Any]]:
    # sweep manifests carry one campaign per initial temperature
    if "sweep" in manifest:
        rows = []
        for entry in manifest["sweep"]:
            row = summary_row(entry["config"], entry["summary"])
            rows.append(add_sweep_columns(row, entry["t_gen_0"], entry["selected"]))
        return rows
    return [summary_row(manifest["config"], manifest["summary"])]


def report(
    sources: Sequence[Union[CampaignRecord, str, Path]],
    out_path: Union[str, Path],
) -> Path:
    """Merge campaigns, given as records, manifests or campaign directories, into one summary table.

    Raises:
        ReportError: no sources, or a manifest cannot be read
    """
    if not sources:
        raise ReportError("report needs at least one campaign record")

    rows: List[Dict[str, Any]] = []
    configs: List[Dict[str, Any]] = []
    for source in sources:
        if isinstance(source, CampaignRecord):
            row = summary_row(source.config, source.summary.to_dict())
            if is_sweep_member(source):
                add_sweep_columns(row, source.t_gen_0, source.selected)
            rows.append(row)
            configs.append(source.config)
            continue
        manifest = load_manifest(source)
        rows.extend(_manifest_rows(manifest))
        configs.extend(entry["config"] for entry in manifest.get("sweep", [manifest]))

    columns = SUMMARY_COLUMNS + (SWEEP_COLUMNS if any("selected" in row for row in rows) else [])
    frame = pd.DataFrame(rows, columns=columns)
    path = _write_csv(frame, Path(out_path), _unique_comments(configs))
    logger.info(f"Report of {len(rows)} campaigns written to {path}")
    return path
