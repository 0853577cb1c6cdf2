"""
Campaign Harness

Runs a campaign, i.e. ``runs`` independent seeded runs of one algorithm on
one benchmark, and persists it:

1. Prepare: build the benchmark and, for rotated functions, the campaign
   rotation (shared by every run) with its ``rotation_<fn>_<D>.txt`` artifact
2. Execute: run r uses seed ``derive_seed(seed, RUN_KEY, r)``; runs go to a
   process pool when ``workers > 1`` and are collected in run order
3. Summarize: statistics of the final best energies
4. Persist: ``summary.csv``, ``manifest.json`` and optional ``trace_<run>.csv``

``sweep_tgen`` repeats this for every initial generation temperature of the
B-CSA sweep and marks the one with the lowest mean.
"""

from concurrent.futures import ProcessPoolExecutor
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional

from logs.logger import get_logger, log_campaign_summary

from .benchmarks import BenchmarkSpec, RotationMatrix, make_benchmark
from .csa import ScheduleSpec, run_bcsa_sweep, run_csa
from .errors import CampaignError, ConfigurationError
from .models import CampaignConfig
from .po_csa import run_po_csa
from .records import CampaignRecord, RunRecord, Summary
from .report import MANIFEST_NAME, SUMMARY_NAME, format_sci, manifest_data, write_manifest, write_summary, write_trace
from .rng import RUN_KEY, SWEEP_KEY, derive_seed

logger = get_logger(__name__)


def run_seed(seed: int, run_index: int) -> int:
    """Seed of run ``run_index``; adding runs leaves earlier runs untouched."""
    return derive_seed(seed, RUN_KEY, run_index)


def execute_run(config: CampaignConfig, run_index: int, rotation: Optional[RotationMatrix] = None) -> RunRecord:
    """One seeded run of ``config``. Module-level so worker processes can import it."""
    benchmark = make_benchmark(config.function_id, config.dimension, config.seed, rotation)
    objective = benchmark.objective()
    seed = run_seed(config.seed, run_index)
    common = dict(
        alpha=config.alpha,
        seed=seed,
        t_ac_0=config.t_ac_0,
        max_iterations=config.max_iterations,
        trace=config.trace,
        boundary_policy=config.boundary_policy,
    )

    if config.algorithm == "csa":
        record = run_csa(objective, config.m, config.budget_per_optimizer, ScheduleSpec(config.t_gen_0), **common)
    elif config.algorithm == "r-csa":
        record = run_csa(objective, config.m, config.budget_per_optimizer, None, **common)
    elif config.algorithm == "b-csa":
        record = run_bcsa_sweep(objective, config.m, config.budget_per_optimizer, sweep=config.t_gen_sweep, **common)
    else:
        record = run_po_csa(
            objective,
            config.m,
            config.budget_per_optimizer,
            beta=config.beta,
            phi=config.phi,
            mu=config.mu,
            delta=config.delta,
            t_gen_init=config.t_gen_0,
            trace_members=config.trace_members,
            **common,
        )
    record.run_index = run_index
    return record


class CampaignRunner:
    """
    Campaign Runner

    Executes and persists one campaign. Statistics about the campaign itself
    (status, timings, errors) go to the campaign log directory whether or not
    it succeeds.
    """

    def __init__(self, config: CampaignConfig, rotation: Optional[RotationMatrix] = None):
        """
        Initialize Campaign Runner

        Args:
            config: Validated campaign configuration
            rotation: Rotation to use instead of building or loading one
        """
        self.config = config
        self.rotation = rotation
        self.output_dir = Path(config.output_dir)
        self.campaign_id = (
            f"{datetime.now().strftime('%Y%m%d_%H%M%S_%f')}_{config.algorithm}_f{config.function_id}_D{config.dimension}"
        )
        self.benchmark: Optional[BenchmarkSpec] = None
        self.rotation_path: Optional[str] = None
        self.stats: Dict[str, Any] = {
            "campaign_id": self.campaign_id,
            "start_time": datetime.now().isoformat(),
            "end_time": None,
            "status": "RUNNING",
            "config": config.reproducibility_dict(),
            "output_dir": str(self.output_dir),
            "runs_completed": 0,
            "errors": [],
        }
        logger.info(f"Campaign Runner initialized - Campaign ID: {self.campaign_id}")

    def run(self) -> CampaignRecord:
        """
        Execute the campaign

        Returns:
            CampaignRecord: runs, summary and written files

        Raises:
            CampaignError: any run or output step failed
        """
        try:
            logger.info("=" * 60)
            logger.info(f"Starting campaign: {self.campaign_id}")
            logger.info("=" * 60)

            self._prepare()
            runs = self._execute_runs()
            record = self._summarize(runs)
            self._persist(record)

            self.stats["end_time"] = datetime.now().isoformat()
            self.stats["status"] = "SUCCESS"
            self.stats["summary"] = record.summary.to_dict()
            self.stats["finals"] = record.finals
            self.stats["outputs"] = record.outputs
            logger.info(
                f"Campaign completed: mean={format_sci(record.summary.mean)} "
                f"median={format_sci(record.summary.median)} over {record.summary.runs} runs"
            )
            return record

        except Exception as e:
            self.stats["end_time"] = datetime.now().isoformat()
            self.stats["status"] = "FAILED"
            self.stats["errors"].append(str(e))
            logger.error(f"Campaign failed: {e}")
            raise CampaignError(f"campaign {self.campaign_id} failed: {e}") from e

        finally:
            self._save_run_stats()

    def _prepare(self) -> None:
        config = self.config
        rotation = self.rotation
        if rotation is None and config.rotation_file:
            rotation = RotationMatrix.load(config.rotation_file)
        self.benchmark = make_benchmark(config.function_id, config.dimension, config.seed, rotation)
        self.rotation = self.benchmark.rotation
        if self.rotation is not None:
            path = self.output_dir / f"rotation_{config.function_id}_{config.dimension}.txt"
            self.rotation_path = str(self.rotation.save(path))
            logger.info(
                f"Rotation written to {path} (orthogonality error {self.rotation.orthogonality_error():.2e})"
            )

    def _execute_runs(self) -> List[RunRecord]:
        config = self.config
        indices = list(range(config.runs))
        logger.info(f"Executing {config.runs} runs of {config.algorithm} on {self.benchmark.name} with {config.workers} worker(s)")

        if config.workers > 1 and config.runs > 1:
            with ProcessPoolExecutor(max_workers=config.workers) as pool:
                # map yields in submission order
                runs = list(pool.map(execute_run, [config] * len(indices), indices, [self.rotation] * len(indices)))
        else:
            runs = []
            for index in indices:
                runs.append(execute_run(config, index, self.rotation))
                self.stats["runs_completed"] = len(runs)
        self.stats["runs_completed"] = len(runs)
        return runs

    def _summarize(self, runs: List[RunRecord]) -> CampaignRecord:
        return CampaignRecord(
            config=self.config.reproducibility_dict(),
            runs=runs,
            summary=Summary.from_finals([run.final_best_energy for run in runs]),
            run_seeds=[run.seed for run in runs],
            t_gen_0=self.config.t_gen_0,
        )

    def _persist(self, record: CampaignRecord) -> None:
        config = self.config
        outputs: Dict[str, str] = {}
        if config.trace or config.trace_members:
            for run in record.runs:
                path = write_trace(run, self.output_dir / f"trace_{run.run_index}.csv", record.config)
                outputs[f"trace_{run.run_index}"] = str(path)
        outputs["summary"] = str(write_summary([record], self.output_dir / SUMMARY_NAME))
        if self.rotation_path:
            outputs["rotation"] = self.rotation_path
        outputs["manifest"] = str(self.output_dir / MANIFEST_NAME)
        record.outputs = outputs

        data = manifest_data(record, self.rotation_path)
        data["config"] = config.model_dump(mode="json")
        write_manifest(data, self.output_dir / MANIFEST_NAME)

    def _save_run_stats(self) -> None:
        """Save campaign statistics to the campaign log directory"""
        try:
            log_file = log_campaign_summary(self.campaign_id, self.stats)
            if log_file:
                logger.info(f"Campaign statistics saved to: {log_file}")
        except Exception as e:
            logger.error(f"Failed to save campaign statistics: {e}")


def run_campaign(config: CampaignConfig) -> CampaignRecord:
    """
    Convenience function to run and persist one campaign

    Args:
        config: Validated campaign configuration

    Returns:
        CampaignRecord: runs, summary and written files
    """
    return CampaignRunner(config).run()


def sweep_config(config: CampaignConfig, index: int, t_gen_0: float, rotation_file: Optional[str]) -> CampaignConfig:
    """Standalone csa campaign of the ``index``-th sweep temperature."""
    return config.model_copy(
        update={
            "algorithm": "csa",
            "t_gen_0": float(t_gen_0),
            "seed": derive_seed(config.seed, SWEEP_KEY, index),
            "rotation_file": rotation_file,
            "output_dir": str(Path(config.output_dir) / f"t_gen_{index}"),
        }
    )


def sweep_tgen(config: CampaignConfig) -> List[CampaignRecord]:
    """
    B-CSA sweep: one csa campaign per initial generation temperature

    Each member campaign runs on its own sub-seed and writes its own
    directory, so it can be reproduced alone from its manifest. All members
    share the parent campaign's rotation. The member with the lowest mean
    (the first on ties) is marked as the B-CSA result.

    Args:
        config: Campaign configuration with algorithm b-csa

    Returns:
        List[CampaignRecord]: one record per sweep temperature, in sweep order
    """
    if config.algorithm != "b-csa":
        raise ConfigurationError(f"sweep_tgen needs algorithm b-csa, got {config.algorithm}")

    output_dir = Path(config.output_dir)
    rotation_file = config.rotation_file
    if rotation_file is None:
        benchmark = make_benchmark(config.function_id, config.dimension, config.seed)
        if benchmark.rotation is not None:
            path = output_dir / f"rotation_{config.function_id}_{config.dimension}.txt"
            rotation_file = str(benchmark.rotation.save(path))

    records = []
    for index, t_gen_0 in enumerate(config.t_gen_sweep):
        logger.info(f"Sweep member {index}: t_gen_0={t_gen_0}")
        records.append(run_campaign(sweep_config(config, index, t_gen_0, rotation_file)))

    for record in records:
        record.parent_algorithm = config.algorithm
    best = min(range(len(records)), key=lambda i: records[i].summary.mean)
    records[best].selected = True
    logger.info(f"Sweep result: t_gen_0={records[best].t_gen_0} with mean {format_sci(records[best].summary.mean)}")

    summary_path = write_summary(records, output_dir / SUMMARY_NAME, sweep=True)
    write_manifest(
        {
            "config": config.model_dump(mode="json"),
            "seed": config.seed,
            "rotation": rotation_file,
            "selected_t_gen_0": records[best].t_gen_0,
            "selected_index": best,
            "sweep": [
                {
                    "config": record.config,
                    "t_gen_0": record.t_gen_0,
                    "seed": record.config["seed"],
                    "summary": record.summary.to_dict(),
                    "selected": record.selected,
                    "manifest": record.outputs.get("manifest"),
                }
                for record in records
            ],
            "outputs": {"summary": str(summary_path)},
        },
        output_dir / MANIFEST_NAME,
    )
    return records
