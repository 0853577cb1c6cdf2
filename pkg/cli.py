"""CLI for running annealing campaigns, B-CSA sweeps, reports and figure traces."""
import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from annealing.config import build_config
from annealing.errors import AnnealingError, ConfigurationError
from annealing.harness import run_campaign, sweep_tgen
from annealing.report import SUMMARY_NAME, format_sci, report

# Import centralized logging module
from logs.logger import configure_root_logger, get_logger, set_level

configure_root_logger(level=logging.INFO)
logger = get_logger("cli")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2

# flag dest -> config key
FLAG_KEYS = {
    "algo": "algorithm",
    "function": "function_id",
    "dim": "dimension",
    "optimizers": "optimizers",
    "budget": "budget_per_optimizer",
    "runs": "runs",
    "seed": "seed",
    "out": "output_dir",
    "tgen0": "t_gen_0",
    "tac0": "t_ac_0",
    "alpha": "alpha",
    "beta": "beta",
    "phi": "phi",
    "mu": "mu",
    "delta": "delta",
    "iterations": "max_iterations",
    "workers": "workers",
    "rotation": "rotation_file",
    "boundary": "boundary_policy",
}


def add_campaign_arguments(parser: argparse.ArgumentParser) -> None:
    """Flags shared by run, sweep and trace; every flag overrides the config file."""
    parser.add_argument("--config", help="key=value config file whose keys are the campaign fields")
    parser.add_argument("--algo", choices=["csa", "r-csa", "b-csa", "po-csa"], help="Algorithm")
    parser.add_argument("--function", type=int, help="Benchmark function id 1..14")
    parser.add_argument("--dim", type=int, help="Problem dimension D")
    parser.add_argument("--optimizers", type=int, help="Number of coupled optimizers m (default D)")
    parser.add_argument("--budget", type=int, help="Function evaluations per optimizer")
    parser.add_argument("--runs", type=int, help="Independent seeded runs (default 25)")
    parser.add_argument("--seed", type=int, help="Campaign seed")
    parser.add_argument("--out", help="Output directory (default $ANNEALING_OUTPUT_DIR or results)")
    parser.add_argument("--trace", action="store_true", default=None, help="Write per-iteration trace files")
    parser.add_argument("--tgen0", type=float, help="Initial generation temperature")
    parser.add_argument("--tac0", type=float, help="Initial acceptance temperature")
    parser.add_argument("--alpha", type=float, help="Acceptance temperature rate")
    parser.add_argument("--beta", type=float, help="Orbit boundary multiplier")
    parser.add_argument("--phi", type=float, help="Orbit movement factor")
    parser.add_argument("--mu", type=float, help="Orbit bound expansion factor")
    parser.add_argument("--delta", type=float, help="Minimum relative gain for deterministic acceptance")
    parser.add_argument("--iterations", type=int, help="Stop each run after this many iterations")
    parser.add_argument("--workers", type=int, help="Worker processes for independent runs")
    parser.add_argument("--rotation", help="Load the rotation of f9..f14 from this file")
    parser.add_argument("--boundary", choices=["clamp", "reflect"], help="Handling of probes outside the input box (default clamp)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Coupled simulated annealing benchmark harness.")
    parser.add_argument("-v", "--verbose", action="store_true", help="Enable verbose output")
    subparsers = parser.add_subparsers(dest="command", required=True)

    add_campaign_arguments(subparsers.add_parser("run", help="Run one campaign"))
    add_campaign_arguments(subparsers.add_parser("sweep", help="B-CSA sweep over the initial generation temperatures"))
    add_campaign_arguments(subparsers.add_parser("trace", help="Run one campaign and emit per-iteration figure data"))

    report_parser = subparsers.add_parser("report", help="Merge campaign manifests into one summary table")
    report_parser.add_argument("sources", nargs="*", help="Campaign directories or manifest.json files")
    report_parser.add_argument("--out", default=".", help="Directory of the merged summary.csv")
    return parser


def collect_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    return {key: getattr(args, dest, None) for dest, key in FLAG_KEYS.items()}


def format_validation_error(error: ValidationError) -> List[str]:
    """One ``config error: <field>: <message>`` line per violation."""
    lines = []
    for violation in error.errors():
        field = ".".join(str(part) for part in violation["loc"]) or "config"
        lines.append(f"config error: {field}: {violation['msg']}")
    return lines


def command_campaign(args: argparse.Namespace) -> int:
    overrides = collect_overrides(args)
    overrides["trace"] = args.trace
    if args.command == "trace":
        overrides["trace"] = True
        overrides["trace_members"] = True
    config = build_config(args.config, overrides)

    if args.command == "sweep":
        records = sweep_tgen(config)
        for record in records:
            mark = " *" if record.selected else ""
            logger.info(f"t_gen_0={record.t_gen_0:<8g} mean={format_sci(record.summary.mean)}{mark}")
        logger.info(f"Sweep summary: {Path(config.output_dir) / SUMMARY_NAME}")
        return EXIT_OK

    record = run_campaign(config)
    logger.info(f"Summary: {record.outputs.get('summary')}")
    logger.info(f"Manifest: {record.outputs.get('manifest')}")
    return EXIT_OK


def command_report(args: argparse.Namespace) -> int:
    path = report(args.sources, Path(args.out) / SUMMARY_NAME)
    logger.info(f"Report: {path}")
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """
    Main entry point for the CLI application.

    Returns the process exit code: 0 on success, 1 when a campaign or report
    fails, 2 on configuration violations.
    """
    args = build_parser().parse_args(argv)
    if args.verbose:
        set_level(logging.DEBUG)

    try:
        if args.command == "report":
            return command_report(args)
        return command_campaign(args)

    except ValidationError as e:
        for line in format_validation_error(e):
            print(line, file=sys.stderr)
        return EXIT_CONFIG
    except ConfigurationError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except AnnealingError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILURE
    except KeyboardInterrupt:
        logger.warning("Interrupted")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
