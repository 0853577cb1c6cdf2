"""
Centralized Logging Configuration Module

This module provides centralized logging configuration and utilities
for the annealing toolkit. It sets up:
1. Console and file logging shared by every module (annealing_run.log)
2. Campaign run statistics saved as JSON (logs/campaigns/)
"""

import os
import sys
import json
import logging
from pathlib import Path
from typing import Any, Dict

from dotenv import load_dotenv

load_dotenv()

# Constants for log directories
PROJECT_ROOT = Path(__file__).parent.parent.absolute()
LOG_ROOT = Path(os.getenv("ANNEALING_LOG_DIR", PROJECT_ROOT / "logs"))
CAMPAIGN_LOG_DIR = LOG_ROOT / "campaigns"

CAMPAIGN_LOG_DIR.mkdir(parents=True, exist_ok=True)

# Log file paths
RUN_LOG_FILE = LOG_ROOT / "annealing_run.log"
CAMPAIGN_SUMMARY_PATTERN = "campaign_{}.json"  # Formatted with campaign id

LOG_FORMAT = "%(asctime)s [%(name)s] [%(levelname)s] %(message)s"


def get_logger(name: str, level: int = logging.INFO) -> logging.Logger:
    """
    Get a configured logger with the specified name and level.

    Args:
        name: Name for the logger (typically __name__ of the calling module)
        level: Logging level (default: logging.INFO)

    Returns:
        Configured logging.Logger instance
    """
    logger = logging.getLogger(name)
    logger.setLevel(level)

    # Avoid adding handlers multiple times
    if not logger.handlers:
        console_handler = logging.StreamHandler(sys.stdout)
        console_handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logger.addHandler(console_handler)

        file_handler = logging.FileHandler(RUN_LOG_FILE)
        file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logger.addHandler(file_handler)
        logger.propagate = False

    return logger


def configure_root_logger(level: int = logging.INFO) -> None:
    """
    Configure the root logger for the entire application.

    Args:
        level: Logging level (default: logging.INFO)
    """
    logging.basicConfig(
        level=level,
        format=LOG_FORMAT,
        handlers=[
            logging.StreamHandler(sys.stdout),
            logging.FileHandler(RUN_LOG_FILE)
        ]
    )


def set_level(level: int) -> None:
    """Apply a level to the root logger and every toolkit logger."""
    logging.getLogger().setLevel(level)
    for name in list(logging.root.manager.loggerDict):
        if name.startswith(("annealing", "api", "cli", "logs")):
            logging.getLogger(name).setLevel(level)


def log_campaign_summary(campaign_id: str, data: Dict[str, Any]) -> str:
    """
    Save campaign run statistics to a JSON file in the campaign log directory.

    Args:
        campaign_id: Unique identifier for the campaign (timestamp, algorithm, function, D)
        data: Dict containing run statistics and metadata

    Returns:
        Path to the created log file, or "" when it could not be written
    """
    log_file = CAMPAIGN_LOG_DIR / CAMPAIGN_SUMMARY_PATTERN.format(campaign_id)
    logger = get_logger(__name__)

    try:
        with open(log_file, "w", encoding="utf-8") as f:
            json.dump(data, f, indent=2, default=str)

        logger.info(f"Campaign summary saved to: {log_file}")
        return str(log_file)

    except OSError as e:
        logger.error(f"Failed to save campaign summary: {e}")
        return ""


def get_campaign_logs(limit: int = 10) -> Dict[str, Dict]:
    """
    Get the most recent campaign logs.

    Args:
        limit: Maximum number of logs to return (default: 10)

    Returns:
        Dict mapping campaign ids to their summary data
    """
    logs = {}

    try:
        campaign_files = list(CAMPAIGN_LOG_DIR.glob("campaign_*.json"))
        # Newest first
        campaign_files.sort(key=lambda x: os.path.getmtime(x), reverse=True)

        for log_file in campaign_files[:limit]:
            with open(log_file, "r", encoding="utf-8") as f:
                data = json.load(f)
                campaign_id = data.get("campaign_id", log_file.stem.replace("campaign_", ""))
                logs[campaign_id] = data

        return logs

    except (OSError, json.JSONDecodeError) as e:
        logger = get_logger(__name__)
        logger.error(f"Failed to get campaign logs: {e}")
        return {}


# CLI functionality when run directly
if __name__ == "__main__":
    import argparse
    parser = argparse.ArgumentParser(description="Campaign Logging Utility")

    subparsers = parser.add_subparsers(dest="command", help="Command to execute")

    campaign_parser = subparsers.add_parser("campaigns", help="List campaign run logs")
    campaign_parser.add_argument("-l", "--limit", type=int, default=5, help="Max number of logs to show")

    args = parser.parse_args()

    if args.command == "campaigns":
        print(f"=== Recent Campaigns (limit={args.limit}) ===")
        logs = get_campaign_logs(args.limit)
        for campaign_id, data in logs.items():
            status = data.get("status", "UNKNOWN")
            config = data.get("config", {})
            algorithm = config.get("algorithm", "?")
            function_id = config.get("function_id", "?")
            runs = data.get("runs_completed", 0)
            print(f"Campaign {campaign_id}: Status={status}, Algorithm={algorithm}, "
                  f"Function=f{function_id}, Runs={runs}")
    else:
        parser.print_help()
