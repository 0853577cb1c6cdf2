"""Router for campaign endpoints.

Runs a campaign or a B-CSA sweep on the server and returns its summary
together with the paths of the files it wrote.
"""
import logging

from fastapi import APIRouter, HTTPException

from annealing.errors import AnnealingError, ConfigurationError
from annealing.harness import run_campaign, sweep_tgen
from annealing.models import CampaignConfig

# Configure logger for this module
logger = logging.getLogger(__name__)

router = APIRouter()


def _failure(e: AnnealingError) -> HTTPException:
    """422 for configuration problems, 500 for everything else."""
    cause = e.__cause__ if e.__cause__ is not None else e
    status = 422 if isinstance(cause, ConfigurationError) else 500
    logger.error(f"Campaign request failed: {e}")
    return HTTPException(status_code=status, detail=str(e))


@router.post("/campaigns/run")
def trigger_campaign(config: CampaignConfig):
    """
    Run one campaign.

    Args:
        config (CampaignConfig): The campaign, validated from the request body

    Returns:
        Dict with the summary statistics and the written files
    """
    try:
        logger.info(f"Triggering {config.algorithm} campaign on f{config.function_id}, D={config.dimension}")
        record = run_campaign(config)
    except AnnealingError as e:
        raise _failure(e)
    return {
        "status": "success",
        "summary": record.summary.to_dict(),
        "run_seeds": record.run_seeds,
        "outputs": record.outputs,
    }


@router.post("/campaigns/sweep")
def trigger_sweep(config: CampaignConfig):
    """
    Run the B-CSA sweep: one campaign per initial generation temperature.

    Returns:
        Dict with one summary per temperature and the selected temperature
    """
    try:
        records = sweep_tgen(config)
    except AnnealingError as e:
        raise _failure(e)
    selected = next(record for record in records if record.selected)
    return {
        "status": "success",
        "selected_t_gen_0": selected.t_gen_0,
        "sweep": [
            {"t_gen_0": record.t_gen_0, "summary": record.summary.to_dict(), "selected": record.selected}
            for record in records
        ],
    }
