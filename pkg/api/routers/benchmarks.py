"""Router for benchmark function endpoints.

Lists the fourteen benchmark functions and evaluates one of them at a point,
building the same campaign rotation as the harness for f9..f14.
"""
import logging
from typing import List

from fastapi import APIRouter, HTTPException
from pydantic import BaseModel, Field, field_validator

from annealing.benchmarks import FUNCTIONS, evaluate, make_benchmark
from annealing.errors import ConfigurationError, EvaluationError

# Configure logger for this module
logger = logging.getLogger(__name__)

router = APIRouter()


class EvaluateInput(BaseModel):
    """Input model for the evaluate endpoint.

    Attributes:
        function_id (int): Benchmark id 1..14.
        x (List[float]): The point; its length is the dimension D.
        seed (int): Campaign seed selecting the rotation of f9..f14.
    """
    function_id: int = Field(ge=1, le=14)
    x: List[float]
    seed: int = Field(default=0, ge=0, lt=2 ** 64)

    @field_validator("x")
    @classmethod
    def validate_point(cls, v):
        """A point needs at least one coordinate."""
        if not v:
            raise ValueError("x must hold at least one coordinate")
        return v


@router.get("/benchmarks")
async def list_benchmarks():
    """Return every benchmark with its name, input range and group."""
    return [
        {
            "function_id": entry.function_id,
            "name": entry.name,
            "lower": -entry.bound,
            "upper": entry.bound,
            "group": entry.group,
            "rotated": entry.rotated,
        }
        for entry in FUNCTIONS.values()
    ]


@router.post("/benchmarks/evaluate")
def evaluate_benchmark(input: EvaluateInput):
    """
    Evaluate a benchmark function at one point.

    Raises:
        HTTPException 422: The dimension does not suit the function
        HTTPException 500: The function value is not finite
    """
    try:
        spec = make_benchmark(input.function_id, len(input.x), input.seed)
        energy = evaluate(spec, input.x)
    except ConfigurationError as e:
        raise HTTPException(status_code=422, detail=str(e))
    if energy != energy or abs(energy) == float("inf"):
        error = EvaluationError(f"{spec.name} is not finite at {input.x}")
        logger.error(str(error))
        raise HTTPException(status_code=500, detail=str(error))
    return {"function": spec.name, "dimension": spec.dimension, "energy": energy}
