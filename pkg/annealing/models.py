"""Campaign configuration model.

Field names are the configuration keys accepted in config files, CLI
overrides and API bodies.
"""

import os
from typing import Any, Dict, List, Literal, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .csa import DEFAULT_ALPHA, DEFAULT_T_AC_0, TGEN_SWEEP
from .ensemble import DEFAULT_BOUNDARY_POLICY
from .orbit import BETA_RANGE, DEFAULT_BETA, DEFAULT_MU, DEFAULT_PHI, MAX_FACTOR
from .po_csa import DEFAULT_DELTA, MAX_DELTA

load_dotenv()

DEFAULT_OUTPUT_DIR = "results"
DEFAULT_RUNS = 25

# keys that change where or how fast a campaign runs, never what it computes
RUNTIME_KEYS = ("output_dir", "workers")


def default_output_dir() -> str:
    return os.getenv("ANNEALING_OUTPUT_DIR", DEFAULT_OUTPUT_DIR)


def default_workers() -> int:
    return int(os.getenv("ANNEALING_WORKERS", "1"))


class CampaignConfig(BaseModel):
    """One campaign: an algorithm on one benchmark, repeated over seeded runs."""

    model_config = ConfigDict(extra="forbid")

    algorithm: Literal["csa", "r-csa", "b-csa", "po-csa"]
    function_id: int = Field(ge=1, le=14)
    dimension: int = Field(ge=2)
    optimizers: Optional[int] = Field(default=None, ge=2)
    budget_per_optimizer: int = Field(ge=1)
    runs: int = Field(default=DEFAULT_RUNS, ge=1)
    seed: int = Field(default=0, ge=0, lt=2 ** 64)
    t_gen_0: Optional[float] = Field(default=None, gt=0)
    t_gen_sweep: List[float] = Field(default_factory=lambda: list(TGEN_SWEEP))
    t_ac_0: float = Field(default=DEFAULT_T_AC_0, gt=0)
    alpha: float = Field(default=DEFAULT_ALPHA, gt=0, le=0.1)
    beta: float = Field(default=DEFAULT_BETA, ge=BETA_RANGE[0], le=BETA_RANGE[1])
    phi: float = Field(default=DEFAULT_PHI, gt=0, le=MAX_FACTOR)
    mu: float = Field(default=DEFAULT_MU, gt=0, le=MAX_FACTOR)
    delta: float = Field(default=DEFAULT_DELTA, ge=0, le=MAX_DELTA)
    max_iterations: Optional[int] = Field(default=None, ge=0)
    boundary_policy: Literal["clamp", "reflect"] = DEFAULT_BOUNDARY_POLICY
    rotation_file: Optional[str] = None
    trace: bool = False
    trace_members: bool = False
    workers: int = Field(default_factory=default_workers, ge=1)
    output_dir: str = Field(default_factory=default_output_dir)

    @field_validator("t_gen_sweep", mode="before")
    @classmethod
    def split_sweep(cls, v):
        """Accept the comma-separated form used in config files."""
        if isinstance(v, str):
            return [float(item) for item in v.split(",") if item.strip()]
        return v

    @field_validator("t_gen_sweep")
    @classmethod
    def positive_sweep(cls, v: List[float]) -> List[float]:
        if not v:
            raise ValueError("sweep needs at least one initial temperature")
        if any(t <= 0 for t in v):
            raise ValueError(f"sweep temperatures must be positive, got {v}")
        return v

    @model_validator(mode="after")
    def check_algorithm(self) -> "CampaignConfig":
        if self.optimizers is None:
            self.optimizers = self.dimension
        if self.algorithm == "csa" and self.t_gen_0 is None:
            raise ValueError("t_gen_0 is required for algorithm csa")
        return self

    @property
    def m(self) -> int:
        return int(self.optimizers)

    def reproducibility_dict(self) -> Dict[str, Any]:
        """Every key that influences results, in a stable order."""
        return self.model_dump(mode="json", exclude=set(RUNTIME_KEYS))
