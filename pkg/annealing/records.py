"""Run and campaign records: the persistence units of the harness."""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np


@dataclass
class Trace:
    """Per-iteration series of one run. Row 0 is the state after initialization."""

    iteration: List[int] = field(default_factory=list)
    best_energy: List[float] = field(default_factory=list)
    t_ac: List[float] = field(default_factory=list)
    sigma2: List[float] = field(default_factory=list)
    t_gen_ref: List[float] = field(default_factory=list)
    t_gen_members: Optional[List[np.ndarray]] = None
    directions: Optional[List[np.ndarray]] = None

    def record(
        self,
        iteration: int,
        best_energy: float,
        t_ac: float,
        sigma2: float,
        t_gen_ref: float,
        t_gen_members: Optional[np.ndarray] = None,
        directions: Optional[np.ndarray] = None,
    ) -> None:
        self.iteration.append(int(iteration))
        self.best_energy.append(float(best_energy))
        self.t_ac.append(float(t_ac))
        self.sigma2.append(float(sigma2))
        self.t_gen_ref.append(float(t_gen_ref))
        if t_gen_members is not None:
            if self.t_gen_members is None:
                self.t_gen_members = []
            self.t_gen_members.append(np.array(t_gen_members, dtype=float))
        if directions is not None:
            if self.directions is None:
                self.directions = []
            self.directions.append(np.array(directions, dtype=int))

    def __len__(self) -> int:
        return len(self.iteration)


@dataclass
class RunRecord:
    """Outcome of one seeded run of one algorithm."""

    algorithm: str
    function: str
    dimension: int
    optimizers: int
    seed: int
    parameters: Dict[str, Any]
    final_best_energy: float
    best_coords: np.ndarray
    eval_count: int
    iterations: int
    best_history: np.ndarray
    duration: float = 0.0
    t_gen_0: Optional[float] = None
    trace: Optional[Trace] = None
    members: List["RunRecord"] = field(default_factory=list)
    run_index: int = 0

    def to_dict(self) -> Dict[str, Any]:
        """JSON-safe view without the per-iteration series."""
        data = {
            "run_index": self.run_index,
            "algorithm": self.algorithm,
            "function": self.function,
            "dimension": self.dimension,
            "optimizers": self.optimizers,
            "seed": self.seed,
            "parameters": self.parameters,
            "final_best_energy": self.final_best_energy,
            "best_coords": [float(c) for c in self.best_coords],
            "eval_count": self.eval_count,
            "iterations": self.iterations,
            "t_gen_0": self.t_gen_0,
            "duration": self.duration,
        }
        if self.members:
            data["members"] = [member.to_dict() for member in self.members]
        return data


@dataclass
class Summary:
    """Aggregate of final best energies over the runs of a campaign."""

    runs: int
    mean: float
    median: float
    minimum: float
    maximum: float
    stddev: float

    @classmethod
    def from_finals(cls, finals: Sequence[float]) -> "Summary":
        values = np.asarray(finals, dtype=float)
        if values.size == 0:
            raise ValueError("cannot summarize zero runs")
        return cls(
            runs=int(values.size),
            mean=float(np.mean(values)),
            median=float(np.median(values)),
            minimum=float(np.min(values)),
            maximum=float(np.max(values)),
            # population deviation, 0 for a single run
            stddev=float(np.std(values)),
        )

    def to_dict(self) -> Dict[str, float]:
        return {
            "runs": self.runs,
            "mean": self.mean,
            "median": self.median,
            "min": self.minimum,
            "max": self.maximum,
            "stddev": self.stddev,
        }


@dataclass
class CampaignRecord:
    """All runs of one campaign plus their summary and the files written for it."""

    config: Dict[str, Any]
    runs: List[RunRecord]
    summary: Summary
    run_seeds: List[int] = field(default_factory=list)
    outputs: Dict[str, str] = field(default_factory=dict)
    t_gen_0: Optional[float] = None
    selected: bool = False
    # "b-csa" for the member campaigns of a sweep
    parent_algorithm: Optional[str] = None

    @property
    def finals(self) -> List[float]:
        return [run.final_best_energy for run in self.runs]
