"""
Ensemble Core

The substrate shared by every annealing variant: solutions, energies, the
objective interface, best-so-far tracking and evaluation budgeting.

Probes leaving the objective's input box are clamped to it (the default) or
reflected back in. Every evaluation is counted in ``Ensemble.eval_count``; a
full generation step costs exactly m.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from logs.logger import get_logger

from .errors import ConfigurationError, EvaluationError
from .rng import RngStream, cauchy_from_uniform

logger = get_logger(__name__)

BOUNDARY_POLICIES = ("clamp", "reflect")
DEFAULT_BOUNDARY_POLICY = "clamp"


@dataclass
class Solution:
    """A point of the search box and its energy E(x)."""

    coords: np.ndarray
    energy: float


@dataclass
class ObjectiveFunction:
    """A bounded-box continuous objective.

    ``func`` maps an array whose last axis has length ``dimension`` to the
    energies of the leading axes; with ``vectorized=False`` it is called one
    point at a time instead.
    """

    name: str
    dimension: int
    lower: np.ndarray
    upper: np.ndarray
    func: Callable[[np.ndarray], object]
    optimum_value: Optional[float] = None
    vectorized: bool = True

    def __post_init__(self):
        if self.dimension < 1:
            raise ConfigurationError(f"{self.name}: dimension must be positive, got {self.dimension}")
        self.lower = np.broadcast_to(np.asarray(self.lower, dtype=float), (self.dimension,)).copy()
        self.upper = np.broadcast_to(np.asarray(self.upper, dtype=float), (self.dimension,)).copy()
        if not np.all(self.lower < self.upper):
            raise ConfigurationError(f"{self.name}: every lower bound must be below its upper bound")

    def _check_shape(self, points: np.ndarray) -> None:
        if points.shape[-1] != self.dimension:
            raise ConfigurationError(
                f"{self.name}: dimension mismatch, expected {self.dimension} coordinates "
                f"but got {points.shape[-1]}"
            )

    def evaluate(self, coords: Sequence[float]) -> float:
        """Energy of a single point."""
        point = np.asarray(coords, dtype=float)
        if point.ndim != 1:
            raise ConfigurationError(f"{self.name}: evaluate expects a single point")
        self._check_shape(point)
        energy = float(self.func(point))
        if not math.isfinite(energy):
            raise EvaluationError(f"{self.name} returned {energy} at coordinates {point.tolist()}")
        return energy

    def evaluate_many(self, points: np.ndarray) -> np.ndarray:
        """Energies of a (k, D) batch of points, as a length-k array."""
        batch = np.asarray(points, dtype=float)
        if batch.ndim != 2:
            raise ConfigurationError(f"{self.name}: evaluate_many expects a (k, D) array")
        self._check_shape(batch)
        if self.vectorized:
            energies = np.asarray(self.func(batch), dtype=float).reshape(batch.shape[0])
        else:
            energies = np.array([float(self.func(point)) for point in batch])
        bad = ~np.isfinite(energies)
        if bad.any():
            index = int(np.flatnonzero(bad)[0])
            raise EvaluationError(
                f"{self.name} returned {energies[index]} at coordinates {batch[index].tolist()}"
            )
        return energies

    def clamp(self, coords: np.ndarray) -> np.ndarray:
        return np.clip(coords, self.lower, self.upper)

    def reflect(self, coords: np.ndarray) -> np.ndarray:
        """Mirror out-of-box coordinates at the bounds until they land inside.

        In-box coordinates are returned unchanged; non-finite ones are clamped.
        """
        coords = np.asarray(coords, dtype=float)
        width = self.upper - self.lower
        with np.errstate(invalid="ignore"):
            folded = np.mod(coords - self.lower, 2.0 * width)
            mirrored = np.clip(self.lower + width - np.abs(folded - width), self.lower, self.upper)
        inside = (coords >= self.lower) & (coords <= self.upper)
        mirrored = np.where(np.isfinite(coords), mirrored, self.clamp(coords))
        return np.where(inside, coords, mirrored)

    def contains(self, coords: np.ndarray) -> bool:
        coords = np.asarray(coords, dtype=float)
        return bool(np.all((coords >= self.lower) & (coords <= self.upper)))


@dataclass
class Ensemble:
    """The m coupled optimizers.

    Current solutions are stored row-wise in ``positions``/``energies``;
    ``best_snapshot`` is the best solution ever accepted, found by member
    ``best_index``.
    """

    positions: np.ndarray
    energies: np.ndarray
    best_index: int
    best_snapshot: Solution
    eval_count: int = 0
    iteration: int = 0
    history: List[float] = field(default_factory=list)

    @property
    def m(self) -> int:
        return int(self.energies.shape[0])

    @property
    def members(self) -> List[Solution]:
        return [self.member(i) for i in range(self.m)]

    def member(self, index: int) -> Solution:
        return Solution(self.positions[index].copy(), float(self.energies[index]))

    def record_best(self) -> None:
        """Append the current best-so-far energy to the history."""
        self.history.append(self.best_snapshot.energy)


def initialize_ensemble(objective: ObjectiveFunction, m: int, stream: RngStream) -> Ensemble:
    """Sample m solutions uniformly in the input box and evaluate them."""
    if m < 2:
        raise ConfigurationError(f"a coupled ensemble needs at least 2 optimizers, got m={m}")

    draws = stream.uniforms((m, objective.dimension))
    positions = objective.lower + (objective.upper - objective.lower) * draws
    energies = objective.evaluate_many(positions)

    # argmin returns the lowest index on ties
    best = int(np.argmin(energies))
    logger.debug(f"Initialized {m} optimizers on {objective.name}, best E={energies[best]:.6e} (member {best})")
    return Ensemble(
        positions=positions,
        energies=energies,
        best_index=best,
        best_snapshot=Solution(positions[best].copy(), float(energies[best])),
        eval_count=m,
    )


def check_boundary_policy(policy: str) -> str:
    if policy not in BOUNDARY_POLICIES:
        raise ConfigurationError(f"unknown boundary policy '{policy}', expected one of {BOUNDARY_POLICIES}")
    return policy


def perturb(
    coords: np.ndarray,
    epsilon: np.ndarray,
    t_gen,
    objective: ObjectiveFunction,
    policy: str = DEFAULT_BOUNDARY_POLICY,
) -> np.ndarray:
    """y = x + epsilon * T_gen, brought back into the input box by ``policy``."""
    probe = coords + epsilon * t_gen
    if check_boundary_policy(policy) == "reflect":
        return objective.reflect(probe)
    return objective.clamp(probe)


def generate_probe(
    x: Solution,
    t_gen: float,
    stream: RngStream,
    objective: ObjectiveFunction,
    ensemble: Optional[Ensemble] = None,
    policy: str = DEFAULT_BOUNDARY_POLICY,
) -> Solution:
    """Cauchy probe around ``x`` with dispersion ``t_gen``.

    When ``ensemble`` is given its evaluation count is charged.
    """
    if not t_gen > 0:
        raise ConfigurationError(f"generation temperature must be positive, got {t_gen}")
    epsilon = stream.cauchy_vector(objective.dimension)
    coords = perturb(x.coords, epsilon, t_gen, objective, policy)
    energy = objective.evaluate(coords)
    if ensemble is not None:
        ensemble.eval_count += 1
    return Solution(coords, energy)


def generate_probes(
    ensemble: Ensemble,
    t_gen,
    streams: Sequence[RngStream],
    objective: ObjectiveFunction,
    policy: str = DEFAULT_BOUNDARY_POLICY,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """One probe per member, member i drawing from ``streams[i]``.

    ``t_gen`` is a scalar or one temperature per member. Each stream yields the
    probe noise followed by the member's acceptance uniform r, so the sequence
    matches ``generate_probe`` then ``uniform01``. Returns the probe positions
    (m, D), their energies (m,) and r (m,); the batch is evaluated at once.
    """
    m = ensemble.m
    temperatures = np.broadcast_to(np.asarray(t_gen, dtype=float), (m,))
    if not np.all(temperatures > 0):
        raise ConfigurationError(f"generation temperatures must be positive, got {temperatures.tolist()}")
    if len(streams) != m:
        raise ConfigurationError(f"expected {m} member streams, got {len(streams)}")

    uniforms = np.empty((m, objective.dimension))
    r = np.empty(m)
    for i, stream in enumerate(streams):
        uniforms[i], r[i] = stream.probe_uniforms(objective.dimension)
    epsilon = cauchy_from_uniform(uniforms)
    positions = perturb(ensemble.positions, epsilon, temperatures[:, None], objective, policy)
    energies = objective.evaluate_many(positions)
    ensemble.eval_count += m
    return positions, energies, r


def track_best(ensemble: Ensemble, candidate: Solution, member_index: int) -> bool:
    """Replace the best-so-far iff ``candidate`` is strictly better."""
    if candidate.energy < ensemble.best_snapshot.energy:
        ensemble.best_snapshot = Solution(np.array(candidate.coords, dtype=float), float(candidate.energy))
        ensemble.best_index = int(member_index)
        return True
    return False


def apply_acceptance(ensemble: Ensemble, positions: np.ndarray, energies: np.ndarray, accepted: np.ndarray) -> bool:
    """Move accepted members to their probes and update the best-so-far.

    Equivalent to sweeping members in index order with ``track_best``: the
    iteration's lowest accepted energy wins, the lowest index on ties.
    Returns whether a new global best was found.
    """
    indices = np.flatnonzero(accepted)
    if indices.size == 0:
        return False
    ensemble.positions[indices] = positions[indices]
    ensemble.energies[indices] = energies[indices]
    winner = int(indices[np.argmin(energies[indices])])
    return track_best(ensemble, Solution(positions[winner].copy(), float(energies[winner])), winner)
