"""
Perpetual Orbit

Per-member dispersion variables that orbit the best member's value. Each
non-best value moves geometrically, by (1 + phi) upwards or (1 - phi)
downwards, between an upper bound beta * V_best and a lower bound
V_best / beta. A move that would reach a bound is undone, the direction flips
and that bound widens by (1 + mu) or (1 - mu). The best member's value is
frozen; a new best rebuilds every bracket around its value.
"""

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .errors import ConfigurationError
from .rng import RngStream

DEFAULT_BETA = 10.0
DEFAULT_PHI = 0.05
DEFAULT_MU = 0.05
BETA_RANGE = (10.0, 100.0)
MAX_FACTOR = 0.1
INITIAL_VALUE_RANGE = 100.0


@dataclass
class OrbitState:
    """Orbit of m dispersion variables.

    ``directions`` holds +1/-1 for every member; the best member keeps its
    stored direction but is exempt from movement (rendered as 0 by
    ``trace_directions``) and resumes with it once it loses best status.
    """

    values: np.ndarray
    directions: np.ndarray
    upper: np.ndarray
    lower: np.ndarray
    beta: float
    phi: float
    mu: float
    best_member: int

    @property
    def m(self) -> int:
        return int(self.values.shape[0])

    @property
    def reference(self) -> float:
        return float(self.values[self.best_member])

    def trace_directions(self) -> np.ndarray:
        rendered = self.directions.copy()
        rendered[self.best_member] = 0
        return rendered

    def copy(self) -> "OrbitState":
        return replace(
            self,
            values=self.values.copy(),
            directions=self.directions.copy(),
            upper=self.upper.copy(),
            lower=self.lower.copy(),
        )


def check_orbit_parameters(beta: float, phi: float, mu: float) -> None:
    if not BETA_RANGE[0] <= beta <= BETA_RANGE[1]:
        raise ConfigurationError(f"boundary multiplier beta must lie in [{BETA_RANGE[0]:g}, {BETA_RANGE[1]:g}], got {beta}")
    if not 0 < phi <= MAX_FACTOR:
        raise ConfigurationError(f"movement factor phi must lie in (0, {MAX_FACTOR}], got {phi}")
    if not 0 < mu <= MAX_FACTOR:
        raise ConfigurationError(f"bound factor mu must lie in (0, {MAX_FACTOR}], got {mu}")


def init_orbit(
    m: int,
    v_best_hint: Optional[float] = None,
    beta: float = DEFAULT_BETA,
    phi: float = DEFAULT_PHI,
    mu: float = DEFAULT_MU,
    stream: Optional[RngStream] = None,
    best_member: int = 0,
) -> OrbitState:
    """Random values on (0, 100] and random directions, bracketed around the best member.

    ``v_best_hint`` overrides the best member's value only; the draw is still
    consumed from ``stream`` so the stream position does not depend on it.
    """
    check_orbit_parameters(beta, phi, mu)
    if stream is None:
        raise ConfigurationError("init_orbit needs a random stream")
    if not 0 <= best_member < m:
        raise ConfigurationError(f"best member {best_member} out of range for m={m}")

    values = INITIAL_VALUE_RANGE * (1.0 - stream.uniforms(m))
    directions = np.where(stream.uniforms(m) < 0.5, -1, 1).astype(np.int8)
    if v_best_hint is not None:
        if not v_best_hint > 0:
            raise ConfigurationError(f"reference value must be positive, got {v_best_hint}")
        values[best_member] = float(v_best_hint)

    state = OrbitState(
        values=values,
        directions=directions,
        upper=np.empty(m),
        lower=np.empty(m),
        beta=float(beta),
        phi=float(phi),
        mu=float(mu),
        best_member=best_member,
    )
    return rebase_bounds(state, best_member)


def rebase_bounds(state: OrbitState, new_best: int) -> OrbitState:
    """Make ``new_best`` the reference and rebuild every bracket from its value, in place.

    Earlier bound expansions are discarded; directions are kept.
    """
    if not 0 <= new_best < state.m:
        raise ConfigurationError(f"best member {new_best} out of range for m={state.m}")
    state.best_member = int(new_best)
    v_best = state.values[new_best]
    state.upper[:] = state.beta * v_best
    state.lower[:] = v_best / state.beta
    return state


def po_step(state: OrbitState) -> OrbitState:
    """Advance every non-best value one step in place, bouncing off its bounds."""
    moving = np.ones(state.m, dtype=bool)
    moving[state.best_member] = False
    rising = moving & (state.directions > 0)
    falling = moving & (state.directions < 0)

    moved = state.values * np.where(rising, 1.0 + state.phi, np.where(falling, 1.0 - state.phi, 1.0))
    hit_upper = rising & (moved >= state.upper)
    hit_lower = falling & (moved <= state.lower)
    free = ~(hit_upper | hit_lower)

    state.values[free] = moved[free]
    state.directions[hit_upper] = -1
    state.directions[hit_lower] = 1
    state.upper[hit_upper] *= 1.0 + state.mu
    state.lower[hit_lower] *= 1.0 - state.mu
    return state
