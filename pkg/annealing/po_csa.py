"""
Perpetual Orbit Coupled Simulated Annealing

CSA in which every optimizer owns its generation temperature, steered by the
perpetual orbit around the temperature of the optimizer that found the best
solution. Deterministic acceptance requires a minimum relative gain delta.
"""

import time
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from logs.logger import get_logger

from .csa import (
    DEFAULT_ALPHA,
    DEFAULT_T_AC_0,
    CouplingState,
    ProgressMeter,
    check_budget,
    init_coupling,
    update_coupling,
)
from .ensemble import (
    DEFAULT_BOUNDARY_POLICY,
    Ensemble,
    ObjectiveFunction,
    apply_acceptance,
    check_boundary_policy,
    generate_probes,
    initialize_ensemble,
)
from .errors import ConfigurationError
from .orbit import DEFAULT_BETA, DEFAULT_MU, DEFAULT_PHI, OrbitState, init_orbit, po_step, rebase_bounds
from .records import RunRecord, Trace
from .rng import MASTER_STREAM, RngStream, member_streams

logger = get_logger(__name__)

DEFAULT_DELTA = 0.001
MAX_DELTA = 0.05


@dataclass
class PoCsaState:
    ensemble: Ensemble
    coupling: CouplingState
    orbit: OrbitState
    delta: float

    @property
    def t_gen(self) -> np.ndarray:
        return self.orbit.values


def accept_with_min_gain(e_current: float, e_probe: float, delta: float) -> bool:
    """True iff the probe improves on the current energy by at least delta * |E|.

    At E = 0 the relative gain is undefined and any strict improvement counts.
    """
    if e_current == 0:
        return e_probe < 0
    return e_probe <= e_current - delta * abs(e_current)


def min_gain_mask(e_current: np.ndarray, e_probe: np.ndarray, delta: float) -> np.ndarray:
    """Vectorized accept_with_min_gain."""
    required = e_current - delta * np.abs(e_current)
    return np.where(e_current == 0, e_probe < 0, e_probe <= required)


def init_po_csa(
    objective: ObjectiveFunction,
    m: int,
    master: RngStream,
    beta: float = DEFAULT_BETA,
    phi: float = DEFAULT_PHI,
    mu: float = DEFAULT_MU,
    delta: float = DEFAULT_DELTA,
    alpha: float = DEFAULT_ALPHA,
    t_ac_0: float = DEFAULT_T_AC_0,
    t_gen_init: Optional[float] = None,
) -> PoCsaState:
    """Initial ensemble, coupling and orbit; the best initial member is the orbit reference.

    ``t_gen_init`` seeds the reference value only, the other members keep
    their random values on (0, 100].
    """
    if not 0 <= delta <= MAX_DELTA:
        raise ConfigurationError(f"minimum gain delta must lie in [0, {MAX_DELTA}], got {delta}")
    ensemble = initialize_ensemble(objective, m, master)
    coupling = init_coupling(ensemble.energies, t_ac_0, alpha)
    orbit = init_orbit(
        m,
        v_best_hint=t_gen_init,
        beta=beta,
        phi=phi,
        mu=mu,
        stream=master,
        best_member=ensemble.best_index,
    )
    return PoCsaState(ensemble=ensemble, coupling=coupling, orbit=orbit, delta=float(delta))


def po_csa_step(
    state: PoCsaState,
    streams: Sequence[RngStream],
    objective: ObjectiveFunction,
    allow_uphill: bool = True,
    policy: str = DEFAULT_BOUNDARY_POLICY,
) -> PoCsaState:
    """Generation with private temperatures, min-gain acceptance, rebase, variance control, orbit move.

    The state is advanced in place and returned.
    """
    ensemble = state.ensemble
    positions, energies, r = generate_probes(ensemble, state.orbit.values, streams, objective, policy)

    accepted = min_gain_mask(ensemble.energies, energies, state.delta)
    if allow_uphill:
        accepted |= state.coupling.probs > r

    if apply_acceptance(ensemble, positions, energies, accepted):
        rebase_bounds(state.orbit, ensemble.best_index)

    update_coupling(state.coupling, ensemble.energies)
    po_step(state.orbit)
    ensemble.iteration += 1
    ensemble.record_best()
    return state


def run_po_csa(
    objective: ObjectiveFunction,
    m: Optional[int] = None,
    budget_per_optimizer: int = 1,
    beta: float = DEFAULT_BETA,
    phi: float = DEFAULT_PHI,
    mu: float = DEFAULT_MU,
    delta: float = DEFAULT_DELTA,
    alpha: float = DEFAULT_ALPHA,
    seed: int = 0,
    t_ac_0: float = DEFAULT_T_AC_0,
    t_gen_init: Optional[float] = None,
    max_iterations: Optional[int] = None,
    trace: bool = False,
    trace_members: bool = False,
    allow_uphill: bool = True,
    boundary_policy: str = DEFAULT_BOUNDARY_POLICY,
) -> RunRecord:
    """Full PO-CSA campaign of one seed. ``m`` defaults to the dimension."""
    m = objective.dimension if m is None else m
    check_budget(budget_per_optimizer, m)
    check_boundary_policy(boundary_policy)
    started = time.perf_counter()

    master = RngStream(seed, MASTER_STREAM)
    state = init_po_csa(objective, m, master, beta, phi, mu, delta, alpha, t_ac_0, t_gen_init)
    streams = member_streams(seed, m)
    initial_reference = state.orbit.reference

    run_trace = Trace() if trace or trace_members else None
    state.ensemble.record_best()
    _record(run_trace, state, trace_members)

    logger.info(
        f"po-csa on {objective.name} (D={objective.dimension}, m={m}, seed={seed}, "
        f"beta={beta}, phi={phi}, mu={mu}, delta={delta})"
    )
    total = budget_per_optimizer * m
    progress = ProgressMeter(total, m)

    while state.ensemble.eval_count + m <= total and (
        max_iterations is None or state.ensemble.iteration < max_iterations
    ):
        state = po_csa_step(state, streams, objective, allow_uphill, boundary_policy)
        _record(run_trace, state, trace_members)
        if progress.crossed(state.ensemble.eval_count):
            logger.debug(
                f"  {state.ensemble.eval_count}/{total} evaluations, best E={state.ensemble.best_snapshot.energy:.6e}, "
                f"reference T_gen={state.orbit.reference:.3e}"
            )

    ensemble = state.ensemble
    duration = time.perf_counter() - started
    logger.info(
        f"po-csa finished: best E={ensemble.best_snapshot.energy:.6e} after "
        f"{ensemble.iteration} iterations ({duration:.2f}s)"
    )
    return RunRecord(
        algorithm="po-csa",
        function=objective.name,
        dimension=objective.dimension,
        optimizers=m,
        seed=int(seed),
        parameters={
            "beta": beta,
            "phi": phi,
            "mu": mu,
            "delta": delta,
            "alpha": alpha,
            "t_ac_0": t_ac_0,
            "t_gen_init": t_gen_init,
            "boundary_policy": boundary_policy,
        },
        final_best_energy=ensemble.best_snapshot.energy,
        best_coords=ensemble.best_snapshot.coords.copy(),
        eval_count=ensemble.eval_count,
        iterations=ensemble.iteration,
        best_history=np.asarray(ensemble.history, dtype=float),
        duration=duration,
        t_gen_0=initial_reference,
        trace=run_trace,
    )


def _record(run_trace: Optional[Trace], state: PoCsaState, members: bool) -> None:
    if run_trace is None:
        return
    run_trace.record(
        state.ensemble.iteration,
        state.ensemble.best_snapshot.energy,
        state.coupling.t_ac,
        state.coupling.sigma2,
        state.orbit.reference,
        t_gen_members=state.orbit.values if members else None,
        directions=state.orbit.trace_directions() if members else None,
    )
