"""
Coupled Simulated Annealing

The CSA kernel: coupled acceptance probabilities, the coupling term, variance
control of the acceptance temperature, the fast-annealing generation schedule
and the classic loop, with the R-CSA (drawn initial generation temperature)
and B-CSA (best of a fixed sweep of initial temperatures) protocols.
"""

import time
from dataclasses import dataclass, replace
from typing import Optional, Sequence, Tuple

import numpy as np

from logs.logger import get_logger

from .ensemble import (
    DEFAULT_BOUNDARY_POLICY,
    Ensemble,
    ObjectiveFunction,
    apply_acceptance,
    check_boundary_policy,
    generate_probes,
    initialize_ensemble,
)
from .errors import ConfigurationError, EvaluationError
from .records import RunRecord, Trace
from .rng import MASTER_STREAM, SWEEP_KEY, RngStream, derive_seed, member_streams

logger = get_logger(__name__)

DEFAULT_ALPHA = 0.05
DEFAULT_T_AC_0 = 1.0
TGEN_SWEEP = (0.001, 0.01, 0.1, 1.0, 10.0, 100.0, 1000.0)
RCSA_TGEN_RANGE = 100.0
DESIRED_VARIANCE_FRACTION = 0.99

# t_ac only ever changes by (1 +/- alpha); these bounds keep it a normal, finite double
T_AC_FLOOR = float(np.finfo(float).tiny)
T_AC_CEILING = 1e300


@dataclass
class CouplingState:
    """Acceptance temperature and the coupled acceptance probabilities derived from it."""

    t_ac: float
    gamma: float
    probs: np.ndarray
    sigma2: float
    sigma2_desired: float
    alpha: float


@dataclass(frozen=True)
class ScheduleSpec:
    """Monotonic generation-temperature schedule."""

    t_gen_0: float
    kind: str = "fast-annealing"

    def __post_init__(self):
        if not self.t_gen_0 > 0:
            raise ConfigurationError(f"initial generation temperature must be positive, got {self.t_gen_0}")
        if self.kind != "fast-annealing":
            raise ConfigurationError(f"unsupported schedule '{self.kind}'")


def _shifted_terms(energies: Sequence[float], t_ac: float) -> np.ndarray:
    values = np.asarray(energies, dtype=float)
    if not np.all(np.isfinite(values)):
        raise EvaluationError(f"non-finite energy in coupling: {values.tolist()}")
    if not t_ac > 0:
        raise ConfigurationError(f"acceptance temperature must be positive, got {t_ac}")
    # every exponent is <= 0, the max-energy member contributes exp(0) = 1
    return np.exp((values - values.max()) / t_ac)


def coupling_term(energies: Sequence[float], t_ac: float) -> float:
    """gamma = sum over the ensemble of exp((E(x) - max E) / T_ac)."""
    return float(np.sum(_shifted_terms(energies, t_ac)))


def acceptance_probabilities(energies: Sequence[float], t_ac: float) -> np.ndarray:
    """A_Theta for every member: exp((E(x_i) - max E) / T_ac) / gamma."""
    terms = _shifted_terms(energies, t_ac)
    return terms / np.sum(terms)


def acceptance_variance(probs: Sequence[float]) -> float:
    """Population variance of probabilities whose mean is known to be 1/m."""
    p = np.asarray(probs, dtype=float)
    m = p.size
    return max(0.0, float(np.mean(p * p) - 1.0 / (m * m)))


def desired_variance(m: int) -> float:
    return DESIRED_VARIANCE_FRACTION * (m - 1) / (m * m)


def init_coupling(energies: Sequence[float], t_ac_0: float = DEFAULT_T_AC_0, alpha: float = DEFAULT_ALPHA) -> CouplingState:
    if not 0 < alpha <= 0.1:
        raise ConfigurationError(f"alpha must lie in (0, 0.1], got {alpha}")
    if not t_ac_0 > 0:
        raise ConfigurationError(f"initial acceptance temperature must be positive, got {t_ac_0}")
    terms = _shifted_terms(energies, t_ac_0)
    probs = terms / np.sum(terms)
    return CouplingState(
        t_ac=float(t_ac_0),
        gamma=float(np.sum(terms)),
        probs=probs,
        sigma2=acceptance_variance(probs),
        sigma2_desired=desired_variance(len(probs)),
        alpha=float(alpha),
    )


def _next_t_ac(state: CouplingState) -> float:
    if state.sigma2 < state.sigma2_desired:
        t_ac = state.t_ac * (1.0 - state.alpha)
    else:
        t_ac = state.t_ac * (1.0 + state.alpha)
    return min(max(t_ac, T_AC_FLOOR), T_AC_CEILING)


def update_acceptance_temperature(state: CouplingState) -> CouplingState:
    """Variance control: cool below the desired variance, heat at or above it."""
    return replace(state, t_ac=_next_t_ac(state))


def update_coupling(state: CouplingState, energies: Sequence[float]) -> CouplingState:
    """End-of-iteration update, in place: sigma^2 of the current energies, T_ac, then gamma."""
    state.sigma2 = acceptance_variance(acceptance_probabilities(energies, state.t_ac))
    state.t_ac = _next_t_ac(state)
    terms = _shifted_terms(energies, state.t_ac)
    state.gamma = float(np.sum(terms))
    state.probs = terms / state.gamma
    return state


def fast_schedule(spec: ScheduleSpec, k: int) -> float:
    """T_gen at iteration k + 1: t_gen_0 / (k + 1)."""
    if k < 0:
        raise ConfigurationError(f"iteration must be non-negative, got {k}")
    return spec.t_gen_0 / (k + 1)


def generation_temperature(spec: ScheduleSpec, k: int) -> float:
    """Temperature used by the generation step of iteration k."""
    return spec.t_gen_0 if k == 0 else fast_schedule(spec, k - 1)


def draw_initial_tgen(stream: RngStream) -> float:
    """R-CSA initial generation temperature, uniform on (0, 100]."""
    return RCSA_TGEN_RANGE * (1.0 - stream.uniform01())


def csa_step(
    ensemble: Ensemble,
    coupling: CouplingState,
    t_gen,
    streams: Sequence[RngStream],
    objective: ObjectiveFunction,
    allow_uphill: bool = True,
    policy: str = DEFAULT_BOUNDARY_POLICY,
) -> Tuple[Ensemble, CouplingState, bool]:
    """One generation / acceptance / update iteration.

    A probe replaces its member if it is not worse, or if the member's
    acceptance probability exceeds a fresh uniform r (drawn for every member
    whether or not it is needed). Returns the ensemble, the updated coupling state
    and whether a new global best was found.
    """
    positions, energies, r = generate_probes(ensemble, t_gen, streams, objective, policy)

    accepted = energies <= ensemble.energies
    if allow_uphill:
        accepted |= coupling.probs > r

    new_best = apply_acceptance(ensemble, positions, energies, accepted)
    coupling = update_coupling(coupling, ensemble.energies)
    ensemble.iteration += 1
    ensemble.record_best()
    return ensemble, coupling, new_best


def check_budget(budget_per_optimizer: int, m: int) -> None:
    if m < 2:
        raise ConfigurationError(f"a coupled ensemble needs at least 2 optimizers, got m={m}")
    if budget_per_optimizer < 1:
        raise ConfigurationError(f"budget per optimizer must be at least 1, got {budget_per_optimizer}")


class ProgressMeter:
    """Signals each time the evaluation count crosses another tenth of the budget."""

    def __init__(self, total_evaluations: int, m: int, parts: int = 10):
        self.step = max(m, total_evaluations // parts)
        self.next_report = self.step

    def crossed(self, eval_count: int) -> bool:
        if eval_count < self.next_report:
            return False
        self.next_report = (eval_count // self.step + 1) * self.step
        return True


def run_csa(
    objective: ObjectiveFunction,
    m: int,
    budget_per_optimizer: int,
    spec: Optional[ScheduleSpec] = None,
    alpha: float = DEFAULT_ALPHA,
    seed: int = 0,
    t_ac_0: float = DEFAULT_T_AC_0,
    max_iterations: Optional[int] = None,
    trace: bool = False,
    allow_uphill: bool = True,
    boundary_policy: str = DEFAULT_BOUNDARY_POLICY,
) -> RunRecord:
    """Classic CSA with the fast-annealing schedule.

    Without ``spec`` the run is an R-CSA run: t_gen_0 is drawn from the
    master stream after the initial ensemble.
    """
    check_budget(budget_per_optimizer, m)
    check_boundary_policy(boundary_policy)
    started = time.perf_counter()

    master = RngStream(seed, MASTER_STREAM)
    ensemble = initialize_ensemble(objective, m, master)
    algorithm = "csa"
    if spec is None:
        spec = ScheduleSpec(draw_initial_tgen(master))
        algorithm = "r-csa"
    coupling = init_coupling(ensemble.energies, t_ac_0, alpha)
    streams = member_streams(seed, m)

    run_trace = Trace() if trace else None
    ensemble.record_best()
    if run_trace is not None:
        run_trace.record(0, ensemble.best_snapshot.energy, coupling.t_ac, coupling.sigma2, spec.t_gen_0)

    logger.info(f"{algorithm} on {objective.name} (D={objective.dimension}, m={m}, seed={seed}, t_gen_0={spec.t_gen_0:.6g})")
    total = budget_per_optimizer * m
    progress = ProgressMeter(total, m)

    while ensemble.eval_count + m <= total and (max_iterations is None or ensemble.iteration < max_iterations):
        t_gen = generation_temperature(spec, ensemble.iteration)
        ensemble, coupling, _ = csa_step(
            ensemble, coupling, t_gen, streams, objective, allow_uphill, boundary_policy
        )
        if run_trace is not None:
            run_trace.record(ensemble.iteration, ensemble.best_snapshot.energy, coupling.t_ac, coupling.sigma2, t_gen)
        if progress.crossed(ensemble.eval_count):
            logger.debug(f"  {ensemble.eval_count}/{total} evaluations, best E={ensemble.best_snapshot.energy:.6e}")

    duration = time.perf_counter() - started
    logger.info(
        f"{algorithm} finished: best E={ensemble.best_snapshot.energy:.6e} after "
        f"{ensemble.iteration} iterations ({duration:.2f}s)"
    )
    return RunRecord(
        algorithm=algorithm,
        function=objective.name,
        dimension=objective.dimension,
        optimizers=m,
        seed=int(seed),
        parameters={
            "t_gen_0": spec.t_gen_0,
            "t_ac_0": t_ac_0,
            "alpha": alpha,
            "schedule": spec.kind,
            "boundary_policy": boundary_policy,
        },
        final_best_energy=ensemble.best_snapshot.energy,
        best_coords=ensemble.best_snapshot.coords.copy(),
        eval_count=ensemble.eval_count,
        iterations=ensemble.iteration,
        best_history=np.asarray(ensemble.history, dtype=float),
        duration=duration,
        t_gen_0=spec.t_gen_0,
        trace=run_trace,
    )


def sweep_seed(seed: int, index: int) -> int:
    """Seed of the ``index``-th member of a B-CSA sweep."""
    return derive_seed(seed, SWEEP_KEY, index)


def run_bcsa_sweep(
    objective: ObjectiveFunction,
    m: int,
    budget_per_optimizer: int,
    alpha: float = DEFAULT_ALPHA,
    seed: int = 0,
    t_ac_0: float = DEFAULT_T_AC_0,
    sweep: Sequence[float] = TGEN_SWEEP,
    max_iterations: Optional[int] = None,
    trace: bool = False,
    boundary_policy: str = DEFAULT_BOUNDARY_POLICY,
) -> RunRecord:
    """B-CSA: one CSA run per initial temperature of ``sweep``, keep the best.

    Member j runs on ``sweep_seed(seed, j)``. The result carries the selected
    member's solution, history and trace, the evaluations of all members and
    every member record.
    """
    check_budget(budget_per_optimizer, m)
    started = time.perf_counter()
    members = [
        run_csa(
            objective, m, budget_per_optimizer, ScheduleSpec(t_gen_0), alpha, sweep_seed(seed, j),
            t_ac_0=t_ac_0, max_iterations=max_iterations, trace=trace, boundary_policy=boundary_policy,
        )
        for j, t_gen_0 in enumerate(sweep)
    ]
    # min() keeps the first member on ties
    best = min(members, key=lambda record: record.final_best_energy)
    logger.info(f"b-csa on {objective.name}: best E={best.final_best_energy:.6e} at t_gen_0={best.t_gen_0}")
    return RunRecord(
        algorithm="b-csa",
        function=objective.name,
        dimension=objective.dimension,
        optimizers=m,
        seed=int(seed),
        parameters={
            "t_gen_sweep": list(sweep),
            "t_ac_0": t_ac_0,
            "alpha": alpha,
            "schedule": "fast-annealing",
            "boundary_policy": boundary_policy,
        },
        final_best_energy=best.final_best_energy,
        best_coords=best.best_coords.copy(),
        eval_count=sum(member.eval_count for member in members),
        iterations=best.iterations,
        best_history=best.best_history,
        duration=time.perf_counter() - started,
        t_gen_0=best.t_gen_0,
        trace=best.trace,
        members=members,
    )
