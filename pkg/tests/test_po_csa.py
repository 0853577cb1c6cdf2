"""Tests for PO-CSA: minimum-gain acceptance, the step and the full loop."""
import numpy as np
import pytest

from annealing.benchmarks import make_benchmark
from annealing.csa import csa_step, init_coupling
from annealing.ensemble import initialize_ensemble
from annealing.errors import ConfigurationError
from annealing.po_csa import (
    accept_with_min_gain,
    init_po_csa,
    min_gain_mask,
    po_csa_step,
    run_po_csa,
)
from annealing.rng import RngStream, member_streams


class TestMinGain:
    @pytest.mark.parametrize(
        "current,probe,expected",
        [
            (100.0, 99.0, True),
            (100.0, 99.5, False),
            (-100.0, -101.0, True),
            (-100.0, -100.5, False),
            (0.0, -1e-9, True),
            (0.0, 0.0, False),
            (100.0, 100.0, False),
        ],
    )
    def test_scalar(self, current, probe, expected):
        assert accept_with_min_gain(current, probe, 0.01) is expected

    def test_zero_delta_accepts_equal(self):
        assert accept_with_min_gain(5.0, 5.0, 0.0)

    def test_mask_matches_scalar(self):
        current = np.array([100.0, 100.0, -100.0, -100.0, 0.0, 0.0])
        probe = np.array([99.0, 99.5, -101.0, -100.5, -1e-9, 0.0])
        expected = [accept_with_min_gain(c, p, 0.01) for c, p in zip(current, probe)]
        assert min_gain_mask(current, probe, 0.01).tolist() == expected


class TestPoCsaStep:
    def test_reference_follows_new_best(self):
        objective = make_benchmark(1, 3).objective()
        state = init_po_csa(objective, 3, RngStream(12))
        streams = member_streams(12, 3)
        for _ in range(200):
            best_before = state.ensemble.best_snapshot.energy
            state = po_csa_step(state, streams, objective)
            assert state.orbit.best_member == state.ensemble.best_index
            assert state.ensemble.best_snapshot.energy <= best_before
        assert state.ensemble.iteration == 200
        assert state.ensemble.eval_count == 3 + 200 * 3

    def test_members_improve_by_min_gain_without_uphill(self):
        objective = make_benchmark(6, 2).objective()
        state = init_po_csa(objective, 4, RngStream(1), delta=0.01)
        streams = member_streams(1, 4)
        for _ in range(100):
            before = state.ensemble.energies.copy()
            state = po_csa_step(state, streams, objective, allow_uphill=False)
            changed = state.ensemble.energies != before
            assert np.all(state.ensemble.energies[changed] <= before[changed] - 0.01 * np.abs(before[changed]))

    def test_zero_delta_with_shared_temperature_matches_csa_step(self):
        objective = make_benchmark(1, 3).objective()
        state = init_po_csa(objective, 4, RngStream(8), delta=0.0)
        ensemble = initialize_ensemble(objective, 4, RngStream(8))
        coupling = init_coupling(ensemble.energies)
        po_streams, csa_streams = member_streams(8, 4), member_streams(8, 4)
        for k in range(150):
            t_gen = 10.0 / (k + 1)
            state.orbit.values[:] = t_gen
            state = po_csa_step(state, po_streams, objective)
            ensemble, coupling, _ = csa_step(ensemble, coupling, t_gen, csa_streams, objective)
            assert np.array_equal(state.ensemble.positions, ensemble.positions)
            assert np.array_equal(state.ensemble.energies, ensemble.energies)
            assert state.ensemble.best_snapshot.energy == ensemble.best_snapshot.energy
            assert state.ensemble.best_index == ensemble.best_index
            assert state.coupling.t_ac == coupling.t_ac
        assert state.ensemble.history == ensemble.history

    def test_step_advances_state_in_place(self):
        objective = make_benchmark(1, 3).objective()
        state = init_po_csa(objective, 3, RngStream(5))
        orbit, coupling = state.orbit, state.coupling
        assert po_csa_step(state, member_streams(5, 3), objective) is state
        assert state.orbit is orbit
        assert state.coupling is coupling

    def test_delta_range(self):
        objective = make_benchmark(1, 3).objective()
        with pytest.raises(ConfigurationError):
            init_po_csa(objective, 3, RngStream(1), delta=0.2)


class TestRunPoCsa:
    def test_defaults_to_one_optimizer_per_dimension(self):
        objective = make_benchmark(1, 4).objective()
        record = run_po_csa(objective, budget_per_optimizer=20, seed=2)
        assert record.optimizers == 4
        assert record.eval_count == 80
        assert record.algorithm == "po-csa"

    def test_history_and_trace(self):
        objective = make_benchmark(3, 3).objective()
        record = run_po_csa(objective, 3, 300, seed=4, trace=True, trace_members=True)
        assert np.all(np.diff(record.best_history) <= 0)
        assert len(record.trace) == record.iterations + 1
        assert len(record.trace.t_gen_members) == record.iterations + 1
        assert record.trace.t_gen_members[0].shape == (3,)
        assert all(np.count_nonzero(d == 0) == 1 for d in record.trace.directions)

    def test_initial_temperature_seeds_the_reference_only(self):
        objective = make_benchmark(1, 3).objective()
        seeded = init_po_csa(objective, 3, RngStream(4), t_gen_init=0.001)
        plain = init_po_csa(objective, 3, RngStream(4))
        reference = seeded.orbit.best_member
        assert reference == seeded.ensemble.best_index
        assert seeded.orbit.values[reference] == 0.001
        others = np.arange(3) != reference
        assert np.array_equal(seeded.orbit.values[others], plain.orbit.values[others])
        assert np.all((seeded.orbit.values[others] > 0) & (seeded.orbit.values[others] <= 100.0))

    def test_initial_temperature_option(self):
        objective = make_benchmark(1, 3).objective()
        record = run_po_csa(objective, 3, 10, seed=4, t_gen_init=0.001, trace=True, trace_members=True)
        assert record.t_gen_0 == 0.001
        assert record.trace.t_gen_ref[0] == 0.001
        assert np.count_nonzero(record.trace.t_gen_members[0] == 0.001) == 1

    def test_boundary_policy_is_recorded(self):
        objective = make_benchmark(1, 3).objective()
        record = run_po_csa(objective, 3, 30, seed=4, boundary_policy="reflect")
        assert record.parameters["boundary_policy"] == "reflect"
        assert run_po_csa(objective, 3, 30, seed=4).parameters["boundary_policy"] == "clamp"
        with pytest.raises(ConfigurationError):
            run_po_csa(objective, 3, 30, seed=4, boundary_policy="wrap")

    def test_deterministic(self):
        objective = make_benchmark(6, 3).objective()
        a = run_po_csa(objective, 3, 150, seed=31)
        b = run_po_csa(objective, 3, 150, seed=31)
        assert np.array_equal(a.best_history, b.best_history)
        assert a.final_best_energy == b.final_best_energy

    def test_sphere_progress(self):
        objective = make_benchmark(1, 2).objective()
        record = run_po_csa(objective, 2, 3000, seed=0)
        assert record.final_best_energy < record.best_history[0]


@pytest.mark.slow
def test_acceptance_temperature_stays_positive_over_long_runs():
    objective = make_benchmark(6, 5).objective()
    record = run_po_csa(objective, 5, 100_001, seed=6, trace=True)
    t_ac = np.array(record.trace.t_ac)
    assert record.iterations == 100_000
    assert np.all(t_ac > 0)
    assert np.all(np.isfinite(t_ac))
