"""Property-based invariants of the coupling, orbit, acceptance and rotation code."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from annealing.benchmarks import generate_rotation
from annealing.csa import ScheduleSpec, acceptance_probabilities, acceptance_variance, fast_schedule
from annealing.orbit import OrbitState, po_step, rebase_bounds
from annealing.po_csa import accept_with_min_gain
from annealing.rng import RngStream

energies = st.lists(
    st.floats(min_value=-1e300, max_value=1e300, allow_nan=False, allow_infinity=False),
    min_size=2,
    max_size=64,
)
temperatures = st.floats(min_value=1e-300, max_value=1e300)


def check_normalized(values, t_ac):
    probs = acceptance_probabilities(values, t_ac)
    assert np.all(np.isfinite(probs))
    assert abs(probs.sum() - 1.0) <= 1e-12
    assert np.all((probs >= 0) & (probs <= 1))


@settings(max_examples=300, deadline=None)
@given(energies, temperatures)
def test_probabilities_are_normalized(values, t_ac):
    check_normalized(values, t_ac)


@pytest.mark.slow
@settings(max_examples=10_000, deadline=None)
@given(energies, temperatures)
def test_probabilities_are_normalized_at_scale(values, t_ac):
    check_normalized(values, t_ac)


@settings(max_examples=300, deadline=None)
@given(energies, temperatures)
def test_variance_is_bounded(values, t_ac):
    m = len(values)
    sigma2 = acceptance_variance(acceptance_probabilities(values, t_ac))
    assert 0.0 <= sigma2 <= (m - 1) / m ** 2 + 1e-15


@given(
    st.floats(min_value=-1e6, max_value=1e6, allow_nan=False).filter(lambda e: e != 0),
    st.floats(min_value=-1e6, max_value=1e6, allow_nan=False),
    st.floats(min_value=0.0, max_value=0.05),
)
def test_min_gain_threshold(current, probe, delta):
    accepted = accept_with_min_gain(current, probe, delta)
    assert accepted == (probe <= current - delta * abs(current))
    if accepted:
        assert probe <= current


orbit_parameters = (
    st.integers(min_value=2, max_value=8),
    st.floats(min_value=10.0, max_value=100.0),
    st.floats(min_value=0.01, max_value=0.1),
    st.floats(min_value=0.01, max_value=0.1),
    st.integers(min_value=0, max_value=2 ** 32),
)


def bracketed_orbit(m, beta, phi, mu, seed):
    """Member 0 is the reference at V = 1; the others start inside [0.2, 5)."""
    values = 0.2 * 25.0 ** RngStream(seed).uniforms(m)
    values[0] = 1.0
    directions = np.where(RngStream(seed, 1).uniforms(m) < 0.5, -1, 1).astype(np.int8)
    state = OrbitState(values, directions, np.empty(m), np.empty(m), beta, phi, mu, 0)
    return rebase_bounds(state, 0)


def check_bracket(state, steps):
    moving = np.arange(state.m) != state.best_member
    reference = state.reference
    for _ in range(steps):
        upper, lower = state.upper.copy(), state.lower.copy()
        po_step(state)
        assert np.all(state.lower[moving] < state.values[moving])
        assert np.all(state.values[moving] < state.upper[moving])
        assert np.all(state.upper >= upper)
        assert np.all(state.lower <= lower)
        assert np.all(state.lower > 0)
        assert np.all(np.abs(state.directions) == 1)
        assert state.reference == reference


@settings(max_examples=50, deadline=None)
@given(*orbit_parameters)
def test_orbit_bracket_holds(m, beta, phi, mu, seed):
    check_bracket(bracketed_orbit(m, beta, phi, mu, seed), 300)


@pytest.mark.slow
@settings(max_examples=5, deadline=None)
@given(*orbit_parameters)
def test_orbit_bracket_holds_at_scale(m, beta, phi, mu, seed):
    check_bracket(bracketed_orbit(m, beta, phi, mu, seed), 100_000)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=2, max_value=12), st.integers(min_value=0, max_value=2 ** 63))
def test_rotations_are_orthogonal(dimension, seed):
    assert generate_rotation(dimension, seed).orthogonality_error() < 1e-10


@given(st.floats(min_value=1e-6, max_value=1e6), st.integers(min_value=1, max_value=10 ** 6))
def test_schedule_decreases(t_gen_0, k):
    spec = ScheduleSpec(t_gen_0)
    assert fast_schedule(spec, k + 1) < fast_schedule(spec, k)
