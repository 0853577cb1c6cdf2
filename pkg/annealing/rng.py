"""
Random Streams

Deterministic, splittable random streams built on numpy's counter-based
Philox bit generator. Within a run, stream 0 is the master stream (initial
solutions, drawn temperatures, orbit initialization) and stream i + 1 belongs
to optimizer i. Streams are addressed by (seed, stream_id), so a member's
sequence never depends on how many other members or workers exist.
"""

from typing import List, Tuple

import numpy as np

from .errors import ConfigurationError

MASTER_STREAM = 0

# Namespaces for derived seeds. Derived keys always have length >= 2, so they
# can never collide with the single-element keys used by RngStream.
RUN_KEY = 0
SWEEP_KEY = 1
ROTATION_KEY = 2

_SEED_LIMIT = 2 ** 64


def _check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed < _SEED_LIMIT:
        raise ConfigurationError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return seed


def derive_seed(seed: int, *path: int) -> int:
    """Derive a child seed from ``seed`` and an integer path such as (RUN_KEY, run_index)."""
    sequence = np.random.SeedSequence(entropy=_check_seed(seed), spawn_key=tuple(int(p) for p in path))
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def cauchy_from_uniform(u):
    """Inverse CDF of the standard Cauchy distribution, tan(pi * (u - 1/2))."""
    return np.tan(np.pi * (np.asarray(u, dtype=float) - 0.5))


class RngStream:
    """One reproducible random sequence, identified by (seed, stream_id)."""

    def __init__(self, seed: int, stream_id: int = MASTER_STREAM):
        self.seed = _check_seed(seed)
        self.stream_id = int(stream_id)
        if self.stream_id < 0:
            raise ConfigurationError(f"stream_id must be non-negative, got {stream_id}")
        sequence = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_id,))
        self._generator = np.random.Generator(np.random.Philox(sequence))

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id})"

    def uniform01(self) -> float:
        """Next value of the uniform sequence, in [0, 1)."""
        return float(self._generator.random())

    def uniforms(self, size) -> np.ndarray:
        return self._generator.random(size)

    def cauchy(self) -> float:
        """One standard-Cauchy deviate."""
        return float(self.cauchy_vector(1)[0])

    def cauchy_vector(self, size: int) -> np.ndarray:
        """``size`` independent standard-Cauchy deviates by the tangent transform."""
        u = self._generator.random(size)
        # u == 0 sits on the pole of the tangent; resample it
        poles = u == 0.0
        while poles.any():
            u[poles] = self._generator.random(int(poles.sum()))
            poles = u == 0.0
        return cauchy_from_uniform(u)

    def probe_uniforms(self, dimension: int) -> Tuple[np.ndarray, float]:
        """Uniforms of one ``cauchy_vector(dimension)`` call plus the next ``uniform01``.

        Consumes exactly the same sequence as the two calls, in one draw when
        no uniform falls on the tangent pole.
        """
        draws = self._generator.random(dimension + 1)
        u = draws[:dimension]
        if u.all():
            return u, float(draws[dimension])

        spare = [float(draws[dimension])]
        poles = u == 0.0
        while poles.any():
            needed = int(poles.sum())
            fresh = spare + self._generator.random(max(needed - len(spare), 0)).tolist()
            u[poles] = fresh[:needed]
            spare = fresh[needed:]
            poles = u == 0.0
        r = spare[0] if spare else self.uniform01()
        return u, float(r)

    def axis_pair(self, dimension: int) -> tuple:
        """Two distinct axes drawn uniformly from range(dimension)."""
        first, second = self._generator.choice(dimension, size=2, replace=False)
        return int(first), int(second)


def member_streams(seed: int, m: int) -> List[RngStream]:
    """Streams 1..m of a run, one per optimizer."""
    return [RngStream(seed, index + 1) for index in range(m)]
