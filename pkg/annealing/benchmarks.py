"""
Benchmark Functions

The fourteen box-bounded test problems:

- Group 1, unimodal and simple multimodal: f1 sphere, f2 Rosenbrock.
- Group 2, multimodal: f3 Ackley, f4 Griewank, f5 Weierstrass, f6 Rastrigin,
  f7 non-continuous Rastrigin, f8 Schwefel (419 * D + sum x sin sqrt|x|).
- Group 3, nonseparable: f9..f13 are f3..f7 evaluated at z = M x for an
  orthogonal M; f14 is the Schwefel sum over the shifted, rotated and
  penalized coordinates of ``f14_shift``.

Every function takes an array whose last axis holds the D coordinates and
returns the energies of the leading axes, so a whole ensemble is evaluated in
one call.
"""

from dataclasses import dataclass
from functools import partial
from pathlib import Path
from typing import Callable, Dict, Optional, Union

import numpy as np

from .ensemble import ObjectiveFunction
from .errors import ConfigurationError
from .rng import MASTER_STREAM, ROTATION_KEY, RngStream, derive_seed

SCHWEFEL_CONSTANT = 419.0
SCHWEFEL_OPTIMUM = -420.9687
# 419 - 418.9829: the per-coordinate floor left by the rounded constant
SCHWEFEL_FLOOR_PER_DIM = SCHWEFEL_CONSTANT - 418.98288727243374
F14_SHIFT = 420.96
F14_THRESHOLD = 500.0
F14_PENALTY = 0.001

WEIERSTRASS_K = np.arange(21)
WEIERSTRASS_A = 0.5 ** WEIERSTRASS_K
WEIERSTRASS_B = 3.0 ** WEIERSTRASS_K


def sphere(x: np.ndarray) -> np.ndarray:
    return np.sum(x ** 2, axis=-1)


def rosenbrock(x: np.ndarray) -> np.ndarray:
    head, tail = x[..., :-1], x[..., 1:]
    return np.sum((1.0 - head) ** 2 + 100.0 * (tail - head ** 2) ** 2, axis=-1)


def ackley(x: np.ndarray) -> np.ndarray:
    d = x.shape[-1]
    return (
        -20.0 * np.exp(-0.2 * np.sqrt(np.sum(x ** 2, axis=-1) / d))
        - np.exp(np.sum(np.cos(2.0 * np.pi * x), axis=-1) / d)
        + 20.0
        + np.e
    )


def griewank(x: np.ndarray) -> np.ndarray:
    i = np.arange(1, x.shape[-1] + 1)
    return np.sum(x ** 2, axis=-1) / 4000.0 - np.prod(np.cos(x / np.sqrt(i)), axis=-1) + 1.0


def weierstrass(x: np.ndarray) -> np.ndarray:
    d = x.shape[-1]
    per_coordinate = np.sum(WEIERSTRASS_A * np.cos(2.0 * np.pi * WEIERSTRASS_B * (x[..., None] + 0.5)), axis=-1)
    offset = np.sum(WEIERSTRASS_A * np.cos(np.pi * WEIERSTRASS_B))
    return np.sum(per_coordinate, axis=-1) - d * offset


def rastrigin(x: np.ndarray) -> np.ndarray:
    return np.sum(x ** 2 - 10.0 * np.cos(2.0 * np.pi * x) + 10.0, axis=-1)


def round_half_away(values: np.ndarray) -> np.ndarray:
    return np.sign(values) * np.floor(np.abs(values) + 0.5)


def noncontinuous_rastrigin(x: np.ndarray) -> np.ndarray:
    y = np.where(np.abs(x) < 0.5, x, round_half_away(2.0 * x) / 2.0)
    return rastrigin(y)


def schwefel_sum(z: np.ndarray) -> np.ndarray:
    return SCHWEFEL_CONSTANT * z.shape[-1] + np.sum(z, axis=-1)


def schwefel(x: np.ndarray) -> np.ndarray:
    return schwefel_sum(x * np.sin(np.sqrt(np.abs(x))))


@dataclass
class RotationMatrix:
    """Orthogonal D x D matrix; ``apply`` maps x to z = M x (row-wise for batches)."""

    matrix: np.ndarray
    seed: Optional[int] = None

    @property
    def dimension(self) -> int:
        return int(self.matrix.shape[0])

    def apply(self, x: np.ndarray) -> np.ndarray:
        return x @ self.matrix.T

    def orthogonality_error(self) -> float:
        """Largest entry of |M^T M - I|."""
        return float(np.max(np.abs(self.matrix.T @ self.matrix - np.eye(self.dimension))))

    def to_text(self) -> str:
        rows = [" ".join(format(float(v), ".17g") for v in row) for row in self.matrix]
        return "\n".join([str(self.dimension), *rows]) + "\n"

    def save(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_text(), encoding="utf-8")
        return path

    @classmethod
    def load(cls, path: Union[str, Path], seed: Optional[int] = None) -> "RotationMatrix":
        lines = [line for line in Path(path).read_text(encoding="utf-8").splitlines() if line.strip()]
        dimension = int(lines[0])
        matrix = np.array([[float(v) for v in line.split()] for line in lines[1:]], dtype=float)
        if matrix.shape != (dimension, dimension):
            raise ConfigurationError(f"{path}: expected a {dimension}x{dimension} matrix, got {matrix.shape}")
        return cls(matrix, seed)


def planar_rotation(dimension: int, a: int, b: int, theta: float) -> np.ndarray:
    """Identity except for a rotation by ``theta`` in the (a, b) plane."""
    rotation = np.eye(dimension)
    c, s = np.cos(theta), np.sin(theta)
    rotation[a, a] = c
    rotation[b, b] = c
    rotation[a, b] = -s
    rotation[b, a] = s
    return rotation


def generate_rotation(dimension: int, seed: int, rotations: Optional[int] = None) -> RotationMatrix:
    """Salomon-style rotation: a seeded product of random planar rotations.

    Each factor rotates a uniformly drawn axis pair by an angle uniform on
    [-pi, pi). ``rotations`` defaults to 2D - 2 and may not be below D.
    """
    if dimension < 2:
        raise ConfigurationError(f"rotations need D >= 2, got {dimension}")
    count = 2 * dimension - 2 if rotations is None else int(rotations)
    if count < dimension:
        raise ConfigurationError(f"need at least D={dimension} planar rotations, got {count}")

    stream = RngStream(seed, MASTER_STREAM)
    matrix = np.eye(dimension)
    for _ in range(count):
        a, b = stream.axis_pair(dimension)
        theta = 2.0 * np.pi * stream.uniform01() - np.pi
        matrix = planar_rotation(dimension, a, b, theta) @ matrix
    return RotationMatrix(matrix, seed)


def f14_shift(x: np.ndarray, rotation: RotationMatrix) -> np.ndarray:
    """z for f14: y = M (x - 420.96) + 420.96, then y sin sqrt|y| inside |y| <= 500, 0.001 (|y| - 500)^2 outside."""
    y = rotation.apply(np.asarray(x, dtype=float) - F14_SHIFT) + F14_SHIFT
    magnitude = np.abs(y)
    return np.where(
        magnitude <= F14_THRESHOLD,
        y * np.sin(np.sqrt(magnitude)),
        F14_PENALTY * (magnitude - F14_THRESHOLD) ** 2,
    )


@dataclass(frozen=True)
class FunctionEntry:
    function_id: int
    name: str
    bound: float
    base: Callable[[np.ndarray], np.ndarray]
    group: int
    rotated: bool = False


FUNCTIONS: Dict[int, FunctionEntry] = {
    1: FunctionEntry(1, "sphere", 100.0, sphere, 1),
    2: FunctionEntry(2, "rosenbrock", 2.048, rosenbrock, 1),
    3: FunctionEntry(3, "ackley", 32.768, ackley, 2),
    4: FunctionEntry(4, "griewank", 600.0, griewank, 2),
    5: FunctionEntry(5, "weierstrass", 0.5, weierstrass, 2),
    6: FunctionEntry(6, "rastrigin", 5.12, rastrigin, 2),
    7: FunctionEntry(7, "noncontinuous_rastrigin", 5.12, noncontinuous_rastrigin, 2),
    8: FunctionEntry(8, "schwefel", 500.0, schwefel, 2),
    9: FunctionEntry(9, "rotated_ackley", 32.768, ackley, 3, rotated=True),
    10: FunctionEntry(10, "rotated_griewank", 600.0, griewank, 3, rotated=True),
    11: FunctionEntry(11, "rotated_weierstrass", 0.5, weierstrass, 3, rotated=True),
    12: FunctionEntry(12, "rotated_rastrigin", 5.12, rastrigin, 3, rotated=True),
    13: FunctionEntry(13, "rotated_noncontinuous_rastrigin", 5.12, noncontinuous_rastrigin, 3, rotated=True),
    14: FunctionEntry(14, "rotated_schwefel", 500.0, schwefel_sum, 3, rotated=True),
}


def optimum_value(function_id: int, dimension: int) -> float:
    """Documented floor: 0, except the Schwefel forms whose rounded constant leaves ~0.0171 D."""
    if function_id in (8, 14):
        return SCHWEFEL_FLOOR_PER_DIM * dimension
    return 0.0


def rotation_seed(function_id: int, dimension: int, seed: int) -> int:
    """One rotation per (function, D, campaign seed)."""
    return derive_seed(seed, ROTATION_KEY, function_id, dimension)


@dataclass
class BenchmarkSpec:
    function_id: int
    dimension: int
    lower: float
    upper: float
    rotation: Optional[RotationMatrix] = None

    @property
    def entry(self) -> FunctionEntry:
        return FUNCTIONS[self.function_id]

    @property
    def name(self) -> str:
        return f"f{self.function_id}_{self.entry.name}"

    def objective(self) -> ObjectiveFunction:
        return ObjectiveFunction(
            name=self.name,
            dimension=self.dimension,
            lower=self.lower,
            upper=self.upper,
            func=partial(evaluate, self),
            optimum_value=optimum_value(self.function_id, self.dimension),
        )


def make_benchmark(
    function_id: int,
    dimension: int,
    seed: int = 0,
    rotation: Optional[RotationMatrix] = None,
) -> BenchmarkSpec:
    """Spec of f<function_id> in D dimensions; rotated ids build their campaign rotation unless one is given."""
    if function_id not in FUNCTIONS:
        raise ConfigurationError(f"unknown function id {function_id}, expected 1..14")
    entry = FUNCTIONS[function_id]
    minimum = 2 if entry.rotated or function_id == 2 else 1
    if dimension < minimum:
        raise ConfigurationError(f"f{function_id} needs D >= {minimum}, got {dimension}")

    if entry.rotated:
        if rotation is None:
            rotation = generate_rotation(dimension, rotation_seed(function_id, dimension, seed))
        elif rotation.dimension != dimension:
            raise ConfigurationError(f"rotation is {rotation.dimension}x{rotation.dimension} but D={dimension}")
    else:
        rotation = None
    return BenchmarkSpec(function_id, dimension, -entry.bound, entry.bound, rotation)


def evaluate(spec: BenchmarkSpec, x) -> Union[float, np.ndarray]:
    """Energy of one point, or of every row of a batch."""
    points = np.asarray(x, dtype=float)
    if points.shape[-1] != spec.dimension:
        raise ConfigurationError(
            f"{spec.name}: dimension mismatch, expected {spec.dimension} coordinates but got {points.shape[-1]}"
        )
    entry = spec.entry
    if spec.function_id == 14:
        energies = schwefel_sum(f14_shift(points, spec.rotation))
    elif entry.rotated:
        energies = entry.base(spec.rotation.apply(points))
    else:
        energies = entry.base(points)
    return float(energies) if points.ndim == 1 else energies
