"""Pytest configuration file."""
import os
import sys
import tempfile
from pathlib import Path

import numpy as np
import pytest

# Add the project root directory to Python path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

# Campaign logs of the test session stay out of the project tree
os.environ.setdefault("ANNEALING_LOG_DIR", tempfile.mkdtemp(prefix="annealing-logs-"))

from annealing.benchmarks import make_benchmark  # noqa: E402
from annealing.ensemble import ObjectiveFunction  # noqa: E402


def sphere_batch(x):
    return np.sum(np.asarray(x) ** 2, axis=-1)


@pytest.fixture
def sphere3():
    """f1 in three dimensions."""
    return make_benchmark(1, 3).objective()


@pytest.fixture
def small_box_sphere():
    """Sphere on [-1, 1]^2, cheap enough for long loops."""
    return ObjectiveFunction("small_sphere", 2, -1.0, 1.0, sphere_batch, optimum_value=0.0)


@pytest.fixture
def fixture_dir():
    """Checked-in golden files."""
    return Path(__file__).parent / "fixtures"
