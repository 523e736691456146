"""Shared test configuration and small random-input helpers."""

from __future__ import annotations

import numpy as np
from hypothesis import HealthCheck, settings

settings.register_profile(
    "suite",
    deadline=None,
    max_examples=50,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


def complex_gaussian(rng: np.random.Generator, *shape: int) -> np.ndarray:
    """Entries i.i.d. CN(0, 1)."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def semi_unitary(rng: np.random.Generator, n: int, k: int) -> np.ndarray:
    """Random n x k matrix with orthonormal columns (generic phases)."""
    q, _ = np.linalg.qr(complex_gaussian(rng, n, k))
    return q[:, :k]


def random_symmetric(rng: np.random.Generator, n: int) -> np.ndarray:
    a = rng.standard_normal((n, n))
    return (a + a.T) / 2.0
