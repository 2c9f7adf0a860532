"""Seeded random states, unitaries and projectors for tests and searches."""

from __future__ import annotations

from math import prod
from typing import Sequence

import numpy as np

from .states import DensityOperator, StateVector

DEFAULT_SEED = 1234


def rng_from(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(DEFAULT_SEED if seed is None else seed)


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR of a complex Gaussian with phase fixing."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_pure_state(dims: Sequence[int], rng: np.random.Generator) -> StateVector:
    d = prod(dims)
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return StateVector(tuple(dims), v / np.linalg.norm(v))


def random_density_operator(
    dims: Sequence[int], rng: np.random.Generator, rank: int | None = None
) -> DensityOperator:
    """Random mixed state of the given rank (full rank by default)."""
    d = prod(dims)
    r = d if rank is None else int(rank)
    g = rng.standard_normal((d, r)) + 1j * rng.standard_normal((d, r))
    m = g @ g.conj().T
    return DensityOperator(tuple(dims), m / np.trace(m))


def random_ray(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unit vector."""
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_hermitian(dim: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (g + g.conj().T) / 2.0
