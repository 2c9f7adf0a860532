"""Multipartite density operators and pure state vectors with labeled dims.

A state carries the per-subsystem dimensions ``dims``; subsystem 1 is the
leftmost tensor factor.  Construction validates the defining invariants
(hermiticity, unit trace, positivity / unit norm) and raises
:class:`~qclusters.linalg.ValidationError` naming the violated one.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Iterable, Sequence

import numpy as np

from .linalg import (
    EIGENVALUE_FLOOR,
    HERMITICITY_TOL,
    ValidationError,
    as_matrix,
    as_vector,
    partial_trace,
    permute_subsystem_matrix,
    permute_subsystem_vector,
)
from .partitions import ClusterDecomposition


def _check_dims(dims: Sequence[int]) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 1 for d in dims):
        raise ValidationError("dims-positive", f"subsystem dimensions must be >= 1, got {dims}")
    return dims


@dataclass(frozen=True)
class DensityOperator:
    """Trace-one positive matrix over a tensor product of subsystems."""

    dims: tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self):
        dims = _check_dims(self.dims)
        m = as_matrix(self.matrix)
        d = prod(dims)
        if m.shape != (d, d):
            raise ValidationError("dims-product", f"matrix shape {m.shape} does not match prod(dims)={d}")
        dev = float(np.max(np.abs(m - m.conj().T)))
        if dev > HERMITICITY_TOL:
            raise ValidationError("hermiticity", f"max |rho - rho^dag| entry {dev:.3e} exceeds {HERMITICITY_TOL:g}")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > 1e-10:
            raise ValidationError("unit-trace", f"|trace - 1| = {abs(tr - 1.0):.3e} exceeds 1e-10")
        low = float(np.linalg.eigvalsh(m).min())
        if low < EIGENVALUE_FLOOR:
            raise ValidationError("positivity", f"eigenvalue {low:.3e} below {EIGENVALUE_FLOOR:g}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return prod(self.dims)

    @property
    def n_subsystems(self) -> int:
        return len(self.dims)

    @classmethod
    def maximally_mixed(cls, dims: Sequence[int]) -> "DensityOperator":
        d = prod(_check_dims(dims))
        return cls(tuple(dims), np.eye(d, dtype=complex) / d)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    def is_pure(self, tol: float = 1e-10) -> bool:
        return abs(float(np.real(np.trace(self.matrix @ self.matrix))) - 1.0) <= tol


@dataclass(frozen=True)
class StateVector:
    """Unit-norm pure state over a tensor product of subsystems."""

    dims: tuple[int, ...]
    amplitudes: np.ndarray

    def __post_init__(self):
        dims = _check_dims(self.dims)
        v = as_vector(self.amplitudes)
        if v.size != prod(dims):
            raise ValidationError("dims-product", f"vector length {v.size} does not match prod(dims)={prod(dims)}")
        norm = float(np.linalg.norm(v))
        if abs(norm - 1.0) > 1e-10:
            raise ValidationError("unit-norm", f"|norm - 1| = {abs(norm - 1.0):.3e} exceeds 1e-10")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amplitudes", v)

    @property
    def dim(self) -> int:
        return prod(self.dims)

    @property
    def n_subsystems(self) -> int:
        return len(self.dims)

    def density(self) -> DensityOperator:
        return DensityOperator(self.dims, np.outer(self.amplitudes, self.amplitudes.conj()))

    def permute(self, order: Sequence[int]) -> "StateVector":
        v = permute_subsystem_vector(self.amplitudes, self.dims, order)
        return StateVector(tuple(self.dims[int(o) - 1] for o in order), v)


def reduced_state(rho: DensityOperator, cluster: Iterable[int]) -> DensityOperator:
    """State of a cluster: partial trace over the complement (1-based indices).

    Kept subsystems stay in global ascending order.
    """
    members = sorted(int(i) for i in cluster)
    if not members:
        raise ValidationError("cluster-nonempty", "cannot reduce onto an empty cluster")
    m = partial_trace(rho.matrix, rho.dims, members)
    return DensityOperator(tuple(rho.dims[i - 1] for i in members), m)


def permute_subsystems(state, order: Sequence[int]):
    """Reorder tensor factors of a state (isomorphic relabeling).

    `order` lists the current 1-based subsystem indices in their new
    arrangement; works for both :class:`DensityOperator` and
    :class:`StateVector`.
    """
    if isinstance(state, StateVector):
        return state.permute(order)
    if isinstance(state, DensityOperator):
        m = permute_subsystem_matrix(state.matrix, state.dims, order)
        return DensityOperator(tuple(state.dims[int(o) - 1] for o in order), m)
    raise TypeError(f"expected DensityOperator or StateVector, got {type(state).__name__}")


def cluster_dims(dims: Sequence[int], cluster: Iterable[int]) -> tuple[int, ...]:
    """Dimensions of the listed subsystems, in ascending index order."""
    return tuple(dims[int(i) - 1] for i in sorted(int(i) for i in cluster))


def assemble_product(rho: DensityOperator, cd: ClusterDecomposition) -> np.ndarray:
    """Tensor product of the cluster reduced states, reordered to rho's layout."""
    if cd.n_subsystems != rho.n_subsystems:
        raise ValidationError("partition-size", "decomposition does not match the state's subsystem count")
    factors = [reduced_state(rho, c).matrix for c in cd.clusters]
    sigma = factors[0]
    for f in factors[1:]:
        sigma = np.kron(sigma, f)
    concat = [i for c in cd.clusters for i in c]
    sigma_dims = [rho.dims[i - 1] for i in concat]
    # position (1-based) in `concat` of each global subsystem, ascending
    order = [concat.index(g) + 1 for g in range(1, rho.n_subsystems + 1)]
    return permute_subsystem_matrix(sigma, sigma_dims, order)
