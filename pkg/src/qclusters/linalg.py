"""Dense complex linear algebra primitives shared by the rest of the package.

Matrices are plain ``numpy.ndarray`` values coerced to ``complex128``.
Subsystem indices are 1-based everywhere in the public API, and index 1 is
the leftmost (slowest-varying) tensor factor, so ``kron(a, b)`` puts ``a``
on subsystem 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Iterable, Sequence

import numpy as np

HERMITICITY_TOL = 1e-10
EIGENVALUE_FLOOR = -1e-10


class ValidationError(ValueError):
    """Raised when an input violates a structural invariant.

    `invariant` is a short stable name for the violated condition; the
    message carries the offending magnitude so callers (and the CLI) can
    report exactly what failed.
    """

    def __init__(self, invariant: str, message: str):
        super().__init__(f"[{invariant}] {message}")
        self.invariant = invariant


def as_matrix(a) -> np.ndarray:
    """Coerce to a 2-D complex matrix with finite entries."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise ValidationError("matrix-shape", f"expected a 2-D array, got ndim={m.ndim}")
    if not np.all(np.isfinite(m)):
        raise ValidationError("finite-entries", "matrix contains NaN or Inf entries")
    return m


def as_vector(a) -> np.ndarray:
    """Coerce to a 1-D complex vector with finite entries."""
    v = np.asarray(a, dtype=complex).reshape(-1)
    if not np.all(np.isfinite(v)):
        raise ValidationError("finite-entries", "vector contains NaN or Inf entries")
    return v


def kron(a, b) -> np.ndarray:
    """Kronecker product; the first factor is the slower-varying one."""
    return np.kron(as_matrix(a), as_matrix(b))


def kron_all(factors: Iterable[np.ndarray]) -> np.ndarray:
    """Kronecker product of a sequence of matrices, left to right."""
    out = None
    for f in factors:
        out = as_matrix(f) if out is None else np.kron(out, as_matrix(f))
    if out is None:
        return np.eye(1, dtype=complex)
    return out


def adjoint(m) -> np.ndarray:
    return as_matrix(m).conj().T


def trace_of(m) -> complex:
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ValidationError("matrix-square", f"trace needs a square matrix, got {m.shape}")
    return complex(np.trace(m))


def frobenius_distance(a, b) -> float:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise ValidationError("matrix-shape", f"shape mismatch {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b))


def is_hermitian(m: np.ndarray, tol: float = HERMITICITY_TOL) -> bool:
    return bool(np.max(np.abs(m - m.conj().T)) <= tol)


def require_hermitian(m: np.ndarray, tol: float = HERMITICITY_TOL) -> np.ndarray:
    dev = float(np.max(np.abs(m - m.conj().T)))
    if dev > tol:
        raise ValidationError("hermiticity", f"max |m - m^dag| entry {dev:.3e} exceeds {tol:g}")
    return m


def check_dims(dims: Sequence[int], total: int) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if any(d < 1 for d in dims):
        raise ValidationError("dims-positive", f"subsystem dimensions must be >= 1, got {dims}")
    if prod(dims) != total:
        raise ValidationError(
            "dims-product", f"prod(dims)={prod(dims)} does not match matrix dimension {total}"
        )
    return dims


def _subsystem_positions(indices: Iterable[int], n: int, what: str) -> list[int]:
    """Convert 1-based subsystem indices to sorted 0-based positions."""
    pos = sorted(int(i) - 1 for i in indices)
    if len(set(pos)) != len(pos):
        raise ValidationError(f"{what}-distinct", f"repeated subsystem index in {what}")
    if pos and (pos[0] < 0 or pos[-1] >= n):
        raise ValidationError(f"{what}-range", f"{what} indices must lie in 1..{n}")
    return pos


def partial_trace(m, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Trace out every tensor factor not listed in `keep` (1-based indices).

    The kept factors stay in global order.  Tracing preserves the trace:
    ``trace(partial_trace(m, dims, keep)) == trace(m)``.
    """
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ValidationError("matrix-square", f"partial trace needs a square matrix, got {m.shape}")
    dims = check_dims(dims, m.shape[0])
    n = len(dims)
    keep0 = _subsystem_positions(keep, n, "keep")
    kept = set(keep0)
    t = m.reshape(dims + dims)
    row = list(range(n))
    col = [i + n if i in kept else i for i in range(n)]
    out = keep0 + [i + n for i in keep0]
    reduced = np.einsum(t, row + col, out)
    d = prod(dims[i] for i in keep0) if keep0 else 1
    return reduced.reshape(d, d)


def permute_subsystem_matrix(m, dims: Sequence[int], order: Sequence[int]) -> np.ndarray:
    """Rearrange tensor factors of a square matrix.

    `order` lists the current (1-based) factor positions in their new
    left-to-right arrangement, e.g. order (2, 3, 1, 4) makes the old second
    factor the new first one.
    """
    m = as_matrix(m)
    dims = check_dims(dims, m.shape[0])
    n = len(dims)
    perm = [int(o) - 1 for o in order]
    if sorted(perm) != list(range(n)):
        raise ValidationError("permutation", f"order {tuple(order)} is not a permutation of 1..{n}")
    t = m.reshape(dims + dims)
    t = t.transpose(perm + [p + n for p in perm])
    return t.reshape(m.shape)


def permute_subsystem_vector(v, dims: Sequence[int], order: Sequence[int]) -> np.ndarray:
    """Vector analogue of :func:`permute_subsystem_matrix`."""
    v = as_vector(v)
    dims = check_dims(dims, v.size)
    n = len(dims)
    perm = [int(o) - 1 for o in order]
    if sorted(perm) != list(range(n)):
        raise ValidationError("permutation", f"order {tuple(order)} is not a permutation of 1..{n}")
    return v.reshape(dims).transpose(perm).reshape(-1)


def embed_operator(op, dims: Sequence[int], cluster: Iterable[int]) -> np.ndarray:
    """Extend an operator acting on `cluster` by identities on the rest.

    `cluster` holds 1-based subsystem indices; the operator must be given on
    the cluster's factors in ascending global order.
    """
    op = as_matrix(op)
    dims = tuple(int(d) for d in dims)
    n = len(dims)
    pos = _subsystem_positions(cluster, n, "cluster")
    d_cluster = prod(dims[p] for p in pos)
    if op.shape != (d_cluster, d_cluster):
        raise ValidationError(
            "operator-dim", f"operator shape {op.shape} does not match cluster dimension {d_cluster}"
        )
    rest = [p for p in range(n) if p not in set(pos)]
    arrangement = pos + rest
    wide = np.kron(op, np.eye(prod(dims[p] for p in rest) if rest else 1, dtype=complex))
    arr_dims = [dims[p] for p in arrangement]
    # position of each global factor inside `arrangement`, 1-based for permute
    order = [arrangement.index(g) + 1 for g in range(n)]
    return permute_subsystem_matrix(wide, arr_dims, order)


@dataclass(frozen=True)
class HermitianEigenSystem:
    """Eigenvalues (ascending) and orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def hermitian_eig(m) -> HermitianEigenSystem:
    """Eigendecomposition of a Hermitian matrix.

    Rejects inputs that are not Hermitian within 1e-10 entrywise and checks
    that the returned system reconstructs the input.
    """
    m = require_hermitian(as_matrix(m))
    vals, vecs = np.linalg.eigh(m)
    scale = max(1.0, float(np.linalg.norm(m)))
    resid = float(np.linalg.norm(m - (vecs * vals) @ vecs.conj().T))
    if resid > 1e-10 * scale:
        raise ValidationError("eigen-reconstruction", f"residual {resid:.3e} exceeds 1e-10*max(1,||m||)")
    ortho = float(np.max(np.abs(vecs.conj().T @ vecs - np.eye(m.shape[0]))))
    if ortho > 1e-10:
        raise ValidationError("eigen-orthonormality", f"max |V^dag V - I| entry {ortho:.3e} exceeds 1e-10")
    return HermitianEigenSystem(eigenvalues=vals, eigenvectors=vecs)


def matrix_sqrt_psd(m) -> np.ndarray:
    """Principal square root of a positive semidefinite matrix.

    Eigenvalues in [-1e-10, 0) are clamped to 0; anything lower is an error.
    """
    sys = hermitian_eig(m)
    vals = sys.eigenvalues.copy()
    low = float(vals.min()) if vals.size else 0.0
    if low < EIGENVALUE_FLOOR:
        raise ValidationError("positive-semidefinite", f"eigenvalue {low:.3e} below {EIGENVALUE_FLOOR:g}")
    vals[vals < 0] = 0.0
    v = sys.eigenvectors
    return (v * np.sqrt(vals)) @ v.conj().T
