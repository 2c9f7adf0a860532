"""State reconstruction from probabilities of product ray-projector probes.

A single M-dimensional space gets an M^2-member probe basis: the M diagonal
ray projectors plus, for every index pair m < m', the two superposition
rays on (|m> + |m'>)/sqrt(2) and (|m> - i|m'>)/sqrt(2).  Off-diagonal dyads
expand exactly over four of these rays, which is what makes the family span
operator space.  Multipartite probes are all products of the per-subsystem
probes; probabilities then determine the state through the Gram linear
system, solved by dense LU with partial pivoting.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import prod
from typing import Sequence

import numpy as np

from .correlations import EventString, Projector
from .linalg import ValidationError, as_matrix
from .partitions import ClusterDecomposition
from .states import DensityOperator

GRAM_DET_TOL = 1e-12


@dataclass(frozen=True)
class ProbeCountReport:
    """Probe bookkeeping for a list of subsystem dimensions.

    `state_parameters` is the number of independent real numbers in a
    trace-one Hermitian matrix on the composite space, (prod M_k)^2 - 1.
    The full product-probe family has `product_strings` members, one of
    which carries no information, so the two counts agree.
    """

    dims: tuple[int, ...]
    state_parameters: int
    per_subsystem_nontrivial: tuple[int, ...]
    product_strings: int


def required_probe_count(dims: Sequence[int]) -> ProbeCountReport:
    dims = tuple(int(d) for d in dims)
    if any(d < 2 for d in dims):
        raise ValidationError("dims-minimum", f"subsystem dimensions must be >= 2, got {dims}")
    total = prod(dims)
    return ProbeCountReport(
        dims=dims,
        state_parameters=total**2 - 1,
        per_subsystem_nontrivial=tuple(d**2 - 1 for d in dims),
        product_strings=prod(d**2 for d in dims),
    )


def _superposition_rays(m: int, mp: int, dim: int) -> tuple[np.ndarray, np.ndarray]:
    v1 = np.zeros(dim, dtype=complex)
    v1[m] = 1.0
    v1[mp] = 1.0
    v2 = np.zeros(dim, dtype=complex)
    v2[m] = 1.0
    v2[mp] = -1.0j
    return v1 / np.sqrt(2.0), v2 / np.sqrt(2.0)


@dataclass(frozen=True)
class DyadDecomposition:
    """Exact four-term ray-projector expansion of an off-diagonal dyad."""

    m: int
    mp: int
    dim: int
    coefficients: tuple[complex, ...]
    projectors: tuple[Projector, ...]

    def assemble(self) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for c, p in zip(self.coefficients, self.projectors):
            out += c * p.matrix
        return out


def dyad_as_projectors(m: int, mp: int, dim: int) -> DyadDecomposition:
    """Expand |m><mp| over four ray projectors.

    For m < mp the coefficients are (1, -i, (i-1)/2, (i-1)/2) on the two
    superposition rays and the two diagonal rays; the m > mp case is the
    adjoint of the swapped pair, obtained by conjugating the coefficients.
    """
    if not (0 <= m < dim and 0 <= mp < dim):
        raise ValidationError("index-range", f"indices ({m}, {mp}) outside 0..{dim - 1}")
    if m == mp:
        raise ValidationError("dyad-offdiagonal", "a diagonal dyad is already a ray projector")
    lo, hi = (m, mp) if m < mp else (mp, m)
    v1, v2 = _superposition_rays(lo, hi, dim)
    e_lo = np.zeros(dim, dtype=complex)
    e_lo[lo] = 1.0
    e_hi = np.zeros(dim, dtype=complex)
    e_hi[hi] = 1.0
    coeffs = (1.0 + 0j, -1.0j, (1.0j - 1.0) / 2.0, (1.0j - 1.0) / 2.0)
    if m > mp:
        coeffs = tuple(np.conj(c) for c in coeffs)
    projs = tuple(Projector.ray(v) for v in (v1, v2, e_lo, e_hi))
    return DyadDecomposition(m=m, mp=mp, dim=dim, coefficients=coeffs, projectors=projs)


@dataclass(frozen=True)
class ProbeBasis:
    """Linearly independent ray-projector family spanning operator space."""

    dim: int
    projectors: tuple[Projector, ...]
    gram: np.ndarray
    gram_det: float

    def __post_init__(self):
        if abs(self.gram_det) <= GRAM_DET_TOL:
            raise ValidationError("gram-nonsingular", f"|det gram| = {abs(self.gram_det):.3e} at or below {GRAM_DET_TOL:g}")


def _gram_matrix(ops: Sequence[np.ndarray]) -> np.ndarray:
    flat = np.array([as_matrix(op).reshape(-1) for op in ops])
    g = np.conj(flat) @ flat.T
    imag = float(np.max(np.abs(g.imag))) if g.size else 0.0
    if imag > 1e-10:
        raise ValidationError("gram-real", f"Gram matrix has imaginary part {imag:.3e}; operators must be Hermitian")
    return g.real


def build_probe_basis(dim: int) -> ProbeBasis:
    """The M^2 single-space probes: diagonal rays plus pair superposition rays."""
    if dim < 2:
        raise ValidationError("dims-minimum", f"dimension must be >= 2, got {dim}")
    projs: list[Projector] = []
    for m in range(dim):
        e = np.zeros(dim, dtype=complex)
        e[m] = 1.0
        projs.append(Projector.ray(e))
    for m in range(dim):
        for mp in range(m + 1, dim):
            v1, v2 = _superposition_rays(m, mp, dim)
            projs.append(Projector.ray(v1))
            projs.append(Projector.ray(v2))
    gram = _gram_matrix([p.matrix for p in projs])
    det = float(np.linalg.det(gram))
    return ProbeBasis(dim=dim, projectors=tuple(projs), gram=gram, gram_det=det)


def product_probe_set(dims: Sequence[int]) -> list[EventString]:
    """All products of per-subsystem probes, as event strings on the maximal
    decomposition.  Ordering: subsystem 1 varies slowest."""
    dims = tuple(int(d) for d in dims)
    if any(d < 2 for d in dims):
        raise ValidationError("dims-minimum", f"subsystem dimensions must be >= 2, got {dims}")
    bases = [build_probe_basis(d).projectors for d in dims]
    cd = ClusterDecomposition.singletons(len(dims))
    return [EventString.of(cd, combo) for combo in itertools.product(*bases)]


def probe_operators(probes: Sequence[EventString] | ProbeBasis, dims: Sequence[int]) -> list[np.ndarray]:
    """Full-space matrices of a probe family."""
    if isinstance(probes, ProbeBasis):
        if prod(dims) != probes.dim:
            raise ValidationError("dims-product", "probe basis dimension does not match dims")
        return [p.matrix for p in probes.projectors]
    return [s.operator(dims) for s in probes]


def probe_probabilities(rho: DensityOperator, probes: Sequence[EventString] | ProbeBasis) -> np.ndarray:
    """Exact probe probabilities of a state, in probe order."""
    ops = probe_operators(probes, rho.dims)
    return np.array([float(np.real(np.trace(rho.matrix @ op))) for op in ops])


@dataclass(frozen=True)
class Reconstruction:
    """Linear-inversion estimate with its numerical health report.

    The raw `matrix` is returned as solved; nothing is repaired.  `flags`
    names any invariant the estimate misses beyond the noise bound, and
    `gram_condition` reports the conditioning of the solved system.
    """

    dims: tuple[int, ...]
    matrix: np.ndarray
    coefficients: np.ndarray
    gram_condition: float
    min_eigenvalue: float
    flags: tuple[str, ...]

    def as_density_operator(self) -> DensityOperator:
        return DensityOperator(self.dims, self.matrix)


def reconstruct(
    probabilities: Sequence[float],
    probes: Sequence[EventString] | ProbeBasis,
    dims: Sequence[int],
    noise_tol: float = 1e-8,
) -> Reconstruction:
    """Solve the Gram system for the probe expansion and assemble the state.

    With exact probabilities of a valid state the result reproduces it; with
    noisy input the hermiticity/trace/positivity misses are flagged rather
    than repaired.
    """
    dims = tuple(int(d) for d in dims)
    ops = probe_operators(probes, dims)
    probs = np.asarray(probabilities, dtype=float)
    if probs.shape != (len(ops),):
        raise ValidationError("probabilities-shape", f"{probs.size} probabilities for {len(ops)} probes")
    gram = _gram_matrix(ops)
    # singularity gate on conditioning, not the raw determinant: the det of a
    # large well-conditioned product family is legitimately tiny
    singular = np.linalg.svd(gram, compute_uv=False)
    rcond = float(singular[-1] / singular[0]) if singular[0] > 0 else 0.0
    if rcond <= GRAM_DET_TOL:
        raise ValidationError("gram-nonsingular", f"Gram reciprocal condition {rcond:.3e} at or below {GRAM_DET_TOL:g}")
    chi = np.linalg.solve(gram, probs)
    flat = np.array([op.reshape(-1) for op in ops])
    matrix = (chi @ flat).reshape(prod(dims), prod(dims))
    flags = []
    herm = float(np.max(np.abs(matrix - matrix.conj().T)))
    if herm > noise_tol:
        flags.append(f"hermiticity:{herm:.3e}")
    trace_gap = abs(complex(np.trace(matrix)) - 1.0)
    if trace_gap > noise_tol:
        flags.append(f"unit-trace:{trace_gap:.3e}")
    sym = (matrix + matrix.conj().T) / 2.0
    min_eig = float(np.linalg.eigvalsh(sym).min())
    if min_eig < -noise_tol:
        flags.append(f"positivity:{min_eig:.3e}")
    return Reconstruction(
        dims=dims,
        matrix=matrix,
        coefficients=chi,
        gram_condition=float(singular[0] / singular[-1]),
        min_eigenvalue=min_eig,
        flags=tuple(flags),
    )


def gram_linear_independence_check(ops: Sequence[np.ndarray]) -> tuple[bool, float]:
    """Linear independence via the Gram matrix of tr(P_q P_q').

    The verdict comes from the Gram's smallest singular value relative to
    its largest (an absolute determinant cutoff cannot express
    "non-singular" across operator scales); the determinant is returned
    alongside.
    """
    mats = [as_matrix(op) for op in ops]
    if len(mats) > mats[0].shape[0] ** 2:
        raise ValidationError("family-size", "more operators than the operator-space dimension")
    gram = _gram_matrix(mats)
    s = np.linalg.svd(gram, compute_uv=False)
    ok = bool(s[-1] > GRAM_DET_TOL * max(1.0, float(s[0])))
    return ok, float(np.linalg.det(gram))


def independence_by_null_combination(ops: Sequence[np.ndarray], tol: float = 1e-10) -> bool:
    """Linear independence as absence of a nontrivial null combination.

    Checked through the smallest singular value of the stacked, vectorized
    family, scaled by the largest.
    """
    flat = np.array([as_matrix(op).reshape(-1) for op in ops])
    s = np.linalg.svd(flat, compute_uv=False)
    return bool(s[-1] > tol * max(1.0, float(s[0])))


def hermitian_operator_basis(dim: int) -> list[np.ndarray]:
    """Orthonormal Hermitian basis of operator space (trace inner product)."""
    basis = [np.eye(dim, dtype=complex) / np.sqrt(dim)]
    for i in range(dim):
        for j in range(i + 1, dim):
            sym = np.zeros((dim, dim), dtype=complex)
            sym[i, j] = sym[j, i] = 1.0 / np.sqrt(2.0)
            basis.append(sym)
            anti = np.zeros((dim, dim), dtype=complex)
            anti[i, j] = -1.0j / np.sqrt(2.0)
            anti[j, i] = 1.0j / np.sqrt(2.0)
            basis.append(anti)
    for k in range(1, dim):
        diag = np.zeros(dim, dtype=complex)
        diag[:k] = 1.0
        diag[k] = -k
        basis.append(np.diag(diag) / np.sqrt(k * (k + 1)))
    return basis


def independence_by_expansion_matrix(ops: Sequence[np.ndarray], tol: float = 1e-10) -> tuple[bool, float]:
    """Linear independence via the expansion matrix over an orthonormal
    Hermitian operator basis; for a square family this is its determinant."""
    mats = [as_matrix(op) for op in ops]
    dim = mats[0].shape[0]
    basis = hermitian_operator_basis(dim)
    alpha = np.array([[np.trace(b.conj().T @ p) for b in basis] for p in mats])
    imag = float(np.max(np.abs(alpha.imag)))
    if imag > 1e-10:
        raise ValidationError("expansion-real", f"expansion has imaginary part {imag:.3e}; operators must be Hermitian")
    alpha = alpha.real
    s = np.linalg.svd(alpha, compute_uv=False)
    ok = bool(s[-1] > tol * max(1.0, float(s[0])))
    det = float(np.linalg.det(alpha)) if alpha.shape[0] == alpha.shape[1] else float(np.prod(s))
    return ok, det
