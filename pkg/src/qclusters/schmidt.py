"""Schmidt analysis of bipartite pure states.

Every bipartite pure state defines, besides its Schmidt coefficients and
paired bases, an antiunitary correlation operator carrying left Schmidt
vectors to their right partners.  Antilinear maps have no native matrix
form, so they are stored as the matrix ``U`` of the composed linear map
``v -> U @ conj(v)`` in the computational basis; conjugation is applied
explicitly at call sites.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Sequence

import numpy as np

from .correlations import Projector
from .linalg import ValidationError, matrix_sqrt_psd, partial_trace
from .states import StateVector

SCHMIDT_COEFF_CUTOFF = 1e-12


def _split_bipartition(psi: StateVector, bipartition) -> tuple[tuple[int, ...], tuple[int, ...]]:
    try:
        left, right = bipartition
    except (TypeError, ValueError):
        raise ValidationError("bipartition", "bipartition must be a pair of index sets") from None
    left = tuple(sorted(int(i) for i in left))
    right = tuple(sorted(int(i) for i in right))
    n = psi.n_subsystems
    if sorted(left + right) != list(range(1, n + 1)) or not left or not right:
        raise ValidationError(
            "bipartition", f"parts {left} | {right} must be nonempty and partition 1..{n}"
        )
    return left, right


def _coefficient_matrix(psi: StateVector, left: tuple[int, ...], right: tuple[int, ...]) -> np.ndarray:
    """Amplitudes reshaped as a (left dim) x (right dim) matrix."""
    reordered = psi.permute(left + right)
    dl = prod(psi.dims[i - 1] for i in left)
    return reordered.amplitudes.reshape(dl, -1)


@dataclass(frozen=True)
class SchmidtForm:
    """Coefficients (descending, positive) with paired orthonormal bases.

    `left_vectors` and `right_vectors` hold one column per retained
    coefficient; the state is ``sum_i c_i left_i (x) right_i`` on the
    subsystem arrangement `left_part + right_part` (each ascending).
    """

    coefficients: np.ndarray
    left_vectors: np.ndarray
    right_vectors: np.ndarray
    left_part: tuple[int, ...]
    right_part: tuple[int, ...]

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=float)
        if np.any(c <= 0) or np.any(np.diff(c) > 0):
            raise ValidationError("schmidt-coefficients", "coefficients must be positive and descending")
        if abs(float(np.sum(c**2)) - 1.0) > 1e-10:
            raise ValidationError("schmidt-normalization", f"sum of squares off by {abs(float(np.sum(c**2)) - 1.0):.3e}")
        object.__setattr__(self, "coefficients", c)

    def reconstruct(self) -> np.ndarray:
        """Amplitudes on the `left_part + right_part` arrangement."""
        out = np.zeros(self.left_vectors.shape[0] * self.right_vectors.shape[0], dtype=complex)
        for c, l, r in zip(self.coefficients, self.left_vectors.T, self.right_vectors.T):
            out += c * np.kron(l, r)
        return out


def schmidt_decompose(psi: StateVector, bipartition) -> SchmidtForm:
    """Schmidt canonical decomposition across a bipartition of subsystems.

    Numerically-zero coefficients are dropped.  Phases are fixed by making
    the first nonzero component of each left vector real positive.
    """
    left, right = _split_bipartition(psi, bipartition)
    m = _coefficient_matrix(psi, left, right)
    u, s, vh = np.linalg.svd(m, full_matrices=False)
    keep = s > SCHMIDT_COEFF_CUTOFF
    u, s, vh = u[:, keep], s[keep], vh[keep, :]
    lefts = []
    rights = []
    for k in range(s.size):
        l, r = u[:, k], vh[k, :]
        j = int(np.argmax(np.abs(l) > 1e-12))
        phase = l[j] / abs(l[j])
        lefts.append(l / phase)
        rights.append(r * phase)
    return SchmidtForm(
        coefficients=s,
        left_vectors=np.column_stack(lefts),
        right_vectors=np.column_stack(rights),
        left_part=left,
        right_part=right,
    )


@dataclass(frozen=True)
class CorrelationOperator:
    """Antiunitary partner map of a bipartite pure state.

    Acts as ``apply(v) = matrix @ conj(v)``; the domain is the support of
    the left reduced state and the range the support of the right one.  On
    that support the map is independent of the Schmidt basis used to build
    it, degenerate spectra included.
    """

    matrix: np.ndarray
    support_rank: int
    left_part: tuple[int, ...]
    right_part: tuple[int, ...]

    def apply(self, v) -> np.ndarray:
        return self.matrix @ np.conj(np.asarray(v, dtype=complex))

    def apply_inverse(self, w) -> np.ndarray:
        """Inverse map, sending right partners back to left vectors."""
        return self.matrix.T @ np.conj(np.asarray(w, dtype=complex))


def correlation_operator(psi: StateVector, bipartition) -> CorrelationOperator:
    form = schmidt_decompose(psi, bipartition)
    m = np.zeros((form.right_vectors.shape[0], form.left_vectors.shape[0]), dtype=complex)
    for l, r in zip(form.left_vectors.T, form.right_vectors.T):
        m += np.outer(r, l)
    return CorrelationOperator(
        matrix=m,
        support_rank=form.coefficients.size,
        left_part=form.left_part,
        right_part=form.right_part,
    )


def partners_in_basis(
    psi: StateVector, bipartition, left_basis: Sequence[np.ndarray]
) -> list[tuple[np.ndarray, float]]:
    """Expand the state over a given orthonormal basis of the left part.

    Returns one ``(partner_vector, coefficient)`` pair per basis vector such
    that ``sum_i c_i b_i (x) p_i`` reassembles the state.  The basis must be
    orthonormal and diagonalize the left reduced state (any orthonormal
    basis qualifies on a fully degenerate support); otherwise the expansion
    is not a Schmidt decomposition and the call fails.
    """
    left, right = _split_bipartition(psi, bipartition)
    m = _coefficient_matrix(psi, left, right)
    basis = np.column_stack([np.asarray(b, dtype=complex).reshape(-1) for b in left_basis])
    if basis.shape[0] != m.shape[0]:
        raise ValidationError("basis-dims", f"basis vectors of dim {basis.shape[0]} on a part of dim {m.shape[0]}")
    gram = basis.conj().T @ basis
    if float(np.max(np.abs(gram - np.eye(basis.shape[1])))) > 1e-10:
        raise ValidationError("basis-orthonormality", "left basis is not orthonormal within 1e-10")
    rho_left = m @ m.conj().T
    mixed = basis.conj().T @ rho_left @ basis
    off = float(np.max(np.abs(mixed - np.diag(np.diag(mixed)))))
    if off > 1e-9:
        raise ValidationError(
            "basis-eigenstructure", f"basis does not diagonalize the left reduced state (off-diagonal {off:.3e})"
        )
    raw = [basis[:, i].conj() @ m for i in range(basis.shape[1])]
    weight = sum(float(np.linalg.norm(w)) ** 2 for w in raw)
    if abs(weight - 1.0) > 1e-9:
        raise ValidationError("basis-span", f"basis captures weight {weight:.12f} of the state, not 1")
    out = []
    for w in raw:
        c = float(np.linalg.norm(w))
        partner = w / c if c > SCHMIDT_COEFF_CUTOFF else np.zeros_like(w)
        out.append((partner, c if c > SCHMIDT_COEFF_CUTOFF else 0.0))
    return out


def seen_correlation_pure(psi: StateVector, p1: Projector, p2: Projector) -> float:
    """Seen correlation of a two-subsystem pure state, via its correlation operator.

    Equals the generic coincidence-minus-marginals value, but is computed
    entirely from the left reduced state and the antiunitary partner map:
    sum the quadratic form of the right event over the mapped range vectors
    of the left event, then subtract the product of marginals.  The
    orthonormal basis spanning the left event's range is completed
    arbitrarily; the value does not depend on the completion.
    """
    if psi.n_subsystems != 2:
        raise ValidationError("bipartite", f"state must have exactly 2 subsystems, got {psi.n_subsystems}")
    full = psi.density().matrix
    rho1 = partial_trace(full, psi.dims, [1])
    rho2 = partial_trace(full, psi.dims, [2])
    if p1.matrix.shape[0] != rho1.shape[0] or p2.matrix.shape[0] != rho2.shape[0]:
        raise ValidationError("string-dims", "projector dimensions do not match the two subsystems")
    sqrt1 = matrix_sqrt_psd(rho1)
    ua = correlation_operator(psi, ((1,), (2,)))
    # range basis of the left event, from its eigenvectors
    vals, vecs = np.linalg.eigh(p1.matrix)
    range_vectors = [vecs[:, i] for i in range(vals.size) if vals[i] > 0.5]
    total = 0.0
    for q in range_vectors:
        mapped = ua.apply(sqrt1 @ q)
        total += float(np.real(mapped.conj() @ p2.matrix @ mapped))
    m1 = float(np.real(np.trace(rho1 @ p1.matrix)))
    m2 = float(np.real(np.trace(rho2 @ p2.matrix)))
    return abs(total - m1 * m2)
