"""Canonical named states and projector families used by tests and the CLI.

Spin labels are bound globally: |+> = |up> = index 0, |-> = |down> = index 1.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .correlations import Projector
from .linalg import ValidationError
from .measurement import ProjectiveDecomposition
from .states import DensityOperator, StateVector

_SQ2 = 1.0 / np.sqrt(2.0)

PLUS = np.array([1.0, 0.0], dtype=complex)
MINUS = np.array([0.0, 1.0], dtype=complex)
X_PLUS = np.array([_SQ2, _SQ2], dtype=complex)
X_MINUS = np.array([_SQ2, -_SQ2], dtype=complex)


def singlet() -> StateVector:
    """(|+->  - |-+>)/sqrt(2) on two qubits."""
    return StateVector((2, 2), np.array([0.0, _SQ2, -_SQ2, 0.0], dtype=complex))


def bell_psi_plus() -> StateVector:
    return StateVector((2, 2), np.array([0.0, _SQ2, _SQ2, 0.0], dtype=complex))


def bell_psi_minus() -> StateVector:
    return singlet()


def bell_phi_plus() -> StateVector:
    return StateVector((2, 2), np.array([_SQ2, 0.0, 0.0, _SQ2], dtype=complex))


def bell_phi_minus() -> StateVector:
    return StateVector((2, 2), np.array([_SQ2, 0.0, 0.0, -_SQ2], dtype=complex))


def singlet_pair() -> StateVector:
    """Tensor product of two singlets on subsystems (1,2) and (3,4)."""
    s = singlet().amplitudes
    return StateVector((2, 2, 2, 2), np.kron(s, s))


def singlet_pair_2314() -> StateVector:
    """The singlet pair with its factors rearranged to the order 2,3,1,4."""
    return singlet_pair().permute((2, 3, 1, 4))


def seevinck4() -> StateVector:
    """(|up down up down> - |down up down up>)/sqrt(2) on four qubits."""
    v = np.zeros(16, dtype=complex)
    v[0b0101] = _SQ2
    v[0b1010] = -_SQ2
    return StateVector((2, 2, 2, 2), v)


def ghz3() -> StateVector:
    """(|+++> + |--->)/sqrt(2) on three qubits."""
    v = np.zeros(8, dtype=complex)
    v[0] = _SQ2
    v[7] = _SQ2
    return StateVector((2, 2, 2), v)


def mixed_qubit() -> DensityOperator:
    return DensityOperator.maximally_mixed((2,))


def mixed_two_qubits() -> DensityOperator:
    return DensityOperator.maximally_mixed((2, 2))


_FIXTURES: dict[str, Callable[[], StateVector | DensityOperator]] = {
    "singlet": singlet,
    "psi_plus": bell_psi_plus,
    "psi_minus": bell_psi_minus,
    "phi_plus": bell_phi_plus,
    "phi_minus": bell_phi_minus,
    "singlet_pair": singlet_pair,
    "singlet_pair_2314": singlet_pair_2314,
    "seevinck4": seevinck4,
    "ghz3": ghz3,
    "mixed_qubit": mixed_qubit,
    "mixed_two_qubits": mixed_two_qubits,
}


def fixture_names() -> list[str]:
    return sorted(_FIXTURES)


def fixture(name: str) -> StateVector | DensityOperator:
    """Build a named canonical state; unknown names list what exists."""
    try:
        builder = _FIXTURES[name]
    except KeyError:
        raise ValidationError(
            "fixture-name", f"unknown fixture {name!r}; available: {', '.join(fixture_names())}"
        ) from None
    return builder()


def bell_basis() -> tuple[list[np.ndarray], list[str]]:
    """The four Bell vectors on two qubits, with their conventional labels."""
    states = [bell_psi_plus(), bell_psi_minus(), bell_phi_plus(), bell_phi_minus()]
    return [s.amplitudes for s in states], ["psi_plus", "psi_minus", "phi_plus", "phi_minus"]


def z_projectors() -> list[Projector]:
    return [Projector.ray(PLUS), Projector.ray(MINUS)]


def x_projectors() -> list[Projector]:
    return [Projector.ray(X_PLUS), Projector.ray(X_MINUS)]


def measurement_family(kind: str, dim: int) -> ProjectiveDecomposition:
    """Named projective decompositions for the CLI: z (any dim), x (qubits),
    bell (two qubits)."""
    if kind == "z":
        return ProjectiveDecomposition.computational(dim)
    if kind == "x":
        if dim != 2:
            raise ValidationError("measurement-family", f"x basis defined for qubits only, cluster dim {dim}")
        return ProjectiveDecomposition.from_basis([X_PLUS, X_MINUS])
    if kind == "bell":
        if dim != 4:
            raise ValidationError("measurement-family", f"bell basis needs a two-qubit cluster, got dim {dim}")
        vectors, _ = bell_basis()
        return ProjectiveDecomposition.from_basis(vectors)
    raise ValidationError("measurement-family", f"unknown projector family {kind!r}")
