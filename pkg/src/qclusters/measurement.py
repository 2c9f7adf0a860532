"""Projective (Lüders) measurement on a cluster and its distant effects.

Nonselective measurement maps the state through sum_q P_q rho P_q and never
changes the reduced state of the unmeasured cluster; it only decomposes it
into the weighted mixture of the conditional states.  The selective update
renormalizes a single branch.  A conditional-probability identity ties the
coincidence of a condition event and a distant event to the distant event's
probability in the conditional state, and local unitaries on disjoint
clusters cannot signal across the split.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Iterable, Sequence

import numpy as np

from .correlations import Projector
from .linalg import ValidationError, as_matrix, embed_operator, frobenius_distance, partial_trace
from .states import DensityOperator, cluster_dims, reduced_state

ZERO_EVENT_TOL = 1e-12


@dataclass(frozen=True)
class ProjectiveDecomposition:
    """Pairwise-orthogonal projectors resolving the identity."""

    projectors: tuple[Projector, ...]

    def __post_init__(self):
        if not self.projectors:
            raise ValidationError("decomposition-empty", "need at least one projector")
        dim = self.projectors[0].dim
        total = np.zeros((dim, dim), dtype=complex)
        for p in self.projectors:
            if p.dim != dim:
                raise ValidationError("decomposition-dims", "projectors have mixed dimensions")
            total += p.matrix
        gap = float(np.max(np.abs(total - np.eye(dim))))
        if gap > 1e-10:
            raise ValidationError("identity-resolution", f"max |sum P - I| entry {gap:.3e} exceeds 1e-10")
        for i, p in enumerate(self.projectors):
            for q in self.projectors[i + 1 :]:
                cross = float(np.max(np.abs(p.matrix @ q.matrix)))
                if cross > 1e-10:
                    raise ValidationError("orthogonality", f"max |P_q P_q'| entry {cross:.3e} exceeds 1e-10")

    @property
    def dim(self) -> int:
        return self.projectors[0].dim

    @classmethod
    def from_matrices(cls, matrices: Sequence[np.ndarray]) -> "ProjectiveDecomposition":
        return cls(tuple(Projector(as_matrix(m)) for m in matrices))

    @classmethod
    def from_basis(cls, vectors: Sequence[np.ndarray]) -> "ProjectiveDecomposition":
        """Rank-one decomposition from an orthonormal basis."""
        return cls(tuple(Projector.ray(v) for v in vectors))

    @classmethod
    def computational(cls, dim: int) -> "ProjectiveDecomposition":
        return cls.from_basis(list(np.eye(dim, dtype=complex)))


def _cluster_members(rho: DensityOperator, cluster: Iterable[int]) -> list[int]:
    members = sorted(int(i) for i in cluster)
    if not members:
        raise ValidationError("cluster-nonempty", "measured cluster must be nonempty")
    if members[0] < 1 or members[-1] > rho.n_subsystems:
        raise ValidationError("cluster-range", f"cluster {members} outside 1..{rho.n_subsystems}")
    return members


def _embedded(rho: DensityOperator, cluster: list[int], op: np.ndarray) -> np.ndarray:
    d = prod(cluster_dims(rho.dims, cluster))
    if op.shape != (d, d):
        raise ValidationError("operator-dim", f"operator shape {op.shape} does not match cluster dim {d}")
    return embed_operator(op, rho.dims, cluster)


def luders_nonselective(
    rho: DensityOperator, measured: Iterable[int], pd: ProjectiveDecomposition
) -> DensityOperator:
    """Nonselective projective update: sum over projected branches."""
    members = _cluster_members(rho, measured)
    out = np.zeros_like(rho.matrix)
    for p in pd.projectors:
        e = _embedded(rho, members, p.matrix)
        out += e @ rho.matrix @ e
    return DensityOperator(rho.dims, out)


def luders_selective(rho: DensityOperator, measured: Iterable[int], p: Projector) -> DensityOperator:
    """Selective projective update onto one outcome; zero-probability events
    have no conditional state and raise."""
    members = _cluster_members(rho, measured)
    e = _embedded(rho, members, p.matrix)
    w = float(np.real(np.trace(rho.matrix @ e)))
    if w <= ZERO_EVENT_TOL:
        raise ValidationError("zero-probability-event", f"outcome probability {w:.3e} is not positive")
    return DensityOperator(rho.dims, e @ rho.matrix @ e / w)


@dataclass(frozen=True)
class DistantDecomposition:
    """Mixture of the unmeasured cluster's conditional states.

    Weights are the outcome probabilities; zero-probability outcomes are
    omitted.  The weighted mixture reassembles the unmeasured cluster's
    reduced state, which the measurement does not change.
    """

    distant_cluster: tuple[int, ...]
    outcomes: tuple[tuple[float, DensityOperator], ...]

    def __post_init__(self):
        total = sum(w for w, _ in self.outcomes)
        if abs(total - 1.0) > 1e-10:
            raise ValidationError("weights-normalized", f"|sum of weights - 1| = {abs(total - 1.0):.3e}")

    def mixture(self) -> np.ndarray:
        out = None
        for w, state in self.outcomes:
            out = w * state.matrix if out is None else out + w * state.matrix
        return out


def conditional_state(
    rho: DensityOperator, measured: Iterable[int], p: Projector, distant: Iterable[int]
) -> tuple[float, DensityOperator]:
    """Outcome probability and the distant cluster's conditional state."""
    members = _cluster_members(rho, measured)
    distant_members = sorted(int(i) for i in distant)
    if set(distant_members) & set(members):
        raise ValidationError("clusters-disjoint", "measured and distant clusters overlap")
    e = _embedded(rho, members, p.matrix)
    w = float(np.real(np.trace(rho.matrix @ e)))
    if w <= ZERO_EVENT_TOL:
        raise ValidationError("zero-probability-event", f"outcome probability {w:.3e} is not positive")
    block = partial_trace(rho.matrix @ e, rho.dims, distant_members)
    return w, DensityOperator(cluster_dims(rho.dims, distant_members), block / w)


def distant_decomposition(
    rho: DensityOperator, measured: Iterable[int], pd: ProjectiveDecomposition
) -> DistantDecomposition:
    """Decompose the unmeasured cluster's state over the measurement outcomes."""
    members = _cluster_members(rho, measured)
    distant_members = [i for i in range(1, rho.n_subsystems + 1) if i not in set(members)]
    if not distant_members:
        raise ValidationError("distant-nonempty", "measurement covers every subsystem; nothing is distant")
    outcomes = []
    for p in pd.projectors:
        e = _embedded(rho, members, p.matrix)
        w = float(np.real(np.trace(rho.matrix @ e)))
        if w <= ZERO_EVENT_TOL:
            continue
        block = partial_trace(rho.matrix @ e, rho.dims, distant_members)
        outcomes.append((w, DensityOperator(cluster_dims(rho.dims, distant_members), block / w)))
    return DistantDecomposition(distant_cluster=tuple(distant_members), outcomes=tuple(outcomes))


def conditional_probability_identity(
    rho: DensityOperator,
    measured: Iterable[int],
    condition: Projector,
    distant: Iterable[int],
    event: Projector,
) -> tuple[float, float, float]:
    """Coincidence of condition and distant event vs the conditional route.

    Returns (coincidence, probability-times-conditional, gap); the two
    sides agree identically in the formalism.
    """
    members = _cluster_members(rho, measured)
    distant_members = sorted(int(i) for i in distant)
    w, cond_state = conditional_state(rho, members, condition, distant_members)
    e1 = _embedded(rho, members, condition.matrix)
    e2 = _embedded(rho, distant_members, event.matrix)
    lhs = float(np.real(np.trace(rho.matrix @ e1 @ e2)))
    rhs = w * float(np.real(np.trace(cond_state.matrix @ event.matrix)))
    return lhs, rhs, abs(lhs - rhs)


def _require_unitary(u: np.ndarray, name: str) -> np.ndarray:
    u = as_matrix(u)
    gap = float(np.linalg.norm(u.conj().T @ u - np.eye(u.shape[0])))
    if gap > 1e-9:
        raise ValidationError("unitarity", f"||{name}^dag {name} - I|| = {gap:.3e} exceeds 1e-9")
    return u


def local_unitary_no_signaling(
    rho: DensityOperator,
    interacting: Iterable[int],
    distant: Iterable[int],
    u_interacting: np.ndarray,
    u_distant: np.ndarray,
    steps: int = 1,
) -> float:
    """Evolve by a product of cluster-local unitaries and track the distant state.

    Returns the largest Frobenius deviation, over the steps, between the
    distant reduced state of the evolved whole and the locally evolved
    distant state.  The deviation vanishes: interaction inside one cluster
    does not reach the other through correlations.
    """
    members = _cluster_members(rho, interacting)
    distant_members = sorted(int(i) for i in distant)
    if set(members) & set(distant_members):
        raise ValidationError("clusters-disjoint", "interacting and distant clusters overlap")
    if sorted(members + distant_members) != list(range(1, rho.n_subsystems + 1)):
        raise ValidationError("clusters-cover", "clusters must cover all subsystems")
    u_i = _require_unitary(u_interacting, "U_interacting")
    u_d = _require_unitary(u_distant, "U_distant")
    full = _embedded(rho, members, u_i) @ _embedded(rho, distant_members, u_d)
    current = rho.matrix
    local = reduced_state(rho, distant_members).matrix
    worst = 0.0
    for _ in range(max(1, int(steps))):
        current = full @ current @ full.conj().T
        local = u_d @ local @ u_d.conj().T
        dev = frobenius_distance(partial_trace(current, rho.dims, distant_members), local)
        worst = max(worst, dev)
    return worst
