"""Correlations probed by strings of cluster events.

A string of subsystem events assigns one projector (or the identity) to each
cluster of a decomposition.  The correlation it "sees" in a state is the
absolute difference between the coincidence probability and the product of
the per-cluster marginal probabilities; events are uncorrelated exactly when
every such string sees zero.  The entropy-based correlation information
splits the total entropy deficit into within-cluster and among-cluster
parts, and the two always add up to the total.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod
from typing import Iterable, Optional, Sequence

import numpy as np

from .linalg import HERMITICITY_TOL, ValidationError, as_matrix, as_vector, embed_operator
from .partitions import ClusterDecomposition
from .states import DensityOperator, cluster_dims, reduced_state

ZERO_PROBABILITY_TOL = 1e-12
ENTROPY_EIGENVALUE_CUTOFF = 1e-12


@dataclass(frozen=True)
class Projector:
    """Hermitian idempotent matrix; rank is derived from the trace."""

    matrix: np.ndarray
    rank: int = field(init=False)

    def __post_init__(self):
        m = as_matrix(self.matrix)
        if m.shape[0] != m.shape[1]:
            raise ValidationError("matrix-square", f"projector must be square, got {m.shape}")
        dev = float(np.max(np.abs(m - m.conj().T)))
        if dev > HERMITICITY_TOL:
            raise ValidationError("hermiticity", f"max |P - P^dag| entry {dev:.3e} exceeds {HERMITICITY_TOL:g}")
        idem = float(np.max(np.abs(m @ m - m)))
        if idem > HERMITICITY_TOL:
            raise ValidationError("idempotence", f"max |P^2 - P| entry {idem:.3e} exceeds {HERMITICITY_TOL:g}")
        rank = int(round(float(np.real(np.trace(m)))))
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "rank", rank)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def ray(cls, vector) -> "Projector":
        """Rank-one projector onto the ray of a (normalized) vector."""
        v = as_vector(vector)
        norm = float(np.linalg.norm(v))
        if norm < 1e-12:
            raise ValidationError("ray-nonzero", "cannot project onto a zero vector")
        v = v / norm
        return cls(np.outer(v, v.conj()))

    @classmethod
    def identity(cls, dim: int) -> "Projector":
        return cls(np.eye(dim, dtype=complex))


@dataclass(frozen=True)
class EventString:
    """One projector per cluster; ``None`` marks the certain event (identity)."""

    decomposition: ClusterDecomposition
    entries: tuple[Optional[Projector], ...]

    def __post_init__(self):
        if len(self.entries) != self.decomposition.n_clusters:
            raise ValidationError(
                "string-alignment",
                f"{len(self.entries)} entries for {self.decomposition.n_clusters} clusters",
            )
        object.__setattr__(self, "entries", tuple(self.entries))

    @classmethod
    def of(cls, cd: ClusterDecomposition, entries: Sequence[Optional[Projector]]) -> "EventString":
        return cls(cd, tuple(entries))

    @classmethod
    def all_identity(cls, cd: ClusterDecomposition) -> "EventString":
        return cls(cd, tuple(None for _ in cd.clusters))

    def check_against(self, dims: Sequence[int]) -> None:
        for c, p in zip(self.decomposition.clusters, self.entries):
            if p is None:
                continue
            d = prod(cluster_dims(dims, c))
            if p.dim != d:
                raise ValidationError(
                    "string-dims", f"projector of dim {p.dim} on cluster {c} of dim {d}"
                )

    def operator(self, dims: Sequence[int]) -> np.ndarray:
        """The full-space coincidence event: the product of embedded entries."""
        self.check_against(dims)
        total = prod(dims)
        out = np.eye(total, dtype=complex)
        for c, p in zip(self.decomposition.clusters, self.entries):
            if p is None:
                continue
            out = out @ embed_operator(p.matrix, dims, c)
        return out


@dataclass(frozen=True)
class CorrelationReport:
    """Correlation a single event string sees in a state.

    `seen` is the absolute difference between coincidence and marginal
    product; `signed` keeps the direction (increase vs decrease of the
    coincidence probability).
    """

    coincidence: float
    marginal_product: float
    seen: float
    signed: float

    def __post_init__(self):
        if abs(self.seen - abs(self.signed)) > 1e-15:
            raise ValidationError("seen-abs", "seen must equal |signed|")
        if self.seen > 1.0 + 1e-10:
            raise ValidationError("seen-bound", f"seen = {self.seen} exceeds 1")


@dataclass(frozen=True)
class CorrelationInformation:
    """Entropy-deficit correlation measures, in bits."""

    decomposition: ClusterDecomposition
    cluster_informations: tuple[float, ...]
    among_clusters: float
    total: float

    def __post_init__(self):
        gap = abs(self.total - (sum(self.cluster_informations) + self.among_clusters))
        if gap > 1e-9:
            raise ValidationError("information-additivity", f"components miss the total by {gap:.3e}")


def _clamp_probability(x: float) -> float:
    if x < -1e-10 or x > 1.0 + 1e-10:
        raise ValidationError("probability-range", f"probability {x} outside [0,1] beyond tolerance")
    return min(1.0, max(0.0, x))


def coincidence_probability(rho: DensityOperator, string: EventString) -> float:
    """Probability of the joint event described by the string."""
    op = string.operator(rho.dims)
    return _clamp_probability(float(np.real(np.trace(rho.matrix @ op))))


def marginal_probabilities(rho: DensityOperator, string: EventString) -> list[float]:
    """Per-cluster event probabilities, computed from the reduced states."""
    string.check_against(rho.dims)
    out = []
    for c, p in zip(string.decomposition.clusters, string.entries):
        if p is None:
            out.append(1.0)
            continue
        rho_c = reduced_state(rho, c)
        out.append(_clamp_probability(float(np.real(np.trace(rho_c.matrix @ p.matrix)))))
    return out


def seen_correlation(rho: DensityOperator, string: EventString) -> CorrelationReport:
    """Correlation the string sees: |coincidence - product of marginals|."""
    coincidence = coincidence_probability(rho, string)
    product = float(prod(marginal_probabilities(rho, string)))
    signed = coincidence - product
    return CorrelationReport(
        coincidence=coincidence, marginal_product=product, seen=abs(signed), signed=signed
    )


def check_zero_probability_blindness(rho: DensityOperator, string: EventString) -> bool:
    """True iff the string contains a zero-probability event.

    Such a string is blind: it sees no correlations.  That consequence is
    re-checked here and a violation (which the formalism rules out) raises.
    """
    margins = marginal_probabilities(rho, string)
    has_zero = any(
        m <= ZERO_PROBABILITY_TOL and p is not None
        for m, p in zip(margins, string.entries)
    )
    if not has_zero:
        return False
    report = seen_correlation(rho, string)
    if report.seen > 1e-10:
        raise ValidationError(
            "zero-probability-blindness",
            f"string with a zero-probability event saw {report.seen:.3e}",
        )
    return True


def entropy_of_spectrum(eigenvalues: np.ndarray) -> float:
    """Shannon entropy (bits) of a spectrum, with 0 log 0 = 0."""
    lam = np.real(np.asarray(eigenvalues))
    lam = lam[lam > ENTROPY_EIGENVALUE_CUTOFF]
    if lam.size == 0:
        return 0.0
    return float(-np.sum(lam * np.log2(lam)))


def von_neumann_entropy(rho: DensityOperator) -> float:
    """Von Neumann entropy in bits."""
    return entropy_of_spectrum(rho.eigenvalues())


def correlation_information(rho: DensityOperator, cd: ClusterDecomposition) -> CorrelationInformation:
    """Split the total correlation information across a decomposition.

    Within-cluster informations sum the single-subsystem entropies against
    the cluster entropy; the among-clusters part compares cluster entropies
    with the global one.  Their sum is the total entropy deficit.
    """
    if cd.n_subsystems != rho.n_subsystems:
        raise ValidationError("partition-size", "decomposition does not match the state's subsystem count")
    singles = [von_neumann_entropy(reduced_state(rho, [i])) for i in range(1, rho.n_subsystems + 1)]
    cluster_entropies = [von_neumann_entropy(reduced_state(rho, c)) for c in cd.clusters]
    total_entropy = von_neumann_entropy(rho)
    per_cluster = tuple(
        sum(singles[i - 1] for i in c) - s for c, s in zip(cd.clusters, cluster_entropies)
    )
    among = sum(cluster_entropies) - total_entropy
    total = sum(singles) - total_entropy
    return CorrelationInformation(
        decomposition=cd,
        cluster_informations=per_cluster,
        among_clusters=among,
        total=total,
    )
