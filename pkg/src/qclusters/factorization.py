"""Tensor factorization of multipartite states over cluster decompositions.

A decomposition is uncorrelated (a UCD) when the state equals the tensor
product of its cluster reduced states.  Every state owns a unique finest
UCD; all UCDs and only they are its coarsenings.  `finest_ucd` finds it by
recursive bipartition splitting: factor off one subset at a time, then
split the halves further, which is justified because a UCD induces UCDs on
subsets and continuations of UCDs are UCDs.  `finest_ucd_exhaustive`
cross-checks the result by intersecting every uncorrelated partition.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import prod
from typing import Iterable, Sequence

import numpy as np

from .correlations import EventString, Projector, seen_correlation
from .linalg import ValidationError, frobenius_distance
from .partitions import ClusterDecomposition, enumerate_partitions, intersect_all
from .sampling import random_ray, rng_from
from .states import DensityOperator, assemble_product, cluster_dims, reduced_state

AMBIGUITY_DECADE = 10.0


def default_tolerance(rho: DensityOperator) -> float:
    return 1e-9 * rho.dim


def is_ucd(
    rho: DensityOperator, cd: ClusterDecomposition, tol: float | None = None
) -> tuple[bool, float]:
    """Does the state tensor-factorize over the decomposition?

    Returns the verdict and the Frobenius distance between the state and
    the product of its cluster reduced states.
    """
    if tol is None:
        tol = default_tolerance(rho)
    residual = frobenius_distance(rho.matrix, assemble_product(rho, cd))
    return residual <= tol, residual


@dataclass(frozen=True)
class SplitRecord:
    """One accepted bipartition split during the finest-decomposition search."""

    cluster: tuple[int, ...]
    parts: tuple[tuple[int, ...], tuple[int, ...]]
    residual: float


@dataclass(frozen=True)
class FactorizationResult:
    decomposition: ClusterDecomposition
    splits: tuple[SplitRecord, ...]
    overall_residual: float
    tolerance: float
    flags: tuple[str, ...]

    @property
    def residuals(self) -> tuple[float, ...]:
        return tuple(s.residual for s in self.splits) + (self.overall_residual,)


def _bipartitions(members: Sequence[int]) -> Iterable[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Two-block splits of `members`, smaller side first, lexicographic
    within a size; equal halves are emitted once."""
    m = len(members)
    for size in range(1, m // 2 + 1):
        for side in itertools.combinations(members, size):
            rest = tuple(i for i in members if i not in side)
            if size * 2 == m and members[0] not in side:
                continue
            yield side, rest


def finest_ucd(rho: DensityOperator, tol: float | None = None) -> FactorizationResult:
    """Finest uncorrelated cluster decomposition, by recursive splitting.

    The first factorizing bipartition (in the deterministic search order)
    is taken and both halves are split further; uniqueness of the finest
    decomposition makes the outcome independent of that order.  Residuals
    within a decade of the tolerance, on either side, are reported in
    `flags` instead of being silently classified.
    """
    if tol is None:
        tol = default_tolerance(rho)
    splits: list[SplitRecord] = []
    flags: list[str] = []

    def ambiguity_check(cluster, parts, residual):
        if tol / AMBIGUITY_DECADE < residual < tol * AMBIGUITY_DECADE:
            verdict = "accepted" if residual <= tol else "rejected"
            flags.append(
                f"near-threshold split {parts[0]}/{parts[1]} of {cluster}: "
                f"residual {residual:.3e} vs tol {tol:.3e} ({verdict})"
            )

    def split(members: tuple[int, ...], rho_c: DensityOperator) -> list[tuple[int, ...]]:
        if len(members) == 1:
            return [members]
        local = {g: k + 1 for k, g in enumerate(members)}
        for side, rest in _bipartitions(members):
            cd_local = ClusterDecomposition.of([[local[g] for g in side], [local[g] for g in rest]])
            ok, residual = is_ucd(rho_c, cd_local, tol)
            ambiguity_check(members, (side, rest), residual)
            if ok:
                splits.append(SplitRecord(cluster=members, parts=(side, rest), residual=residual))
                out = []
                for half in (side, rest):
                    rho_half = reduced_state(rho_c, [local[g] for g in half])
                    out.extend(split(half, rho_half))
                return out
        return [members]

    clusters = split(tuple(range(1, rho.n_subsystems + 1)), rho)
    cd = ClusterDecomposition.of(clusters)
    _, overall = is_ucd(rho, cd, tol)
    if overall > tol:
        flags.append(f"overall reassembly residual {overall:.3e} exceeds tol {tol:.3e}")
    return FactorizationResult(
        decomposition=cd,
        splits=tuple(splits),
        overall_residual=overall,
        tolerance=tol,
        flags=tuple(flags),
    )


def finest_ucd_exhaustive(rho: DensityOperator, tol: float | None = None) -> ClusterDecomposition:
    """Intersection of every uncorrelated partition (exhaustive cross-check)."""
    n = rho.n_subsystems
    if n > 8:
        raise ValidationError("subsystem-count", f"exhaustive search capped at 8 subsystems, got {n}")
    if tol is None:
        tol = default_tolerance(rho)
    ucds = [cd for cd in enumerate_partitions(n) if is_ucd(rho, cd, tol)[0]]
    return intersect_all(ucds)


def classify_homogeneity(rho: DensityOperator, cluster: Iterable[int], tol: float | None = None) -> str:
    """"homogeneous" iff the cluster is one factor of the finest decomposition."""
    members = tuple(sorted(int(i) for i in cluster))
    finest = finest_ucd(rho, tol).decomposition
    return "homogeneous" if members in finest.clusters else "heterogeneous"


def is_correlationally_isolated(
    extended: DensityOperator, system: Iterable[int], tol: float | None = None
) -> bool:
    """Is the system a tensor factor of the extended state?

    True when the extended state splits as system (x) rest; every subsystem
    of an isolated system is then isolated as well.
    """
    members = sorted(int(i) for i in system)
    n = extended.n_subsystems
    if not members or len(members) >= n:
        raise ValidationError("system-proper", "system must be a proper nonempty subset of the subsystems")
    rest = [i for i in range(1, n + 1) if i not in set(members)]
    cd = ClusterDecomposition.of([members, rest])
    ok, _ = is_ucd(extended, cd, tol)
    return ok


def find_correlation_witness(
    rho: DensityOperator,
    cd: ClusterDecomposition,
    seed=None,
    budget: int = 10_000,
    threshold: float = 1e-4,
) -> EventString | None:
    """Search random product ray-projector strings for one that sees
    correlation above `threshold`.  Returns None if the budget is exhausted,
    which for a genuinely uncorrelated decomposition is the expected outcome."""
    rng = rng_from(seed)
    dims_per_cluster = [prod(cluster_dims(rho.dims, c)) for c in cd.clusters]
    for _ in range(budget):
        entries = tuple(Projector.ray(random_ray(d, rng)) for d in dims_per_cluster)
        string = EventString.of(cd, entries)
        if seen_correlation(rho, string).seen > threshold:
            return string
    return None


@dataclass(frozen=True)
class SeevinckCheck:
    """Both sides of the four-observable factorization condition."""

    lhs: float
    rhs: float
    holds: bool

    @property
    def gap(self) -> float:
        return abs(self.lhs - self.rhs)


def seevinck_condition(
    rho: DensityOperator,
    groups: ClusterDecomposition,
    projectors: Sequence[Projector],
    tol: float = 1e-10,
) -> SeevinckCheck:
    """Seevinck's factorization condition for a four-subsystem state.

    The coincidence probability of one projector per finest subsystem must
    equal the product of the two group-level coincidence probabilities in
    the group reduced states.  It holds for every projector quadruple
    exactly when the two groups are uncorrelated clusters.
    """
    if rho.n_subsystems != 4:
        raise ValidationError("subsystem-count", f"expected 4 subsystems, got {rho.n_subsystems}")
    if groups.n_subsystems != 4 or groups.n_clusters != 2:
        raise ValidationError("groups", "groups must split the four subsystems into two clusters")
    if len(projectors) != 4:
        raise ValidationError("projector-count", f"expected 4 projectors, got {len(projectors)}")
    for i, p in enumerate(projectors, start=1):
        if p.dim != rho.dims[i - 1]:
            raise ValidationError("string-dims", f"projector {i} has dim {p.dim}, subsystem has {rho.dims[i - 1]}")
    maximal = ClusterDecomposition.singletons(4)
    lhs = float(
        np.real(np.trace(rho.matrix @ EventString.of(maximal, tuple(projectors)).operator(rho.dims)))
    )
    rhs = 1.0
    for group in groups.clusters:
        rho_g = reduced_state(rho, group)
        op = None
        for i in group:
            p = projectors[i - 1].matrix
            op = p if op is None else np.kron(op, p)
        rhs *= float(np.real(np.trace(rho_g.matrix @ op)))
    return SeevinckCheck(lhs=lhs, rhs=rhs, holds=abs(lhs - rhs) <= tol)


@dataclass(frozen=True)
class SeevinckSearchResult:
    samples: int
    max_gap: float
    worst: SeevinckCheck
    witness: tuple[np.ndarray, ...] | None


def seevinck_violation_search(
    rho: DensityOperator,
    groups: ClusterDecomposition,
    seed=None,
    budget: int = 1000,
    threshold: float = 1e-3,
    tol: float = 1e-10,
) -> SeevinckSearchResult:
    """Sample random ray-projector quadruples looking for a violation.

    Keeps the largest gap seen; `witness` holds the ray vectors of the
    first quadruple whose gap exceeds `threshold`, if any.
    """
    rng = rng_from(seed)
    max_gap = -1.0
    worst = None
    witness = None
    for _ in range(budget):
        rays = tuple(random_ray(rho.dims[i], rng) for i in range(4))
        check = seevinck_condition(rho, groups, [Projector.ray(v) for v in rays], tol)
        if check.gap > max_gap:
            max_gap, worst = check.gap, check
        if witness is None and check.gap > threshold:
            witness = rays
    return SeevinckSearchResult(samples=budget, max_gap=max_gap, worst=worst, witness=witness)
