"""Cluster decompositions: partitions of the subsystem index set {1..N}.

The text form separates clusters with ``|`` and members with ``,``, e.g.
``1,2|3,4``.  Clusters are kept canonical: members ascending, clusters
ordered by smallest member, so equality is structural.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .linalg import ValidationError

MAX_ENUMERATION = 12


@dataclass(frozen=True)
class ClusterDecomposition:
    clusters: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        members = [i for c in self.clusters for i in c]
        if not members:
            raise ValidationError("clusters-nonempty", "a cluster decomposition needs at least one cluster")
        if any(len(c) == 0 for c in self.clusters):
            raise ValidationError("clusters-nonempty", "clusters must be nonempty")
        n = len(members)
        if len(set(members)) != n:
            raise ValidationError("clusters-disjoint", "clusters overlap or repeat a subsystem index")
        if set(members) != set(range(1, n + 1)):
            raise ValidationError("clusters-cover", f"cluster members must be exactly 1..{n}, got {sorted(members)}")
        canonical = tuple(sorted((tuple(sorted(c)) for c in self.clusters), key=lambda c: c[0]))
        object.__setattr__(self, "clusters", canonical)

    @classmethod
    def of(cls, clusters: Iterable[Iterable[int]]) -> "ClusterDecomposition":
        return cls(tuple(tuple(int(i) for i in c) for c in clusters))

    @classmethod
    def trivial(cls, n: int) -> "ClusterDecomposition":
        """The single-cluster decomposition of {1..n}."""
        return cls.of([range(1, n + 1)])

    @classmethod
    def singletons(cls, n: int) -> "ClusterDecomposition":
        """The maximal decomposition: every subsystem its own cluster."""
        return cls.of([[i] for i in range(1, n + 1)])

    @classmethod
    def parse(cls, text: str) -> "ClusterDecomposition":
        """Parse the ``1,2|3,4`` form; rejects duplicates and gaps."""
        clusters = []
        for part in text.split("|"):
            items = [s.strip() for s in part.split(",")]
            if any(not s for s in items):
                raise ValidationError("partition-syntax", f"empty member in cluster {part!r}")
            try:
                clusters.append([int(s) for s in items])
            except ValueError:
                raise ValidationError("partition-syntax", f"non-integer member in cluster {part!r}") from None
        return cls.of(clusters)

    def __str__(self) -> str:
        return "|".join(",".join(str(i) for i in c) for c in self.clusters)

    @property
    def n_subsystems(self) -> int:
        return sum(len(c) for c in self.clusters)

    @property
    def n_clusters(self) -> int:
        return len(self.clusters)

    def cluster_containing(self, index: int) -> int:
        """1-based position of the cluster holding a subsystem index."""
        for k, c in enumerate(self.clusters, start=1):
            if index in c:
                return k
        raise ValidationError("index-range", f"subsystem {index} not in 1..{self.n_subsystems}")


def coarsen(fine: ClusterDecomposition, grouping: Iterable[Iterable[int]]) -> ClusterDecomposition:
    """Merge clusters of `fine` according to a partition of its cluster list.

    `grouping` holds 1-based cluster positions, e.g. ``[[1, 2], [3]]`` merges
    the first two clusters.
    """
    groups = [tuple(int(g) for g in grp) for grp in grouping]
    seen = [g for grp in groups for g in grp]
    if sorted(seen) != list(range(1, fine.n_clusters + 1)):
        raise ValidationError(
            "grouping", f"grouping must partition cluster positions 1..{fine.n_clusters}, got {groups}"
        )
    merged = [[i for g in grp for i in fine.clusters[g - 1]] for grp in groups]
    return ClusterDecomposition.of(merged)


def is_coarsening(a: ClusterDecomposition, b: ClusterDecomposition) -> bool:
    """True iff every cluster of `b` is a union of clusters of `a`.

    Equivalently (both being partitions of the same set): every cluster of
    `a` lies wholly inside a single cluster of `b`.
    """
    if a.n_subsystems != b.n_subsystems:
        raise ValidationError("partition-size", "decompositions cover different index sets")
    host = {i: set(cb) for cb in b.clusters for i in cb}
    return all(set(ca) <= host[ca[0]] for ca in a.clusters)


def intersect(a: ClusterDecomposition, b: ClusterDecomposition) -> ClusterDecomposition:
    """Common refinement: all nonempty pairwise intersections of clusters."""
    if a.n_subsystems != b.n_subsystems:
        raise ValidationError("partition-size", "decompositions cover different index sets")
    out = []
    for ca in a.clusters:
        for cb in b.clusters:
            common = sorted(set(ca) & set(cb))
            if common:
                out.append(common)
    return ClusterDecomposition.of(out)


def intersect_all(decompositions: Sequence[ClusterDecomposition]) -> ClusterDecomposition:
    result = decompositions[0]
    for d in decompositions[1:]:
        result = intersect(result, d)
    return result


def enumerate_partitions(n: int) -> Iterator[ClusterDecomposition]:
    """Yield every partition of {1..n} exactly once (Bell-number count)."""
    if not 1 <= n <= MAX_ENUMERATION:
        raise ValidationError("partition-range", f"n must be in 1..{MAX_ENUMERATION}, got {n}")

    def place(i: int, blocks: list[list[int]]) -> Iterator[ClusterDecomposition]:
        if i > n:
            yield ClusterDecomposition.of([list(b) for b in blocks])
            return
        for b in blocks:
            b.append(i)
            yield from place(i + 1, blocks)
            b.pop()
        blocks.append([i])
        yield from place(i + 1, blocks)
        blocks.pop()

    yield from place(1, [])
