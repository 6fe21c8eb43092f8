"""Flip metrics: worst-case distances over all flips of a partition.

The distance between u and v under a partition is the maximum shortest-path
distance over every flip of that partition; a defining vertex set S induces
the same notion through its neighborhood-class partition, and a family of
defining sets takes the pointwise maximum over its members.  Everything here
is computed exactly by enumerating flips; per-flip distance matrices are
batched and folded with max, so no flip is ever stored.
"""

from __future__ import annotations

import numpy as np

from .errors import CapExceeded, DomainError
from .flips import (
    Partition,
    default_max_parts,
    definable_partition,
    flip_adjacency_batch,
    num_flips,
)
from .graphs import (
    INF,
    UNREACHED,
    ExtDist,
    Graph,
    batched_distance_matrices,
    fold_max_distances,
)

#: Flips per chunk when folding distance matrices over large enumerations.
_CHUNK = 1 << 14


class SetFamily:
    """A family of vertex sets, optionally required to be t-uniform."""

    __slots__ = ("sets", "uniform_size")

    def __init__(self, sets, uniform_size: int | None = None):
        canon = sorted({tuple(sorted(set(s))) for s in sets})
        if uniform_size is not None:
            for s in canon:
                if len(s) != uniform_size:
                    raise DomainError(
                        f"set {s} has size {len(s)}, family declared {uniform_size}-uniform"
                    )
        self.sets = tuple(canon)
        self.uniform_size = uniform_size

    def __len__(self) -> int:
        return len(self.sets)

    def __iter__(self):
        return iter(self.sets)

    def union(self) -> frozenset[int]:
        return frozenset(v for s in self.sets for v in s)

    def __eq__(self, other):
        if not isinstance(other, SetFamily):
            return NotImplemented
        return self.sets == other.sets

    def __repr__(self) -> str:
        return f"SetFamily({list(self.sets)!r})"


def _check_cap(k: int, cap: int | None) -> None:
    cap = default_max_parts() if cap is None else cap
    if k > cap:
        raise CapExceeded(
            f"metric over a {k}-part partition exceeds the cap {cap} "
            "(raise with --max-parts / FLIPKIT_MAX_PARTS)"
        )


def dist_partition_matrix(
    g: Graph, p: Partition, *, max_parts: int | None = None
) -> np.ndarray:
    """All-pairs partition distance, sentinel-coded (-1 = INF).

    One distance matrix per flip, folded with the absorbing max.
    """
    if p.n != g.n:
        raise DomainError(f"partition is over n={p.n}, graph has n={g.n}")
    _check_cap(len(p.parts), max_parts)
    total = num_flips(len(p.parts))
    out = None
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total), dtype=np.uint64)
        adjs = flip_adjacency_batch(g, p, idx)
        folded = fold_max_distances(batched_distance_matrices(adjs))
        if out is None:
            out = folded
        else:
            out = np.where(
                (out == UNREACHED) | (folded == UNREACHED),
                UNREACHED,
                np.maximum(out, folded),
            )
    return out


def dist_partition(
    g: Graph, p: Partition, u: int, v: int, *, max_parts: int | None = None
) -> ExtDist:
    """Maximum over all flips of the u-v distance; INF if any flip separates."""
    g._check_vertex(u)
    g._check_vertex(v)
    value = dist_partition_matrix(g, p, max_parts=max_parts)[u, v]
    return INF if value == UNREACHED else int(value)


def dist_definable_matrix(
    g: Graph, s, *, max_parts: int | None = None
) -> np.ndarray:
    p = definable_partition(g, s)
    cap = default_max_parts() if max_parts is None else max_parts
    if len(p.parts) > cap:
        raise CapExceeded(
            f"defining set {sorted(set(s))} induces {len(p.parts)} parts, above the "
            f"cap {cap}; use a smaller set or raise --max-parts / FLIPKIT_MAX_PARTS"
        )
    return dist_partition_matrix(g, p, max_parts=cap)


def dist_definable(
    g: Graph, s, u: int, v: int, *, max_parts: int | None = None
) -> ExtDist:
    g._check_vertex(u)
    g._check_vertex(v)
    value = dist_definable_matrix(g, s, max_parts=max_parts)[u, v]
    return INF if value == UNREACHED else int(value)


def dist_family_matrix(
    g: Graph, fam: SetFamily, *, max_parts: int | None = None
) -> np.ndarray:
    """Pointwise max over the family members' metrics.

    The empty family is the metric of the trivial partition, matching the
    defining-set metric with an empty set; this keeps family operations
    total for the orchestration code.
    """
    if len(fam) == 0:
        return dist_partition_matrix(g, Partition.trivial(g.n), max_parts=max_parts)
    out = None
    for s in fam:
        d = dist_definable_matrix(g, s, max_parts=max_parts)
        if out is None:
            out = d
        else:
            out = np.where(
                (out == UNREACHED) | (d == UNREACHED),
                UNREACHED,
                np.maximum(out, d),
            )
    return out


def dist_family(
    g: Graph, fam: SetFamily, u: int, v: int, *, max_parts: int | None = None
) -> ExtDist:
    g._check_vertex(u)
    g._check_vertex(v)
    value = dist_family_matrix(g, fam, max_parts=max_parts)[u, v]
    return INF if value == UNREACHED else int(value)


def _ball_rows(dist: np.ndarray, vertices, r: int) -> frozenset[int]:
    mask = np.zeros(dist.shape[0], dtype=bool)
    for v in vertices:
        row = dist[v]
        mask |= (row != UNREACHED) & (row <= r)
    return frozenset(np.flatnonzero(mask).tolist())


def ball_family(
    g: Graph, fam: SetFamily, vertices, r: int, *, max_parts: int | None = None
) -> frozenset[int]:
    """Family-metric ball around a vertex, or the union over a vertex set.

    For a single vertex this is the intersection of the members' balls; a
    collection of vertices gives the union of their balls.
    """
    if r < 0:
        raise DomainError(f"radius must be nonnegative, got {r}")
    if isinstance(vertices, (int, np.integer)):
        vertices = [int(vertices)]
    vertices = sorted(set(int(v) for v in vertices))
    for v in vertices:
        g._check_vertex(v)
    dist = dist_family_matrix(g, fam, max_parts=max_parts)
    return _ball_rows(dist, vertices, r)


def ball_partition(
    g: Graph, p: Partition, vertices, r: int, *, max_parts: int | None = None
) -> frozenset[int]:
    """Partition-metric ball around a vertex or the union over a vertex set."""
    if r < 0:
        raise DomainError(f"radius must be nonnegative, got {r}")
    if isinstance(vertices, (int, np.integer)):
        vertices = [int(vertices)]
    vertices = sorted(set(int(v) for v in vertices))
    for v in vertices:
        g._check_vertex(v)
    dist = dist_partition_matrix(g, p, max_parts=max_parts)
    return _ball_rows(dist, vertices, r)
