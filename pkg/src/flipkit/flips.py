"""Vertex partitions, flip specifications, and flip application.

A flip of a graph is determined by a partition of the vertex set together
with a set of part pairs: for every chosen pair {i, j} (i = j allowed) the
adjacency between part i and part j is complemented, never touching the
diagonal.  Specs over a canonically ordered partition are plain sets of
index pairs, so they compare, dedupe, and compose by symmetric difference.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import CapExceeded, DomainError
from .graphs import Graph

#: Default cap on partition sizes fed to exhaustive flip enumeration.
DEFAULT_MAX_PARTS = 4

_ENV_MAX_PARTS = "FLIPKIT_MAX_PARTS"


def default_max_parts() -> int:
    """The enumeration cap: FLIPKIT_MAX_PARTS if set, else 4."""
    raw = os.environ.get(_ENV_MAX_PARTS)
    if raw is None:
        return DEFAULT_MAX_PARTS
    try:
        value = int(raw)
    except ValueError as exc:
        raise DomainError(f"{_ENV_MAX_PARTS} must be an integer, got {raw!r}") from exc
    if value < 1:
        raise DomainError(f"{_ENV_MAX_PARTS} must be positive, got {value}")
    return value


class Partition:
    """An ordered partition of ``0..n-1`` into nonempty disjoint parts.

    Parts are canonically ordered by their minimum vertex, and each part is
    sorted ascending, so equal partitions compare equal and flip specs over
    part indices are reproducible.
    """

    __slots__ = ("n", "parts", "_part_of")

    def __init__(self, n: int, parts) -> None:
        cleaned = [tuple(sorted(set(p))) for p in parts]
        if any(len(p) == 0 for p in cleaned):
            raise DomainError("partition contains an empty part")
        cleaned.sort(key=lambda p: p[0])
        seen: set[int] = set()
        for p in cleaned:
            for v in p:
                if not 0 <= v < n:
                    raise DomainError(f"vertex {v} out of range for n={n}")
                if v in seen:
                    raise DomainError(f"vertex {v} appears in two parts")
                seen.add(v)
        if len(seen) != n:
            missing = sorted(set(range(n)) - seen)
            raise DomainError(f"partition does not cover vertices {missing}")
        self.n = n
        self.parts = tuple(cleaned)
        part_of = np.empty(n, dtype=np.int64)
        for i, p in enumerate(self.parts):
            part_of[list(p)] = i
        part_of.setflags(write=False)
        self._part_of = part_of

    @classmethod
    def trivial(cls, n: int) -> "Partition":
        if n == 0:
            raise DomainError("cannot partition an empty vertex set")
        return cls(n, [range(n)])

    @classmethod
    def singletons(cls, n: int) -> "Partition":
        return cls(n, [[v] for v in range(n)])

    @classmethod
    def from_labels(cls, labels) -> "Partition":
        """Build from a per-vertex label sequence (labels may be anything)."""
        labels = list(labels)
        groups: dict[object, list[int]] = {}
        for v, lab in enumerate(labels):
            groups.setdefault(lab, []).append(v)
        return cls(len(labels), groups.values())

    def __len__(self) -> int:
        return len(self.parts)

    def part_of(self, v: int) -> int:
        return int(self._part_of[v])

    def part_labels(self) -> np.ndarray:
        return self._part_of

    def __eq__(self, other) -> bool:
        if not isinstance(other, Partition):
            return NotImplemented
        return self.n == other.n and self.parts == other.parts

    def __hash__(self):
        return hash((self.n, self.parts))

    def __repr__(self) -> str:
        return f"Partition(n={self.n}, parts={self.parts})"

    def refines(self, other: "Partition") -> bool:
        """Every part of self is contained in some part of ``other``."""
        if self.n != other.n:
            return False
        return all(
            len({other.part_of(v) for v in p}) == 1 for p in self.parts
        )


@dataclass(frozen=True)
class FlipSpec:
    """A set of unordered part-index pairs to complement; loops allowed."""

    pairs: frozenset[tuple[int, int]]

    def __init__(self, pairs=()) -> None:
        normalized = set()
        for i, j in pairs:
            if i < 0 or j < 0:
                raise DomainError(f"part indices must be nonnegative, got ({i},{j})")
            normalized.add((min(i, j), max(i, j)))
        object.__setattr__(self, "pairs", frozenset(normalized))

    @classmethod
    def from_bits(cls, num_parts: int, bits: int) -> "FlipSpec":
        """Decode a binary counter value over the canonical pair order."""
        order = canonical_pairs(num_parts)
        return cls(p for t, p in enumerate(order) if (bits >> t) & 1)

    def to_bits(self, num_parts: int) -> int:
        index = {p: t for t, p in enumerate(canonical_pairs(num_parts))}
        bits = 0
        for p in self.pairs:
            bits |= 1 << index[p]
        return bits

    def compose(self, other: "FlipSpec") -> "FlipSpec":
        """Composition of two flips over the same partition."""
        return FlipSpec(self.pairs ^ other.pairs)

    def __iter__(self):
        return iter(sorted(self.pairs))

    def __len__(self) -> int:
        return len(self.pairs)

    def __repr__(self) -> str:
        return f"FlipSpec({sorted(self.pairs)})"


def canonical_pairs(num_parts: int) -> list[tuple[int, int]]:
    """All part-index pairs (i, j) with i <= j, in lexicographic order."""
    return [(i, j) for i in range(num_parts) for j in range(i, num_parts)]


def num_flips(num_parts: int) -> int:
    """Exact number of distinct flips of a partition: 2^(p(p+1)/2)."""
    return 1 << (num_parts * (num_parts + 1) // 2)


def _check_spec(p: Partition, spec: FlipSpec) -> None:
    for i, j in spec.pairs:
        if j >= len(p.parts):
            raise DomainError(
                f"spec pair ({i},{j}) out of range for a {len(p.parts)}-part partition"
            )


def pair_toggle_masks(p: Partition) -> np.ndarray:
    """(npairs, n, n) boolean masks: entries complemented by each pair.

    Diagonal entries are never included, matching the a != b proviso of the
    flip definition.
    """
    n = p.n
    order = canonical_pairs(len(p.parts))
    masks = np.zeros((len(order), n, n), dtype=bool)
    indicators = np.zeros((len(p.parts), n), dtype=bool)
    for i, part in enumerate(p.parts):
        indicators[i, list(part)] = True
    for t, (i, j) in enumerate(order):
        block = np.logical_or(
            np.logical_and.outer(indicators[i], indicators[j]),
            np.logical_and.outer(indicators[j], indicators[i]),
        )
        np.fill_diagonal(block, False)
        masks[t] = block
    return masks


def apply_flip(g: Graph, p: Partition, spec: FlipSpec) -> Graph:
    """The flip of ``g`` given by complementing every pair of parts in ``spec``."""
    if p.n != g.n:
        raise DomainError(f"partition is over n={p.n}, graph has n={g.n}")
    _check_spec(p, spec)
    adj = g.adj.copy()
    for i, j in spec.pairs:
        pi = list(p.parts[i])
        pj = list(p.parts[j])
        adj[np.ix_(pi, pj)] ^= True
        if i != j:
            adj[np.ix_(pj, pi)] ^= True
    np.fill_diagonal(adj, False)
    return Graph(adj)


def enumerate_flips(
    g: Graph, p: Partition, *, max_parts: int | None = None
) -> Iterator[tuple[FlipSpec, Graph]]:
    """Yield every flip of ``p`` exactly once, specs in binary-counter order.

    Spec k includes canonical pair t iff bit t of k is set, so the identity
    flip comes first and the enumeration is reproducible.  Consecutive specs
    differ in the trailing bits of the counter, which is exploited to build
    each graph by toggling only the changed pairs.
    """
    if p.n != g.n:
        raise DomainError(f"partition is over n={p.n}, graph has n={g.n}")
    cap = default_max_parts() if max_parts is None else max_parts
    k = len(p.parts)
    if k > cap:
        raise CapExceeded(
            f"partition has {k} parts, above the enumeration cap {cap} "
            f"(raise with --max-parts / {_ENV_MAX_PARTS})"
        )
    order = canonical_pairs(k)
    masks = pair_toggle_masks(p)
    work = g.adj.copy()
    total = num_flips(k)
    for bits in range(total):
        if bits:
            delta = (bits - 1) ^ bits
            for t in range(len(order)):
                if (delta >> t) & 1:
                    work ^= masks[t]
        yield FlipSpec.from_bits(k, bits), Graph(work)


def flip_adjacency_batch(
    g: Graph, p: Partition, spec_indices: np.ndarray
) -> np.ndarray:
    """Adjacency matrices of the flips with the given counter values, batched.

    Returns a boolean (len(spec_indices), n, n) array.  Used by the metric
    kernels, which fold per-flip distance matrices without materializing
    Graph objects.
    """
    k = len(p.parts)
    npairs = len(canonical_pairs(k))
    masks = pair_toggle_masks(p).reshape(npairs, -1).astype(np.uint8)
    spec_indices = np.asarray(spec_indices, dtype=np.uint64)
    bits = ((spec_indices[:, None] >> np.arange(npairs, dtype=np.uint64)) & 1).astype(
        np.uint8
    )
    delta = (bits @ masks) & 1
    adjs = g.adj.reshape(1, -1).astype(np.uint8) ^ delta
    return adjs.reshape(-1, g.n, g.n).astype(bool)


def definable_partition(g: Graph, s) -> Partition:
    """Singletons for ``s`` plus classes of equal neighborhood inside ``s``.

    The result has at most |s| + 2^|s| parts; empty neighborhood classes
    simply never materialize.
    """
    s_sorted = sorted(set(s))
    for v in s_sorted:
        g._check_vertex(v)
    parts: list[list[int]] = [[v] for v in s_sorted]
    classes: dict[bytes, list[int]] = {}
    s_idx = np.array(s_sorted, dtype=np.int64)
    in_s = set(s_sorted)
    for v in range(g.n):
        if v in in_s:
            continue
        key = g.adj[v, s_idx].tobytes() if len(s_sorted) else b""
        classes.setdefault(key, []).append(v)
    parts.extend(classes.values())
    if not parts:
        raise DomainError("definable partition of an empty graph is undefined")
    return Partition(g.n, parts)


def refine(p: Partition, q: Partition) -> Partition:
    """Coarsest common refinement: nonempty pairwise intersections."""
    if p.n != q.n:
        raise DomainError(f"partitions over different universes: {p.n} vs {q.n}")
    cells: dict[tuple[int, int], list[int]] = {}
    for v in range(p.n):
        cells.setdefault((p.part_of(v), q.part_of(v)), []).append(v)
    return Partition(p.n, cells.values())


def enumerate_partitions(n: int, max_parts: int) -> Iterator[Partition]:
    """All partitions of ``0..n-1`` into at most ``max_parts`` parts.

    Enumerated via restricted growth strings in counter order, so the
    trivial one-part partition comes first and the order is reproducible.
    """
    if n < 1:
        raise DomainError("cannot partition an empty vertex set")
    if max_parts < 1:
        raise DomainError(f"max_parts must be positive, got {max_parts}")
    labels = [0] * n
    while True:
        yield Partition.from_labels(labels)
        i = n - 1
        while i > 0:
            if labels[i] < min(max(labels[:i]) + 1, max_parts - 1):
                labels[i] += 1
                for j in range(i + 1, n):
                    labels[j] = 0
                break
            i -= 1
        else:
            return


def reconstruct_flip_spec(g: Graph, flipped: Graph, p: Partition) -> FlipSpec:
    """Recover the spec turning ``g`` into ``flipped`` over partition ``p``.

    Raises DomainError if the difference is not uniform on some pair of
    parts, i.e. ``flipped`` is not a flip of ``g`` over ``p``.
    """
    if g.n != flipped.n or p.n != g.n:
        raise DomainError("graphs and partition must share one vertex set")
    diff = g.adj ^ flipped.adj
    pairs = []
    for i in range(len(p.parts)):
        for j in range(i, len(p.parts)):
            pi, pj = list(p.parts[i]), list(p.parts[j])
            block = diff[np.ix_(pi, pj)].copy()
            if i == j:
                if len(pi) == 1:
                    continue
                mask = ~np.eye(len(pi), dtype=bool)
                values = block[mask]
            else:
                values = block.reshape(-1)
            if values.all():
                pairs.append((i, j))
            elif values.any():
                raise DomainError(
                    f"difference is not uniform on parts ({i},{j}); "
                    "not a flip over this partition"
                )
    return FlipSpec(pairs)
