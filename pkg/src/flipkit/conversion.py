"""Turning a partition metric into the metric of one concrete flip.

The conversion flips, per part, the inside of the part so that the
complement of the result has diameter at most 3, and per pair of parts a
block structure chosen so that every surviving edge joins vertices that are
close in both the original bipartite piece and its complement.  The output
is a refinement of the input partition together with a flip over it whose
edges all certify a partition-metric distance of at most 6, so balls in the
flipped graph sit inside 6x-radius balls of the partition metric.

Also here: the exhaustive witness search for emulating an arbitrary flip by
a neighborhood-definable one with a 5x radius blowup, exposed as a budgeted
search plus an independent containment checker.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations

import numpy as np

from .errors import DomainError
from .flips import (
    FlipSpec,
    Partition,
    default_max_parts,
    definable_partition,
    enumerate_flips,
    reconstruct_flip_spec,
)
from .graphs import (
    UNREACHED,
    Bipartite,
    Graph,
    bipartite_complement,
    bipartite_induced,
    complement,
    diameter,
    distance_matrix,
    induced,
    is_connected,
)

_PART_DIAMETER_BOUND = 3
_PAIR_DIAMETER_BOUND = 6
_EMULATION_BLOWUP = 5


class BipartiteCaseTag(Enum):
    """Structure of a bipartite graph that is disconnected along with its
    bipartite complement - or the trivial tag when it is not."""

    CONNECTED_OR_COMPLEMENT = "connected_or_complement"
    TWO_BICLIQUES = "two_bicliques"
    ISOLATED_AND_DOMINATING = "isolated_and_dominating"


@dataclass(frozen=True)
class BipartiteCase:
    """Verified classification record.

    For TWO_BICLIQUES, ``blocks`` holds ((U1, V1), (U2, V2)).  For
    ISOLATED_AND_DOMINATING, ``side`` names where the isolated vertex
    ``v_minus`` and the dominating vertex ``v_plus`` live, and ``chosen_u``
    is the lowest-index pivot on the opposite side used to split that side
    by its neighborhood (None when the opposite side is empty).
    """

    tag: BipartiteCaseTag
    blocks: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...] = ()
    side: str | None = None
    v_minus: int | None = None
    v_plus: int | None = None
    chosen_u: int | None = None


def _components(g: Graph) -> list[tuple[int, ...]]:
    dist = distance_matrix(g)
    seen: set[int] = set()
    comps = []
    for v in range(g.n):
        if v in seen:
            continue
        comp = tuple(np.flatnonzero(dist[v] != UNREACHED).tolist())
        seen.update(comp)
        comps.append(comp)
    return comps


def _is_biclique_component(b: Bipartite, comp: tuple[int, ...]) -> bool:
    left = [v for v in comp if v in set(b.left)]
    right = [v for v in comp if v in set(b.right)]
    if not left or not right:
        return False
    return bool(b.graph.adj[np.ix_(left, right)].all())


def classify_bipartite(b: Bipartite, *, require_degenerate: bool = False) -> BipartiteCase:
    """Classify a bipartite graph both of whose complements are disconnected.

    When ``b`` or its bipartite complement is connected, the trivial tag is
    returned, unless ``require_degenerate`` asks for a hard error instead.
    """
    if is_connected(b.graph) or is_connected(bipartite_complement(b).graph):
        if require_degenerate:
            raise DomainError(
                "graph or its bipartite complement is connected; "
                "no degenerate classification exists"
            )
        return BipartiteCase(tag=BipartiteCaseTag.CONNECTED_OR_COMPLEMENT)

    # Isolated vertex first, scanning the right side then the left, lowest
    # index first.  The dominating partner lives on the same side.
    for side_name, side, other in (("right", b.right, b.left), ("left", b.left, b.right)):
        isolated = [v for v in side if b.graph.degree(v) == 0]
        if not isolated:
            continue
        dominating = [
            v for v in side if all(b.graph.adj[v, u] for u in other)
        ]
        if not dominating:
            raise DomainError(
                "no dominating partner for an isolated vertex; "
                "input violates the disconnected-complement precondition"
            )
        chosen = min(other) if other else None
        return BipartiteCase(
            tag=BipartiteCaseTag.ISOLATED_AND_DOMINATING,
            side=side_name,
            v_minus=min(isolated),
            v_plus=min(dominating),
            chosen_u=chosen,
        )

    comps = _components(b.graph)
    if len(comps) != 2 or not all(_is_biclique_component(b, c) for c in comps):
        raise DomainError(
            "expected exactly two biclique components; "
            "input violates the disconnected-complement precondition"
        )
    comps.sort(key=min)
    left_set = set(b.left)
    blocks = tuple(
        (
            tuple(v for v in comp if v in left_set),
            tuple(v for v in comp if v not in left_set),
        )
        for comp in comps
    )
    return BipartiteCase(tag=BipartiteCaseTag.TWO_BICLIQUES, blocks=blocks)


@dataclass(frozen=True)
class BipartiteFlipResult:
    """Splits of the two sides, the flipped graph, and what was decided."""

    u_split: tuple[tuple[int, ...], tuple[int, ...]]
    v_split: tuple[tuple[int, ...], tuple[int, ...]]
    flipped: Bipartite
    case: BipartiteCase
    #: (i, j) block indices, 1-based over (u_split[i-1], v_split[j-1]),
    #: whose adjacency was complemented.
    flipped_blocks: frozenset[tuple[int, int]]


def bipartite_flip(b: Bipartite) -> BipartiteFlipResult:
    """Split both sides into at most two groups and flip blocks so that every
    surviving edge joins vertices within distance 6 in both ``b`` and its
    bipartite complement.

    The split is trivial unless both ``b`` and its complement are
    disconnected; then either the two biclique components or the
    neighborhood of the lowest-index pivot determine it.  A block is flipped
    exactly when its diameter is at most 6, which leaves every nonempty
    block of the result with a complement of diameter at most 6.
    """
    case = classify_bipartite(b)
    u, v = b.left, b.right
    if case.tag is BipartiteCaseTag.CONNECTED_OR_COMPLEMENT:
        u_split, v_split = (u, ()), (v, ())
    elif case.tag is BipartiteCaseTag.TWO_BICLIQUES:
        (u1, v1), (u2, v2) = case.blocks
        u_split, v_split = (u1, u2), (v1, v2)
    else:
        if case.side == "right":
            if case.chosen_u is None:
                u_split, v_split = (u, ()), (v, ())
            else:
                n1 = tuple(sorted(b.graph.neighbors(case.chosen_u)))
                v_split = (n1, tuple(x for x in v if x not in set(n1)))
                u_split = (u, ())
        else:
            if case.chosen_u is None:
                u_split, v_split = (u, ()), (v, ())
            else:
                n1 = tuple(sorted(b.graph.neighbors(case.chosen_u)))
                u_split = (n1, tuple(x for x in u if x not in set(n1)))
                v_split = (v, ())

    adj = b.graph.adj.copy()
    flipped_blocks = set()
    for i, ui in enumerate(u_split, start=1):
        for j, vj in enumerate(v_split, start=1):
            if not ui or not vj:
                continue
            block, _ = bipartite_induced(b.graph, ui, vj)
            if diameter(block.graph) <= _PAIR_DIAMETER_BOUND:
                adj[np.ix_(list(ui), list(vj))] ^= True
                adj[np.ix_(list(vj), list(ui))] ^= True
                flipped_blocks.add((i, j))
            else:
                compl_diam = diameter(bipartite_complement(block).graph)
                assert compl_diam <= _PAIR_DIAMETER_BOUND, (
                    "bipartite block has large diameter on both sides; "
                    "the case split above is broken"
                )
    flipped = Bipartite(Graph(adj), b.left, b.right)
    return BipartiteFlipResult(
        u_split=u_split,
        v_split=v_split,
        flipped=flipped,
        case=case,
        flipped_blocks=frozenset(flipped_blocks),
    )


@dataclass(frozen=True)
class PartCertificate:
    part: int
    flipped: bool
    #: which branch held: the complement inside the part already had small
    #: diameter ("compl_diam_le3"), or the part itself did and was flipped
    #: ("self_diam_le3").
    branch: str


@dataclass(frozen=True)
class PairCertificate:
    parts: tuple[int, int]
    case: BipartiteCase
    left_split: tuple[tuple[int, ...], tuple[int, ...]]
    right_split: tuple[tuple[int, ...], tuple[int, ...]]
    flipped_blocks: frozenset[tuple[int, int]]


@dataclass(frozen=True)
class ConversionResult:
    refined: Partition
    flipped: Graph
    #: spec over ``refined`` reproducing ``flipped`` from the input graph.
    refined_spec: FlipSpec
    part_certificates: tuple[PartCertificate, ...]
    pair_certificates: tuple[PairCertificate, ...]


def convert(g: Graph, p: Partition) -> ConversionResult:
    """Build a refinement of ``p`` and a flip over it whose every edge joins
    vertices at partition-metric distance at most 6 (at most 3 inside a
    part), hence balls of the flip sit inside 6x balls of the metric.

    The refinement collects, for each part, the common refinement of the
    two-cell splits produced for that part against every other part, so its
    size is at most |p| * 2^|p|.
    """
    if p.n != g.n:
        raise DomainError(f"partition is over n={p.n}, graph has n={g.n}")
    adj = g.adj.copy()
    part_certs = []
    for x, part in enumerate(p.parts):
        sub, _ = induced(g, part)
        if diameter(complement(sub)) <= _PART_DIAMETER_BOUND:
            part_certs.append(PartCertificate(part=x, flipped=False, branch="compl_diam_le3"))
        else:
            assert diameter(sub) <= _PART_DIAMETER_BOUND, (
                "part and its complement both have diameter above 3; "
                "the diameter dichotomy is broken"
            )
            idx = list(part)
            adj[np.ix_(idx, idx)] ^= True
            np.fill_diagonal(adj, False)
            part_certs.append(PartCertificate(part=x, flipped=True, branch="self_diam_le3"))

    # splits[x][y]: two-cell partition of part x induced by processing the
    # pair {x, y}; trivial cell pairs keep the second cell empty.
    k = len(p.parts)
    splits: list[dict[int, tuple[tuple[int, ...], tuple[int, ...]]]] = [
        {} for _ in range(k)
    ]
    pair_certs = []
    for x, y in combinations(range(k), 2):
        px, py = p.parts[x], p.parts[y]
        block, mapping = bipartite_induced(g, px, py)
        result = bipartite_flip(block)
        to_orig = lambda cell: tuple(sorted(mapping[i] for i in cell))
        left_split = (to_orig(result.u_split[0]), to_orig(result.u_split[1]))
        right_split = (to_orig(result.v_split[0]), to_orig(result.v_split[1]))
        splits[x][y] = left_split
        splits[y][x] = right_split
        for i, j in result.flipped_blocks:
            ui = left_split[i - 1]
            vj = right_split[j - 1]
            adj[np.ix_(list(ui), list(vj))] ^= True
            adj[np.ix_(list(vj), list(ui))] ^= True
        pair_certs.append(
            PairCertificate(
                parts=(x, y),
                case=result.case,
                left_split=left_split,
                right_split=right_split,
                flipped_blocks=result.flipped_blocks,
            )
        )

    second_cell: list[dict[int, set[int]]] = [
        {y: set(cells[1]) for y, cells in by_pair.items()} for by_pair in splits
    ]
    cells: dict[tuple, list[int]] = {}
    for v in range(g.n):
        x = p.part_of(v)
        signature = tuple(
            1 if v in second_cell[x][y] else 0 for y in range(k) if y != x
        )
        cells.setdefault((x,) + signature, []).append(v)
    refined = Partition(g.n, cells.values())
    flipped = Graph(adj)
    refined_spec = reconstruct_flip_spec(g, flipped, refined)
    return ConversionResult(
        refined=refined,
        flipped=flipped,
        refined_spec=refined_spec,
        part_certificates=tuple(part_certs),
        pair_certificates=tuple(pair_certs),
    )


# ---------------------------------------------------------------------------
# Witness search: emulating a flip by a definable flip
# ---------------------------------------------------------------------------


def ball_containment_ok(
    inner: Graph, outer: Graph, r_max: int, factor: int = _EMULATION_BLOWUP
) -> bool:
    """Whether every r-ball of ``inner`` (r <= r_max) sits inside the
    (factor*r)-ball of ``outer`` around the same vertex."""
    if inner.n != outer.n:
        raise DomainError("graphs must share one vertex set")
    d_in = distance_matrix(inner)
    d_out = distance_matrix(outer)
    relevant = (d_in != UNREACHED) & (d_in <= r_max)
    if (d_out[relevant] == UNREACHED).any():
        return False
    return bool((d_out[relevant] <= factor * d_in[relevant]).all())


@dataclass(frozen=True)
class EmulationWitness:
    defining_set: tuple[int, ...]
    spec: FlipSpec
    flipped: Graph


@dataclass
class EmulationSearchResult:
    witness: EmulationWitness | None
    sets_tried: int = 0
    sets_skipped: int = 0
    flips_tried: int = 0

    def __bool__(self) -> bool:
        return self.witness is not None


@dataclass(frozen=True)
class DefinableConversion:
    """Composition of the conversion with a definable-flip emulation.

    The conversion bounds partition-metric balls by 6x balls of its flip;
    a successful emulation bounds the definable flip's balls by 5x balls of
    that flip, giving the combined 30x guarantee.  Only witness validity is
    asserted; when the budgeted emulation search comes up empty,
    ``emulation.witness`` is None and the conversion result stands alone.
    """

    conversion: ConversionResult
    emulation: "EmulationSearchResult"


def convert_to_definable(
    g: Graph,
    p: Partition,
    r_max: int,
    s_max: int,
    *,
    max_parts: int | None = None,
) -> DefinableConversion:
    """Run the conversion, then search for a definable flip emulating it."""
    conversion = convert(g, p)
    emulation = search_definable_emulation(
        g, conversion.flipped, r_max, s_max, max_parts=max_parts
    )
    return DefinableConversion(conversion=conversion, emulation=emulation)


def search_definable_emulation(
    g: Graph,
    gprime: Graph,
    r_max: int,
    s_max: int,
    *,
    max_parts: int | None = None,
) -> EmulationSearchResult:
    """Exhaustive budgeted search for a definable flip whose balls embed
    into 5x-radius balls of ``gprime``.

    Candidate defining sets are tried by ascending size, lexicographically
    within a size; for each, flips are tried in enumeration order and the
    first witness wins.  Sets whose neighborhood-class partition exceeds the
    part cap are skipped and counted, so absence of a witness is a report,
    never an error.
    """
    if g.n != gprime.n:
        raise DomainError("graphs must share one vertex set")
    if r_max < 0:
        raise DomainError(f"r_max must be nonnegative, got {r_max}")
    cap = default_max_parts() if max_parts is None else max_parts
    result = EmulationSearchResult(witness=None)
    d_out = distance_matrix(gprime)
    for size in range(min(s_max, g.n) + 1):
        for s in combinations(range(g.n), size):
            p = definable_partition(g, s)
            if len(p.parts) > cap:
                result.sets_skipped += 1
                continue
            result.sets_tried += 1
            for spec, candidate in enumerate_flips(g, p, max_parts=cap):
                result.flips_tried += 1
                d_in = distance_matrix(candidate)
                relevant = (d_in != UNREACHED) & (d_in <= r_max)
                out_vals = d_out[relevant]
                if (out_vals == UNREACHED).any():
                    continue
                if (out_vals <= _EMULATION_BLOWUP * d_in[relevant]).all():
                    result.witness = EmulationWitness(
                        defining_set=s, spec=spec, flipped=candidate
                    )
                    return result
    return result
