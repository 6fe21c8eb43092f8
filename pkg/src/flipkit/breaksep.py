"""Budgeted breakability and separability searches over flips.

Breakability asks for two large subsets of a probe set whose radius-r balls
become disjoint after some bounded flip; separability asks for one flip
after which every r-ball around a light vertex carries at most an
epsilon-fraction of the total weight.  Both are exhaustive searches under
explicit budgets: running out of budget is a reported outcome, not an
error, and every returned witness is re-verified before it leaves.

The module also carries the constructive bridge from separability to
breakability (probe sets of size 4m^2 always split), greedy sunflower
extraction, and the orchestrator that thins a uniform set family until the
kept sets have light family-metric balls.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import combinations
from typing import Iterator

import numpy as np

from .errors import CapExceeded, DomainError
from .flips import (
    DEFAULT_MAX_PARTS,
    FlipSpec,
    Partition,
    apply_flip,
    default_max_parts,
    definable_partition,
    enumerate_flips,
    enumerate_partitions,
)
from .graphs import UNREACHED, Graph, ball, distance_matrix
from .metrics import SetFamily, dist_family_matrix

_FLOAT_TOL = 1e-9

DEFAULT_PARTITION_ENUM_CAP = 10


# ---------------------------------------------------------------------------
# Weights
# ---------------------------------------------------------------------------


class WeightFn:
    """Nonnegative per-vertex weights with a cached total.

    Epsilon comparisons are exact rational arithmetic when all weights are
    integers; otherwise floats are compared with absolute tolerance 1e-9.
    """

    __slots__ = ("weights", "total", "integral")

    def __init__(self, weights) -> None:
        ws = tuple(weights)
        for v, w in enumerate(ws):
            if w < 0:
                raise DomainError(f"weight of vertex {v} is negative: {w}")
        self.weights = ws
        self.integral = all(isinstance(w, int) for w in ws)
        self.total = sum(ws)

    @classmethod
    def uniform(cls, n: int) -> "WeightFn":
        return cls([1] * n)

    @classmethod
    def indicator(cls, n: int, support) -> "WeightFn":
        inside = set(support)
        return cls([1 if v in inside else 0 for v in range(n)])

    def __len__(self) -> int:
        return len(self.weights)

    def of(self, vertices) -> int | float:
        return sum(self.weights[v] for v in vertices)

    def within_eps(self, value, eps) -> bool:
        """Whether ``value <= eps * total`` under the comparison rules."""
        if self.integral:
            return Fraction(value) <= Fraction(eps) * Fraction(self.total)
        return value <= eps * self.total + _FLOAT_TOL

    def small_vertices(self, eps) -> list[int]:
        """Vertices whose own weight is at most eps * total."""
        return [v for v, w in enumerate(self.weights) if self.within_eps(w, eps)]

    def is_eps_balanced(self, eps) -> bool:
        return len(self.small_vertices(eps)) == len(self.weights)


# ---------------------------------------------------------------------------
# Sunflowers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SunflowerResult:
    subfamily: SetFamily
    core: tuple[int, ...]


def sunflower_guarantee(t: int, m: int) -> int:
    """Family size from which greedy extraction is guaranteed to succeed."""
    return math.factorial(t) * (m - 1) ** t + 1 if m >= 1 else 0


def _greedy_sunflower(sets: list[tuple[int, ...]], m: int):
    if m == 0:
        return [], frozenset()
    if not sets:
        return None
    disjoint: list[tuple[int, ...]] = []
    used: set[int] = set()
    for s in sets:
        if not used.intersection(s):
            disjoint.append(s)
            used.update(s)
    if len(disjoint) >= m:
        return disjoint[:m], frozenset()
    if len(sets[0]) == 0:
        return None
    freq = Counter(v for s in sets for v in s)
    x = min(freq, key=lambda v: (-freq[v], v))
    reduced = sorted(tuple(u for u in s if u != x) for s in sets if x in s)
    outcome = _greedy_sunflower(reduced, m)
    if outcome is None:
        return None
    subfamily, core = outcome
    return [tuple(sorted(s + (x,))) for s in subfamily], core | {x}


def sunflower_extract(f: SetFamily, m: int) -> SunflowerResult | None:
    """Greedy extraction of an m-set sunflower from a t-uniform family.

    Guaranteed to succeed once the family reaches t!*(m-1)^t + 1 distinct
    sets; below that, failure means the greedy recursion found nothing, not
    that no sunflower exists.
    """
    sizes = {len(s) for s in f.sets}
    if len(sizes) > 1:
        raise DomainError(f"family is not uniform: set sizes {sorted(sizes)}")
    if f.uniform_size is not None and sizes and sizes != {f.uniform_size}:
        raise DomainError("family sizes disagree with the declared uniformity")
    if m < 0:
        raise DomainError(f"target size must be nonnegative, got {m}")
    outcome = _greedy_sunflower(list(f.sets), m)
    if outcome is None:
        return None
    subfamily, core = outcome
    core_t = tuple(sorted(core))
    for a, b in combinations(subfamily, 2):
        if set(a) & set(b) != core:
            raise RuntimeError(f"greedy sunflower is inconsistent: {a} & {b} != {core_t}")
    t = f.uniform_size if f.uniform_size is not None else (sizes.pop() if sizes else 0)
    return SunflowerResult(
        subfamily=SetFamily(subfamily, uniform_size=t), core=core_t
    )


# ---------------------------------------------------------------------------
# Flip candidate streams and breakability
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SearchBudget:
    """Explicit budgets replacing the theory's unspecified margins."""

    s_max: int = 1
    part_cap: int = DEFAULT_MAX_PARTS
    raw_partitions: bool = False
    #: target subset size per breakability call inside the orchestrator
    m_keep: int = 1
    #: sunflower petals per group inside the orchestrator (defaults to m_keep)
    group_size: int | None = None


@dataclass(frozen=True)
class BreakWitness:
    """A flip plus two probe subsets whose r-balls it makes disjoint."""

    partition: Partition
    spec: FlipSpec
    defining_set: tuple[int, ...] | None
    a1: tuple[int, ...]
    a2: tuple[int, ...]
    radius: int
    m: int


def verify_break_witness(g: Graph, w: BreakWitness) -> bool:
    """Recompute the flip and check the witness contract from scratch."""
    if set(w.a1) & set(w.a2):
        return False
    if len(w.a1) < w.m or len(w.a2) < w.m:
        return False
    h = apply_flip(g, w.partition, w.spec)
    ball1: set[int] = set()
    for v in w.a1:
        ball1 |= ball(h, v, w.radius)
    for v in w.a2:
        if ball1 & ball(h, v, w.radius):
            return False
    return True


@dataclass
class BreakSearchResult:
    witness: BreakWitness | None
    flips_tried: int = 0
    sets_tried: int = 0
    sets_skipped: int = 0

    def __bool__(self) -> bool:
        return self.witness is not None


def _definable_flip_stream(
    g: Graph, budget: SearchBudget, stats
) -> Iterator[tuple[tuple[int, ...] | None, Partition, FlipSpec, Graph]]:
    for size in range(min(budget.s_max, g.n) + 1):
        for s in combinations(range(g.n), size):
            p = definable_partition(g, s)
            if len(p.parts) > budget.part_cap:
                stats.sets_skipped += 1
                continue
            stats.sets_tried += 1
            for spec, h in enumerate_flips(g, p, max_parts=budget.part_cap):
                yield s, p, spec, h


def _partition_flip_stream(
    g: Graph, budget: SearchBudget, stats
) -> Iterator[tuple[None, Partition, FlipSpec, Graph]]:
    for p in enumerate_partitions(g.n, budget.part_cap):
        stats.sets_tried += 1
        for spec, h in enumerate_flips(g, p, max_parts=budget.part_cap):
            yield None, p, spec, h


def _conflicts(dist: np.ndarray, probes: list[int], r: int) -> np.ndarray:
    """probes x probes boolean matrix: r-balls of the two probes intersect.

    Two balls of radius r meet exactly when the endpoints are within 2r.
    """
    sub = dist[np.ix_(probes, probes)]
    meets = (sub != UNREACHED) & (sub <= 2 * r)
    np.fill_diagonal(meets, False)
    return meets


def _conflict_components(meets: np.ndarray) -> list[list[int]]:
    """Components of the conflict relation as probe-index lists, ordered by
    minimum member."""
    k = meets.shape[0]
    seen = [False] * k
    comps: list[list[int]] = []
    for start in range(k):
        if seen[start]:
            continue
        stack, members = [start], [start]
        seen[start] = True
        while stack:
            a = stack.pop()
            for b in np.flatnonzero(meets[a]).tolist():
                if not seen[b]:
                    seen[b] = True
                    stack.append(b)
                    members.append(b)
        comps.append(sorted(members))
    return comps


def _greedy_split(
    dist: np.ndarray, probes: list[int], r: int, m: int, w1: set[int], w2: set[int]
) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """Deterministic two-stage greedy for two size-m probe subsets with no
    cross conflict (hence disjoint r-balls).

    Stage one assigns whole components of the conflict relation, ascending,
    to the currently smaller side.  When that fails (a single component can
    still admit a split, as on a path where balls are intervals), stage two
    anchors A1 on the lowest-index probes of the first side and collects
    the lowest-index probes of the second side that avoid all of A1.
    """
    if m == 0:
        return (), ()
    meets = _conflicts(dist, probes, r)

    a1: list[int] = []
    a2: list[int] = []
    for comp in _conflict_components(meets):
        side1 = [probes[i] for i in comp if probes[i] in w1]
        side2 = [probes[i] for i in comp if probes[i] in w2]
        if len(a1) <= len(a2):
            a1.extend(side1)
        else:
            a2.extend(side2)
    if len(a1) >= m and len(a2) >= m:
        return tuple(sorted(a1)), tuple(sorted(a2))

    index_of = {v: i for i, v in enumerate(probes)}
    anchor = [v for v in probes if v in w1][:m]
    if len(anchor) < m:
        return None
    anchor_rows = meets[[index_of[v] for v in anchor]].any(axis=0)
    other: list[int] = []
    taken = set(anchor)
    for i, v in enumerate(probes):
        if v in w2 and v not in taken and not anchor_rows[i]:
            other.append(v)
            if len(other) == m:
                return tuple(anchor), tuple(other)
    return None


def breakability_search(
    g: Graph,
    w_set,
    r: int,
    m: int,
    budget: SearchBudget = SearchBudget(),
    *,
    w2_set=None,
) -> BreakSearchResult:
    """First flip (defining sets ascending, specs in counter order) whose
    radius-r balls admit two size-m probe subsets with disjoint balls.

    With ``w2_set``, the two subsets are drawn from the two probe sets
    separately.  A miss on one flip just moves the search to the next
    candidate, and exhausting the budget returns an empty result with
    statistics.
    """
    w1 = sorted(set(w_set))
    w2 = sorted(set(w2_set)) if w2_set is not None else None
    for v in w1 + (w2 or []):
        g._check_vertex(v)
    if r < 0 or m < 0:
        raise DomainError("radius and target size must be nonnegative")
    stats = BreakSearchResult(witness=None)
    probes = sorted(set(w1) | set(w2 or []))
    side1 = set(w1)
    side2 = set(w2) if w2 is not None else set(w1)
    stream = (
        _partition_flip_stream(g, budget, stats)
        if budget.raw_partitions
        else _definable_flip_stream(g, budget, stats)
    )
    for s, p, spec, h in stream:
        stats.flips_tried += 1
        dist = distance_matrix(h)
        split = _greedy_split(dist, probes, r, m, side1, side2)
        if split is None:
            continue
        witness = BreakWitness(
            partition=p,
            spec=spec,
            defining_set=s,
            a1=split[0],
            a2=split[1],
            radius=r,
            m=m,
        )
        if not verify_break_witness(g, witness):
            raise RuntimeError("greedy split produced an invalid witness")
        stats.witness = witness
        return stats
    return stats


# ---------------------------------------------------------------------------
# Separability
# ---------------------------------------------------------------------------


@dataclass
class SeparabilityResult:
    partition: Partition | None
    spec: FlipSpec | None
    partitions_tried: int = 0
    flips_tried: int = 0

    def __bool__(self) -> bool:
        return self.partition is not None


def _ball_weights(dist: np.ndarray, r: int, weights: np.ndarray) -> np.ndarray:
    reach = (dist != UNREACHED) & (dist <= r)
    return reach @ weights


def separability_search(
    g: Graph,
    w: WeightFn,
    r: int,
    eps,
    k_max: int,
    *,
    n_cap: int = DEFAULT_PARTITION_ENUM_CAP,
    max_parts: int | None = None,
) -> SeparabilityResult:
    """First flip, over all partitions into at most ``k_max`` parts, after
    which every light vertex has an r-ball of weight at most eps * total.

    Partitions are enumerated as restricted growth strings, so the trivial
    partition (hence the identity flip) is probed first.
    """
    if len(w.weights) != g.n:
        raise DomainError(f"weights cover {len(w.weights)} vertices, graph has {g.n}")
    cap = default_max_parts() if max_parts is None else max_parts
    if k_max > cap:
        raise CapExceeded(
            f"k_max={k_max} exceeds the part cap {cap} "
            "(raise with --max-parts / FLIPKIT_MAX_PARTS)"
        )
    if g.n > n_cap:
        raise CapExceeded(
            f"exhaustive partition search on n={g.n} exceeds the cap {n_cap} "
            "(raise with --n-cap)"
        )
    if r < 0:
        raise DomainError(f"radius must be nonnegative, got {r}")
    small = w.small_vertices(eps)
    weights_arr = np.array([float(x) for x in w.weights])
    result = SeparabilityResult(partition=None, spec=None)
    for p in enumerate_partitions(g.n, k_max):
        result.partitions_tried += 1
        for spec, h in enumerate_flips(g, p, max_parts=cap):
            result.flips_tried += 1
            dist = distance_matrix(h)
            bw = _ball_weights(dist, r, weights_arr)
            # Cheap float screen; integral weights get half a unit of slack
            # so the exact comparison below stays the decider.
            if w.integral and (bw[small] > float(eps) * float(w.total) + 0.5).any():
                continue
            ok = all(
                w.within_eps(w.of(_ball_row(dist, v, r)), eps) for v in small
            )
            if ok:
                result.partition = p
                result.spec = spec
                return result
    return result


def _ball_row(dist: np.ndarray, v: int, r: int) -> list[int]:
    row = dist[v]
    return np.flatnonzero((row != UNREACHED) & (row <= r)).tolist()


# ---------------------------------------------------------------------------
# Separability => breakability
# ---------------------------------------------------------------------------


def greedy_scattered(g_flipped: Graph, w_set, d: int) -> tuple[int, ...]:
    """Maximal subset of the probes pairwise at distance > d, greedily in
    ascending vertex order."""
    chosen: list[int] = []
    covered: set[int] = set()
    for v in sorted(set(w_set)):
        g_flipped._check_vertex(v)
        if v not in covered:
            chosen.append(v)
            covered |= ball(g_flipped, v, d)
    return tuple(chosen)


def break_from_sep(
    g: Graph, w_set, r: int, h: tuple[Partition, FlipSpec]
) -> BreakWitness:
    """Turn a flip with light 4r-balls into a breakability witness.

    The probe set must have size exactly 4m^2 for the target m.  Either
    some vertex gathers at least 2m probes within 2r (its 2r-ball against
    the probes outside its 4r-ball split the set), or a greedy 2r-scattered
    subset has at least 2m members and its first and second m-blocks do.
    """
    probes = tuple(sorted(set(w_set)))
    for v in probes:
        g._check_vertex(v)
    m_sq, rem = divmod(len(probes), 4)
    m = math.isqrt(m_sq)
    if rem or m * m != m_sq or m < 1:
        raise DomainError(
            f"probe set size {len(probes)} is not of the form 4m^2 for integer m >= 1"
        )
    partition, spec = h
    flipped = apply_flip(g, partition, spec)
    dist = distance_matrix(flipped)
    probe_arr = np.array(probes)
    in_r4 = (dist[:, probe_arr] != UNREACHED) & (dist[:, probe_arr] <= 4 * r)
    counts4 = in_r4.sum(axis=1)
    if (counts4 > len(probes) // 2).any():
        bad = int(np.flatnonzero(counts4 > len(probes) // 2)[0])
        raise DomainError(
            f"vertex {bad} has {int(counts4[bad])} probes within distance {4 * r}, "
            f"above the required bound {len(probes) // 2}"
        )

    in_r2 = (dist[:, probe_arr] != UNREACHED) & (dist[:, probe_arr] <= 2 * r)
    counts2 = in_r2.sum(axis=1)
    heavy = np.flatnonzero(counts2 >= 2 * m)
    if heavy.size:
        v = int(heavy[0])
        a1 = tuple(probe_arr[in_r2[v]].tolist())
        a2 = tuple(probe_arr[~in_r4[v]].tolist())
    else:
        scattered = greedy_scattered(flipped, probes, 2 * r)
        assert len(scattered) >= 2 * m, (
            "scattered set too small although no vertex covers 2m probes; "
            "the two cases should cover everything"
        )
        a1 = scattered[:m]
        a2 = scattered[m : 2 * m]
    witness = BreakWitness(
        partition=partition,
        spec=spec,
        defining_set=None,
        a1=a1,
        a2=a2,
        radius=r,
        m=m,
    )
    if not verify_break_witness(g, witness):
        raise RuntimeError("constructed witness failed re-verification")
    return witness


@dataclass
class PipelineResult:
    witness: BreakWitness | None
    separability: SeparabilityResult

    def __bool__(self) -> bool:
        return self.witness is not None


def sep_then_break(
    g: Graph,
    w_set,
    r: int,
    *,
    k_max: int = 1,
    n_cap: int | None = None,
    max_parts: int | None = None,
) -> PipelineResult:
    """Full pipeline: separability at radius 4r with eps = 1/2 over the
    probe-indicator weights, then the witness construction on success."""
    probes = tuple(sorted(set(w_set)))
    weights = WeightFn.indicator(g.n, probes)
    sep = separability_search(
        g,
        weights,
        4 * r,
        Fraction(1, 2),
        k_max,
        n_cap=g.n if n_cap is None else n_cap,
        max_parts=max_parts,
    )
    if not sep:
        return PipelineResult(witness=None, separability=sep)
    witness = break_from_sep(g, probes, r, (sep.partition, sep.spec))
    return PipelineResult(witness=witness, separability=sep)


# ---------------------------------------------------------------------------
# Small-balls orchestration over a uniform family
# ---------------------------------------------------------------------------


@dataclass
class SmallBallsOutcome:
    kept: SetFamily | None
    defining: SetFamily | None
    selected_group: int | None
    failed_step: tuple | None
    breakability_calls: int = 0

    def __bool__(self) -> bool:
        return self.kept is not None


def _pad_to_size(s: tuple[int, ...], t: int, n: int) -> tuple[int, ...]:
    """Extend a set to size t with the lowest-index vertices not in it."""
    padded = list(s)
    present = set(s)
    v = 0
    while len(padded) < t:
        if v >= n:
            raise DomainError(f"cannot pad {s} to size {t} with only {n} vertices")
        if v not in present:
            padded.append(v)
            present.add(v)
        v += 1
    return tuple(sorted(padded))


def small_balls_orchestrate(
    g: Graph,
    w: WeightFn,
    f: SetFamily,
    r: int,
    eps,
    budget: SearchBudget = SearchBudget(),
) -> SmallBallsOutcome:
    """Thin a t-uniform family until its kept sets have light family-balls.

    A sunflower is extracted and its petals split into ceil(1/eps) groups;
    repeated budgeted breakability calls, one per group pair and coordinate
    pair, separate the groups in an accumulated family metric.  The group
    whose family-ball has minimum weight is kept (core added back), and the
    output inequality is re-verified by exact ball computation.  Any failing
    breakability call aborts with a trace of the failing step.
    """
    if len(w.weights) != g.n:
        raise DomainError(f"weights cover {len(w.weights)} vertices, graph has {g.n}")
    sizes = {len(s) for s in f.sets}
    if len(sizes) != 1:
        raise DomainError(f"family must be uniform, got sizes {sorted(sizes)}")
    t = sizes.pop()
    if t == 0:
        raise DomainError("0-uniform families carry no vertices to separate")
    if not (0 < float(eps)):
        raise DomainError(f"eps must be positive, got {eps}")
    p = math.ceil(1 / float(eps)) if float(eps) < 1 else 1
    group_size = budget.group_size if budget.group_size is not None else budget.m_keep
    outcome = SmallBallsOutcome(
        kept=None, defining=None, selected_group=None, failed_step=None
    )

    sun = sunflower_extract(f, p * group_size)
    if sun is None:
        outcome.failed_step = ("sunflower", p * group_size)
        return outcome
    core = sun.core
    core_set = set(core)
    petals = [tuple(v for v in s if v not in core_set) for s in sun.subfamily]
    t_prime = t - len(core)
    groups: list[list[tuple[int, ...]]] = [
        petals[q * group_size : (q + 1) * group_size] for q in range(p)
    ]

    inner_budget = replace(budget, raw_partitions=False)
    accumulated: list[tuple[int, ...]] = [core]
    for q in range(p):
        for q2 in range(q + 1, p):
            for i in range(t_prime):
                for j in range(t_prime):
                    w1 = sorted(petal[i] for petal in groups[q])
                    w2 = sorted(petal[j] for petal in groups[q2])
                    outcome.breakability_calls += 1
                    found = breakability_search(
                        g, w1, r, budget.m_keep, inner_budget, w2_set=w2
                    )
                    if not found:
                        outcome.failed_step = (q, q2, i, j)
                        return outcome
                    witness = found.witness
                    accumulated.append(witness.defining_set)
                    kept1 = set(witness.a1)
                    kept2 = set(witness.a2)
                    groups[q] = [petal for petal in groups[q] if petal[i] in kept1]
                    groups[q2] = [petal for petal in groups[q2] if petal[j] in kept2]

    padded = [_pad_to_size(s, t, g.n) if len(s) < t else s for s in accumulated]
    uniform = t if all(len(s) == t for s in padded) else None
    defining = SetFamily(padded, uniform_size=uniform)

    dist = dist_family_matrix(g, defining, max_parts=budget.part_cap)
    union_defining = defining.union()
    group_weights = []
    for q in range(p):
        vertices = sorted({v for petal in groups[q] for v in petal})
        reach = np.zeros(g.n, dtype=bool)
        for v in vertices:
            row = dist[v]
            reach |= (row != UNREACHED) & (row <= r)
        group_weights.append(w.of(np.flatnonzero(reach).tolist()))
    selected = min(range(p), key=lambda q: (group_weights[q], q))

    kept_sets = [tuple(sorted(petal + core)) for petal in groups[selected]]
    kept = SetFamily(kept_sets, uniform_size=t)
    for s in kept:
        residue = [v for v in s if v not in union_defining]
        reach = np.zeros(g.n, dtype=bool)
        for v in residue:
            row = dist[v]
            reach |= (row != UNREACHED) & (row <= r)
        weight = w.of(np.flatnonzero(reach).tolist())
        if not w.within_eps(weight, eps):
            raise RuntimeError(
                f"kept set {s} has family-ball weight {weight}, above the bound; "
                "group separation must be broken"
            )
    outcome.kept = kept
    outcome.defining = defining
    outcome.selected_group = selected
    return outcome
