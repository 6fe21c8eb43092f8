"""Exhaustive and randomized verification sweeps.

Each sweep asserts one of the structural guarantees the library is built
on, over either every labeled graph up to a size cap or a seeded stream of
random instances, and returns a reproducible report.  A failure payload
carries the counterexample; none is ever expected.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from math import comb, inf

import numpy as np

from .conversion import BipartiteCaseTag, classify_bipartite, convert
from .errors import CapExceeded
from .flips import Partition, apply_flip, definable_partition
from .generators import gnp
from .graphs import (
    UNREACHED,
    Bipartite,
    Graph,
    bipartite_complement,
    distance_matrix,
    is_connected,
)
from .metrics import dist_definable_matrix, dist_partition_matrix
from .vc import vc_dimension

_EXHAUSTIVE_N_CAP = 6
_BIPARTITE_SIDE_CAP = 3


@dataclass
class RunReport:
    """Outcome of one command: deterministic given the command and seed.

    The wall time is measured but excluded from serialization, so repeated
    runs with one seed produce byte-identical reports.
    """

    command: str
    parameters: dict
    outcome: str  # pass | fail | witness | refused
    counters: dict = field(default_factory=dict)
    payload: dict | None = None
    wall_time: float = 0.0

    def serialize(self) -> str:
        body = {
            "command": self.command,
            "parameters": self.parameters,
            "outcome": self.outcome,
            "counters": self.counters,
            "payload": self.payload,
        }
        return json.dumps(body, sort_keys=True, indent=2) + "\n"

    @property
    def exit_code(self) -> int:
        if self.outcome in ("pass", "witness"):
            return 0
        if self.outcome == "fail":
            return 1
        return 2


def _timed(report: RunReport, started: float) -> RunReport:
    report.wall_time = time.perf_counter() - started
    return report


# ---------------------------------------------------------------------------
# Batched exhaustive helpers
# ---------------------------------------------------------------------------


def _all_graph_adjacencies(n: int) -> np.ndarray:
    """(2^C(n,2), n, n) boolean stack of every labeled graph on n vertices."""
    iu, iv = np.triu_indices(n, k=1)
    npairs = len(iu)
    count = 1 << npairs
    bits = (
        (np.arange(count, dtype=np.uint64)[:, None] >> np.arange(npairs, dtype=np.uint64))
        & 1
    ).astype(bool)
    adjs = np.zeros((count, n, n), dtype=bool)
    adjs[:, iu, iv] = bits
    adjs[:, iv, iu] = bits
    return adjs


def _reach_within(adjs: np.ndarray, steps: int) -> np.ndarray:
    """Reachability within ``steps`` hops, batched boolean powers."""
    n = adjs.shape[1]
    reach = adjs | np.eye(n, dtype=bool)
    for _ in range(steps - 1):
        reach = (reach @ adjs) | reach
    return reach


def _diam_at_most(adjs: np.ndarray, bound: int) -> np.ndarray:
    return _reach_within(adjs, max(bound, 1)).all(axis=(1, 2))


def _connected_mask(adjs: np.ndarray) -> np.ndarray:
    n = adjs.shape[1]
    return _reach_within(adjs, max(n - 1, 1)).all(axis=(1, 2))


def verify_diam_complement(n: int) -> RunReport:
    """Every labeled n-vertex graph has diameter <= 3 or a complement with
    diameter <= 3; exhaustive for n up to 6."""
    started = time.perf_counter()
    report = RunReport(
        command="verify", parameters={"lemma": "diam-complement", "exhaustive": n},
        outcome="pass",
    )
    if not 1 <= n <= _EXHAUSTIVE_N_CAP:
        raise CapExceeded(f"exhaustive diameter sweep capped at n <= {_EXHAUSTIVE_N_CAP}")
    adjs = _all_graph_adjacencies(n)
    eye = np.eye(n, dtype=bool)
    comps = ~adjs & ~eye
    ok = _diam_at_most(adjs, 3) | _diam_at_most(comps, 3)
    report.counters["graphs_checked"] = int(adjs.shape[0])
    if not ok.all():
        bad = int(np.flatnonzero(~ok)[0])
        report.outcome = "fail"
        report.payload = {"n": n, "edges": Graph(adjs[bad]).edges()}
    return _timed(report, started)


def _bipartite_adjacencies(a: int, b: int) -> np.ndarray:
    """(2^(a*b), a+b, a+b) stack of every bipartite graph with sides a, b."""
    n = a + b
    cells = [(i, a + j) for i in range(a) for j in range(b)]
    count = 1 << len(cells)
    bits = (
        (np.arange(count, dtype=np.uint64)[:, None] >> np.arange(len(cells), dtype=np.uint64))
        & 1
    ).astype(bool)
    adjs = np.zeros((count, n, n), dtype=bool)
    for t, (u, v) in enumerate(cells):
        adjs[:, u, v] = bits[:, t]
        adjs[:, v, u] = bits[:, t]
    return adjs


def verify_bipartite_trichotomy(max_side: int = _BIPARTITE_SIDE_CAP) -> RunReport:
    """Every bipartite graph has diameter <= 6, a bipartite complement with
    diameter <= 6, or both disconnected; exhaustive for sides up to 3."""
    started = time.perf_counter()
    report = RunReport(
        command="verify",
        parameters={"lemma": "bipartite-trichotomy", "max_side": max_side},
        outcome="pass",
    )
    if not 1 <= max_side <= _BIPARTITE_SIDE_CAP:
        raise CapExceeded(f"bipartite sweep capped at sides <= {_BIPARTITE_SIDE_CAP}")
    total = 0
    for a in range(1, max_side + 1):
        for b in range(1, max_side + 1):
            adjs = _bipartite_adjacencies(a, b)
            n = a + b
            cross = np.zeros((n, n), dtype=bool)
            cross[:a, a:] = True
            cross[a:, :a] = True
            comps = adjs ^ cross
            ok = (
                _diam_at_most(adjs, 6)
                | _diam_at_most(comps, 6)
                | (~_connected_mask(adjs) & ~_connected_mask(comps))
            )
            total += int(adjs.shape[0])
            if not ok.all():
                bad = int(np.flatnonzero(~ok)[0])
                report.outcome = "fail"
                report.payload = {
                    "sides": [a, b],
                    "edges": Graph(adjs[bad]).edges(),
                }
                report.counters["graphs_checked"] = total
                return _timed(report, started)
    report.counters["graphs_checked"] = total
    return _timed(report, started)


def _case_matches(b: Bipartite, case) -> bool:
    if case.tag is BipartiteCaseTag.CONNECTED_OR_COMPLEMENT:
        return is_connected(b.graph) or is_connected(bipartite_complement(b).graph)
    if case.tag is BipartiteCaseTag.ISOLATED_AND_DOMINATING:
        side = b.right if case.side == "right" else b.left
        other = b.left if case.side == "right" else b.right
        return (
            case.v_minus in side
            and case.v_plus in side
            and b.graph.degree(case.v_minus) == 0
            and all(b.graph.adj[case.v_plus, u] for u in other)
        )
    (u1, v1), (u2, v2) = case.blocks
    if set(u1) | set(u2) != set(b.left) or set(v1) | set(v2) != set(b.right):
        return False
    for ui, vi in ((u1, v1), (u2, v2)):
        if not ui or not vi:
            return False
        if not b.graph.adj[np.ix_(list(ui), list(vi))].all():
            return False
    # no edges between the two bicliques
    return not (
        b.graph.adj[np.ix_(list(u1), list(v2))].any()
        or b.graph.adj[np.ix_(list(u2), list(v1))].any()
    )


def verify_bipartite_classification(max_side: int = _BIPARTITE_SIDE_CAP) -> RunReport:
    """When a bipartite graph and its complement are both disconnected, the
    classifier returns a structurally verified case."""
    started = time.perf_counter()
    report = RunReport(
        command="verify",
        parameters={"lemma": "bipartite-classification", "max_side": max_side},
        outcome="pass",
    )
    if not 1 <= max_side <= _BIPARTITE_SIDE_CAP:
        raise CapExceeded(f"bipartite sweep capped at sides <= {_BIPARTITE_SIDE_CAP}")
    total = 0
    degenerate = 0
    for a in range(1, max_side + 1):
        for b_side in range(1, max_side + 1):
            adjs = _bipartite_adjacencies(a, b_side)
            left = tuple(range(a))
            right = tuple(range(a, a + b_side))
            for idx in range(adjs.shape[0]):
                total += 1
                b = Bipartite(Graph(adjs[idx]), left, right)
                case = classify_bipartite(b)
                if case.tag is not BipartiteCaseTag.CONNECTED_OR_COMPLEMENT:
                    degenerate += 1
                if not _case_matches(b, case):
                    report.outcome = "fail"
                    report.payload = {
                        "sides": [a, b_side],
                        "edges": b.graph.edges(),
                        "tag": case.tag.value,
                    }
                    report.counters.update(
                        graphs_checked=total, degenerate_cases=degenerate
                    )
                    return _timed(report, started)
    report.counters.update(graphs_checked=total, degenerate_cases=degenerate)
    return _timed(report, started)


# ---------------------------------------------------------------------------
# Randomized sweeps
# ---------------------------------------------------------------------------


def _random_instance(rng: random.Random, *, n_max: int = 10, parts_max: int = 3):
    n = rng.randint(2, n_max)
    g = gnp(n, rng.choice([0.2, 0.35, 0.5, 0.65, 0.8]), seed=rng.randrange(1 << 30))
    k = rng.randint(1, min(parts_max, n))
    labels = [rng.randrange(k) for _ in range(n)]
    labels[: k] = list(range(k))  # every part nonempty
    return g, Partition.from_labels(labels)


def _as_float(dist: np.ndarray) -> np.ndarray:
    out = dist.astype(float)
    out[dist == UNREACHED] = inf
    return out


def verify_conversion(count: int, seed: int) -> RunReport:
    """Conversion soundness on random instances: 6 * flip distance bounds
    the partition distance (full flip enumeration), plus the refinement
    contract and the size bound."""
    started = time.perf_counter()
    report = RunReport(
        command="verify",
        parameters={"lemma": "conversion", "random": count, "seed": seed},
        outcome="pass",
    )
    rng = random.Random(seed)
    max_ratio = 0.0
    for index in range(count):
        g, p = _random_instance(rng)
        result = convert(g, p)
        problems = []
        if not result.refined.refines(p):
            problems.append("refined partition does not refine the input")
        if len(result.refined.parts) > len(p.parts) * (1 << len(p.parts)):
            problems.append("refinement size bound violated")
        if apply_flip(g, result.refined, result.refined_spec) != result.flipped:
            problems.append("replayed spec does not reproduce the flip")
        dp = _as_float(dist_partition_matrix(g, p))
        dg = _as_float(distance_matrix(result.flipped))
        finite = np.isfinite(dg) & (dg > 0)
        if not (dp[finite] <= 6 * dg[finite]).all() or not np.isfinite(dp[finite]).all():
            problems.append("partition distance exceeds 6x flip distance")
        else:
            if finite.any():
                max_ratio = max(max_ratio, float((dp[finite] / dg[finite]).max()))
        if problems:
            report.outcome = "fail"
            report.payload = {
                "instance": index,
                "edges": g.edges(),
                "parts": [list(part) for part in p.parts],
                "problems": problems,
            }
            break
    report.counters["instances_checked"] = count if report.outcome == "pass" else index + 1
    report.counters["max_ratio_times_100"] = int(round(max_ratio * 100))
    return _timed(report, started)


def verify_metric_axioms(count: int, seed: int) -> RunReport:
    """Partition distances are symmetric, zero exactly on the diagonal, at
    least 2 off it, satisfy the triangle inequality, and grow under
    refinement."""
    started = time.perf_counter()
    report = RunReport(
        command="verify",
        parameters={"lemma": "metric-axioms", "random": count, "seed": seed},
        outcome="pass",
    )
    rng = random.Random(seed)
    for index in range(count):
        g, p = _random_instance(rng)
        d = _as_float(dist_partition_matrix(g, p))
        problems = []
        if not np.array_equal(d, d.T):
            problems.append("not symmetric")
        if (np.diag(d) != 0).any():
            problems.append("nonzero on the diagonal")
        off = ~np.eye(g.n, dtype=bool)
        if (d[off] < 2).any():
            problems.append("off-diagonal distance below 2")
        through = (d[:, :, None] + d[None, :, :]).min(axis=1)
        if (d > through + 1e-9).any():
            problems.append("triangle inequality violated")
        splittable = [i for i, part in enumerate(p.parts) if len(part) > 1]
        if splittable and len(p.parts) < 4:
            i = rng.choice(splittable)
            part = list(p.parts[i])
            cut = rng.randint(1, len(part) - 1)
            finer_parts = [list(q) for j, q in enumerate(p.parts) if j != i]
            finer_parts += [part[:cut], part[cut:]]
            finer = Partition(g.n, finer_parts)
            d_fine = _as_float(dist_partition_matrix(g, finer))
            if (d_fine < d - 1e-9).any():
                problems.append("refinement decreased the metric")
        if problems:
            report.outcome = "fail"
            report.payload = {
                "instance": index,
                "edges": g.edges(),
                "parts": [list(part) for part in p.parts],
                "problems": problems,
            }
            break
    report.counters["instances_checked"] = count if report.outcome == "pass" else index + 1
    return _timed(report, started)


def verify_aggregation(count: int, seed: int) -> RunReport:
    """Joining two defining sets never shrinks the metric: the union's
    distance dominates the pointwise max of the members'."""
    started = time.perf_counter()
    report = RunReport(
        command="verify",
        parameters={"lemma": "aggregation", "random": count, "seed": seed},
        outcome="pass",
    )
    rng = random.Random(seed)
    for index in range(count):
        for _ in range(40):
            n = rng.randint(3, 8)
            g = gnp(n, rng.choice([0.2, 0.4, 0.6]), seed=rng.randrange(1 << 30))
            a, b = rng.sample(range(n), 2)
            union_parts = len(definable_partition(g, [a, b]).parts)
            if union_parts <= 5:
                break
        d_a = _as_float(dist_definable_matrix(g, [a]))
        d_b = _as_float(dist_definable_matrix(g, [b]))
        d_union = _as_float(dist_definable_matrix(g, [a, b], max_parts=6))
        if (d_union < np.maximum(d_a, d_b) - 1e-9).any():
            report.outcome = "fail"
            report.payload = {
                "instance": index,
                "edges": g.edges(),
                "sets": [[a], [b]],
            }
            break
    report.counters["instances_checked"] = count if report.outcome == "pass" else index + 1
    return _timed(report, started)


def verify_sauer_shelah(count: int, seed: int) -> RunReport:
    """Computed trace counts never exceed the binomial-sum bound at the
    computed VC-dimension."""
    started = time.perf_counter()
    report = RunReport(
        command="verify",
        parameters={"lemma": "sauer-shelah", "random": count, "seed": seed},
        outcome="pass",
    )
    rng = random.Random(seed)
    for index in range(count):
        n = rng.randint(1, 12)
        g = gnp(n, rng.random(), seed=rng.randrange(1 << 30))
        rep = vc_dimension(g)
        for size, value in rep.traces_by_size.items():
            if size < rep.vcdim:
                continue
            bound = sum(comb(size, i) for i in range(rep.vcdim + 1))
            if value > bound:
                report.outcome = "fail"
                report.payload = {
                    "instance": index,
                    "edges": g.edges(),
                    "size": size,
                    "traces": value,
                    "bound": bound,
                }
                report.counters["instances_checked"] = index + 1
                return _timed(report, started)
    report.counters["instances_checked"] = count
    return _timed(report, started)


LEMMA_SWEEPS = {
    "diam-complement": ("exhaustive", verify_diam_complement),
    "bipartite-trichotomy": ("exhaustive", verify_bipartite_trichotomy),
    "bipartite-classification": ("exhaustive", verify_bipartite_classification),
    "conversion": ("random", verify_conversion),
    "aggregation": ("random", verify_aggregation),
    "sauer-shelah": ("random", verify_sauer_shelah),
    "metric-axioms": ("random", verify_metric_axioms),
}
