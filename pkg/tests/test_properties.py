"""Invariant checks driven by generated instances."""

import numpy as np
from hypothesis import given, settings, strategies as st

from flipkit import (
    FlipSpec,
    Graph,
    Partition,
    apply_flip,
    ball_family,
    canonical_pairs,
    complement,
    definable_partition,
    diameter,
    dist_family_matrix,
    dist_partition_matrix,
    enumerate_flips,
    fileio,
    num_flips,
    refine,
    vc_dimension,
)
from flipkit.metrics import SetFamily
from flipkit.graphs import UNREACHED


@st.composite
def graphs(draw, min_n=1, max_n=8):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    mask = draw(st.integers(0, (1 << len(pairs)) - 1))
    edges = [p for t, p in enumerate(pairs) if (mask >> t) & 1]
    return Graph.from_edges(n, edges)


@st.composite
def graphs_with_partitions(draw, min_n=2, max_n=7, max_parts=3):
    g = draw(graphs(min_n, max_n))
    labels = draw(
        st.lists(st.integers(0, max_parts - 1), min_size=g.n, max_size=g.n)
    )
    return g, Partition.from_labels(labels)


@st.composite
def graphs_with_flips(draw):
    g, p = draw(graphs_with_partitions())
    pairs = canonical_pairs(len(p.parts))
    bits = draw(st.integers(0, (1 << len(pairs)) - 1))
    return g, p, FlipSpec.from_bits(len(p.parts), bits)


@given(graphs())
@settings(max_examples=60, deadline=None)
def test_complement_involution(g):
    assert complement(complement(g)) == g


@given(graphs(min_n=1, max_n=9))
@settings(max_examples=60, deadline=None)
def test_diameter_dichotomy(g):
    assert diameter(g) <= 3 or diameter(complement(g)) <= 3


@given(graphs_with_flips())
@settings(max_examples=60, deadline=None)
def test_flip_involution(gpf):
    g, p, spec = gpf
    assert apply_flip(apply_flip(g, p, spec), p, spec) == g


@given(graphs_with_flips(), st.integers(0, 1 << 6))
@settings(max_examples=60, deadline=None)
def test_flips_compose_by_symmetric_difference(gpf, raw):
    g, p, spec1 = gpf
    spec2 = FlipSpec.from_bits(
        len(p.parts), raw % num_flips(len(p.parts))
    )
    assert apply_flip(apply_flip(g, p, spec1), p, spec2) == apply_flip(
        g, p, spec1.compose(spec2)
    )


@given(graphs(), st.data())
@settings(max_examples=40, deadline=None)
def test_definable_partition_size_bound(g, data):
    k = data.draw(st.integers(0, min(4, g.n)))
    s = data.draw(st.permutations(range(g.n)))[:k]
    p = definable_partition(g, s)
    assert len(p.parts) <= k + 2 ** k
    assert sorted(v for part in p.parts for v in part) == list(range(g.n))


@given(graphs_with_partitions(max_n=6, max_parts=3))
@settings(max_examples=30, deadline=None)
def test_enumeration_is_exact_and_duplicate_free(gp):
    g, p = gp
    seen = set()
    for spec, flipped in enumerate_flips(g, p):
        assert spec.pairs not in seen
        seen.add(spec.pairs)
        assert apply_flip(g, p, spec) == flipped
    assert len(seen) == num_flips(len(p.parts))


@given(graphs_with_partitions(max_n=6))
@settings(max_examples=30, deadline=None)
def test_partition_metric_axioms(gp):
    g, p = gp
    d = dist_partition_matrix(g, p).astype(float)
    d[d == UNREACHED] = np.inf
    assert (d == d.T).all()
    assert (np.diag(d) == 0).all()
    off = ~np.eye(g.n, dtype=bool)
    assert (d[off] >= 2).all()
    through = (d[:, :, None] + d[None, :, :]).min(axis=1)
    assert (d <= through + 1e-9).all()


@given(graphs(min_n=2, max_n=6), st.data())
@settings(max_examples=30, deadline=None)
def test_ball_duality(g, data):
    v = data.draw(st.integers(0, g.n - 1))
    r = data.draw(st.integers(0, 3))
    s = data.draw(st.permutations(range(g.n)))[:1]
    fam = SetFamily([s])
    d = dist_family_matrix(g, fam)
    b = ball_family(g, fam, v, r)
    for u in range(g.n):
        assert (u in b) == (d[u, v] != UNREACHED and d[u, v] <= r)


@given(graphs_with_partitions(), graphs_with_partitions())
@settings(max_examples=30, deadline=None)
def test_refine_refines_both(gp1, gp2):
    g, p = gp1
    _, q_template = gp2
    # rebuild the second partition over the first graph's vertex count
    labels = [q_template.part_of(v % q_template.n) for v in range(g.n)]
    q = Partition.from_labels(labels)
    r = refine(p, q)
    assert r.refines(p) and r.refines(q)


@given(graphs(min_n=1, max_n=10))
@settings(max_examples=40, deadline=None)
def test_sauer_shelah_bound(g):
    from math import comb

    rep = vc_dimension(g)
    for size, value in rep.traces_by_size.items():
        assert value <= 2 ** size
        if size >= rep.vcdim:
            assert value <= sum(comb(size, i) for i in range(rep.vcdim + 1))


@given(graphs())
@settings(max_examples=40, deadline=None)
def test_graph_file_roundtrip(g):
    assert fileio.loads_graph(fileio.dumps_graph(g)) == g
