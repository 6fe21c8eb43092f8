import pytest

import oracle
from flipkit import (
    CapExceeded,
    DomainError,
    FlipSpec,
    Graph,
    Partition,
    apply_flip,
    canonical_pairs,
    complement,
    definable_partition,
    enumerate_flips,
    enumerate_partitions,
    num_flips,
    reconstruct_flip_spec,
    refine,
)
from flipkit.generators import clique, cycle, path, star
from conftest import random_graph, random_partition_labels


class TestPartition:
    def test_canonical_order(self):
        p = Partition(4, [[3, 2], [0, 1]])
        assert p.parts == ((0, 1), (2, 3))

    def test_rejects_empty_part(self):
        with pytest.raises(DomainError):
            Partition(2, [[0, 1], []])

    def test_rejects_overlap(self):
        with pytest.raises(DomainError):
            Partition(2, [[0, 1], [1]])

    def test_rejects_missing_vertex(self):
        with pytest.raises(DomainError):
            Partition(3, [[0, 1]])

    def test_part_of(self):
        p = Partition(4, [[0, 2], [1, 3]])
        assert [p.part_of(v) for v in range(4)] == [0, 1, 0, 1]

    def test_refines(self):
        coarse = Partition(4, [[0, 1], [2, 3]])
        fine = Partition(4, [[0], [1], [2, 3]])
        assert fine.refines(coarse)
        assert not coarse.refines(fine)


class TestApplyFlip:
    def test_empty_spec_is_identity(self, rng):
        g = random_graph(rng, 6, 0.5)
        p = Partition.from_labels(random_partition_labels(rng, 6, 3))
        assert apply_flip(g, p, FlipSpec()) == g

    def test_full_loop_is_complement(self):
        g = clique(4)
        flipped = apply_flip(g, Partition.trivial(4), FlipSpec([(0, 0)]))
        assert flipped.num_edges() == 0
        assert flipped == complement(g)

    def test_c4_cross_pair(self):
        # cycle 0-1-2-3-0; flipping the cross pair toggles exactly the four
        # crossing vertex pairs, keeping the within-part edges 01 and 23.
        g = cycle(4)
        p = Partition(4, [[0, 1], [2, 3]])
        flipped = apply_flip(g, p, FlipSpec([(0, 1)]))
        want = oracle.flip_edges(4, oracle.edges_of(g), p.parts, [(0, 1)])
        assert oracle.edges_of(flipped) == want
        assert set(flipped.edges()) == {(0, 1), (0, 2), (1, 3), (2, 3)}

    def test_involution(self, rng):
        for _ in range(20):
            n = rng.randint(2, 8)
            g = random_graph(rng, n, rng.random())
            p = Partition.from_labels(random_partition_labels(rng, n, 3))
            pairs = canonical_pairs(len(p.parts))
            spec = FlipSpec([q for q in pairs if rng.random() < 0.5])
            assert apply_flip(apply_flip(g, p, spec), p, spec) == g

    def test_composition_by_symmetric_difference(self, rng):
        for _ in range(20):
            n = rng.randint(2, 8)
            g = random_graph(rng, n, rng.random())
            p = Partition.from_labels(random_partition_labels(rng, n, 3))
            pairs = canonical_pairs(len(p.parts))
            s1 = FlipSpec([q for q in pairs if rng.random() < 0.5])
            s2 = FlipSpec([q for q in pairs if rng.random() < 0.5])
            two_step = apply_flip(apply_flip(g, p, s1), p, s2)
            assert two_step == apply_flip(g, p, s1.compose(s2))

    def test_matches_oracle(self, rng):
        for _ in range(20):
            n = rng.randint(2, 7)
            g = random_graph(rng, n, rng.random())
            p = Partition.from_labels(random_partition_labels(rng, n, 3))
            pairs = canonical_pairs(len(p.parts))
            chosen = [q for q in pairs if rng.random() < 0.5]
            got = apply_flip(g, p, FlipSpec(chosen))
            want = oracle.flip_edges(n, oracle.edges_of(g), p.parts, chosen)
            assert oracle.edges_of(got) == want

    def test_bad_spec_index(self):
        with pytest.raises(DomainError):
            apply_flip(path(3), Partition.trivial(3), FlipSpec([(0, 1)]))


class TestDefinablePartition:
    def test_empty_set_is_trivial(self, rng):
        g = random_graph(rng, 5, 0.5)
        assert definable_partition(g, []) == Partition.trivial(5)

    def test_star_center(self):
        g = star(4)
        p = definable_partition(g, [0])
        assert p.parts == ((0,), (1, 2, 3))

    def test_p4_middle_vertex(self):
        g = path(4)  # 0-1-2-3
        p = definable_partition(g, [1])
        assert p.parts == ((0, 2), (1,), (3,))

    def test_size_bound(self, rng):
        for _ in range(20):
            n = rng.randint(2, 9)
            g = random_graph(rng, n, rng.random())
            k = rng.randint(0, min(4, n))
            s = rng.sample(range(n), k)
            p = definable_partition(g, s)
            assert len(p.parts) <= len(s) + 2 ** len(s)

    def test_matches_oracle(self, rng):
        for _ in range(20):
            n = rng.randint(2, 8)
            g = random_graph(rng, n, rng.random())
            s = rng.sample(range(n), rng.randint(0, 3))
            got = definable_partition(g, s)
            assert list(got.parts) == oracle.definable_parts(n, oracle.edges_of(g), s)

    def test_class_count_respects_trace_bound(self, rng):
        # neighborhood classes are traces on the defining set, so their
        # count obeys the binomial-sum bound at the graph's VC-dimension
        from math import comb

        from flipkit import vc_dimension

        for _ in range(15):
            n = rng.randint(2, 10)
            g = random_graph(rng, n, rng.random())
            d = vc_dimension(g).vcdim
            k = rng.randint(0, min(4, n))
            s = set(rng.sample(range(n), k))
            p = definable_partition(g, s)
            classes = len(p.parts) - len(s)
            assert classes <= sum(comb(k, i) for i in range(min(d, k) + 1))


class TestEnumerateFlips:
    def test_counts(self, rng):
        g = random_graph(rng, 6, 0.5)
        for k in (1, 2, 3):
            p = Partition(6, [[v for v in range(6) if v % k == i] for i in range(k)])
            flips = list(enumerate_flips(g, p))
            assert len(flips) == num_flips(k) == 2 ** (k * (k + 1) // 2)
            assert len({spec.pairs for spec, _ in flips}) == len(flips)

    def test_single_part_yields_graph_and_complement(self):
        g = clique(3)
        flips = list(enumerate_flips(g, Partition.trivial(3)))
        assert [spec.pairs for spec, _ in flips] == [frozenset(), frozenset({(0, 0)})]
        assert flips[0][1] == g
        assert flips[1][1] == complement(g)

    def test_spec_order_is_binary_counter(self, rng):
        g = random_graph(rng, 5, 0.5)
        p = Partition(5, [[0, 1], [2, 3], [4]])
        for bits, (spec, _) in enumerate(enumerate_flips(g, p)):
            assert spec.to_bits(3) == bits

    def test_graphs_match_specs(self, rng):
        g = random_graph(rng, 6, 0.4)
        p = Partition(6, [[0, 3], [1, 4], [2, 5]])
        for spec, flipped in enumerate_flips(g, p):
            assert flipped == apply_flip(g, p, spec)

    def test_cap_refusal_names_the_flag(self):
        g = Graph.empty(5)
        p = Partition.singletons(5)
        with pytest.raises(CapExceeded, match="max-parts"):
            list(enumerate_flips(g, p))

    def test_env_var_overrides_cap(self, monkeypatch):
        g = Graph.empty(5)
        p = Partition.singletons(5)
        monkeypatch.setenv("FLIPKIT_MAX_PARTS", "5")
        assert sum(1 for _ in enumerate_flips(g, p)) == num_flips(5)


class TestRefine:
    def test_against_trivial(self, rng):
        n = 6
        g = random_graph(rng, n, 0.5)
        p = Partition.from_labels(random_partition_labels(rng, n, 3))
        assert refine(p, Partition.trivial(n)) == p
        assert refine(p, p) == p

    def test_crossing_partitions_give_singletons(self):
        p = Partition(4, [[0, 1], [2, 3]])
        q = Partition(4, [[0, 2], [1, 3]])
        assert refine(p, q) == Partition.singletons(4)

    def test_result_refines_both(self, rng):
        for _ in range(10):
            n = rng.randint(2, 8)
            p = Partition.from_labels(random_partition_labels(rng, n, 3))
            q = Partition.from_labels(random_partition_labels(rng, n, 3))
            r = refine(p, q)
            assert r.refines(p) and r.refines(q)

    def test_mismatched_universes(self):
        with pytest.raises(DomainError):
            refine(Partition.trivial(3), Partition.trivial(4))


class TestEnumeratePartitions:
    def test_counts_bell_numbers(self):
        # partitions of 4 elements into <= 4 parts: Bell(4) = 15
        assert sum(1 for _ in enumerate_partitions(4, 4)) == 15
        # into <= 2 parts: 2^(4-1) = 8
        assert sum(1 for _ in enumerate_partitions(4, 2)) == 8

    def test_first_is_trivial(self):
        first = next(enumerate_partitions(5, 3))
        assert first == Partition.trivial(5)

    def test_all_distinct(self):
        seen = [p.parts for p in enumerate_partitions(5, 3)]
        assert len(seen) == len(set(seen))


def test_reconstruct_flip_spec_roundtrip(rng):
    for _ in range(20):
        n = rng.randint(2, 8)
        g = random_graph(rng, n, rng.random())
        p = Partition.from_labels(random_partition_labels(rng, n, 4))
        pairs = canonical_pairs(len(p.parts))
        spec = FlipSpec([q for q in pairs if rng.random() < 0.5])
        flipped = apply_flip(g, p, spec)
        recovered = reconstruct_flip_spec(g, flipped, p)
        assert apply_flip(g, p, recovered) == flipped


def test_reconstruct_rejects_non_flip():
    g = path(4)
    other = Graph.from_edges(4, [(0, 1)])
    with pytest.raises(DomainError):
        reconstruct_flip_spec(g, other, Partition(4, [[0, 1], [2, 3]]))
