import random
from itertools import combinations, permutations

import pytest

from hampack.constructions import complete_hypergraph, random_hypergraph
from hampack.errors import InvalidInputError
from hampack.hypercore import Hypergraph
from hampack.reduction import (HamiltonCycle, PartitionScheme, build_aux_graph,
                               canonicalize, cycle_from_json_dict,
                               cycle_to_json_dict, lift_matching,
                               lift_matching_pm, sample_scheme, verify_cycle)


class TestSampleScheme:
    def test_shape_ell1(self):
        s = sample_scheme(complete_hypergraph(8, 3), 1, 1)
        assert len(s.part_a) == 4 and s.m == 4
        assert all(len(f) == 1 for f in s.tuples_a)
        assert all(len(b) == 1 for b in s.blocks_b)

    def test_shape_ell0(self):
        s = sample_scheme(complete_hypergraph(6, 3), 0, 1)
        assert len(s.part_a) == 2 and s.m == 2
        assert all(len(f) == 1 for f in s.tuples_a)
        assert all(len(b) == 2 for b in s.blocks_b)

    def test_divisibility_error(self):
        with pytest.raises(InvalidInputError):
            sample_scheme(complete_hypergraph(7, 3), 1, 1)

    def test_ell_range(self):
        with pytest.raises(InvalidInputError):
            sample_scheme(complete_hypergraph(8, 4), 2, 1)

    def test_deterministic(self):
        h = complete_hypergraph(10, 3)
        assert sample_scheme(h, 1, 5) == sample_scheme(h, 1, 5)
        assert sample_scheme(h, 1, 5) != sample_scheme(h, 1, 6)

    def test_partitions_are_partitions(self):
        for seed in range(10):
            s = sample_scheme(complete_hypergraph(12, 4), 1, seed)
            covered = [v for f in s.tuples_a for v in f]
            assert sorted(covered) == list(s.part_a)
            covered_b = [v for b in s.blocks_b for v in b]
            assert sorted(covered_b) == list(s.part_b)


class TestAuxGraph:
    def test_complete_gives_complete(self):
        h = complete_hypergraph(8, 3)
        aux = build_aux_graph(h, sample_scheme(h, 1, 3))
        assert len(aux.graph.edges) == 16

    def test_empty_gives_empty(self):
        h = Hypergraph(8, 3, [])
        aux = build_aux_graph(h, sample_scheme(h, 1, 3))
        assert not aux.graph.edges

    def test_single_missing_edge(self):
        h = complete_hypergraph(8, 3)
        s = sample_scheme(h, 1, 9)
        removed = tuple(sorted(s.tuples_a[0] + s.tuples_a[1] + s.blocks_b[2]))
        h2 = Hypergraph(8, 3, [e for e in h.edges if e != removed])
        aux = build_aux_graph(h2, s)
        missing = set(build_aux_graph(h, s).graph.edges) - set(aux.graph.edges)
        assert missing == {(0, 2)}


class TestLift:
    def test_lifts_verify_on_complete(self):
        h = complete_hypergraph(8, 3)
        aux = build_aux_graph(h, sample_scheme(h, 1, 2))
        cycle = lift_matching(aux, {0: 2, 1: 0, 2: 3, 3: 1})
        assert verify_cycle(h, cycle)

    def test_injection_m4(self):
        h = complete_hypergraph(8, 3)
        aux = build_aux_graph(h, sample_scheme(h, 1, 4))
        lifted = {canonicalize(lift_matching(aux, dict(enumerate(p))))
                  for p in permutations(range(4))}
        assert len(lifted) == 24

    def test_injection_m3(self):
        h = complete_hypergraph(6, 3)
        aux = build_aux_graph(h, sample_scheme(h, 1, 4))
        lifted = {canonicalize(lift_matching(aux, dict(enumerate(p))))
                  for p in permutations(range(3))}
        assert len(lifted) == 6

    def test_m2_reflection_degeneracy(self):
        # at m = 2 the two matchings are reflections of one another: one cycle
        h = complete_hypergraph(4, 3)
        aux = build_aux_graph(h, sample_scheme(h, 1, 0))
        c1 = canonicalize(lift_matching(aux, {0: 0, 1: 1}))
        c2 = canonicalize(lift_matching(aux, {0: 1, 1: 0}))
        assert c1 == c2
        assert frozenset(c1.segments()) == frozenset(c2.segments())

    def test_rejects_non_perfect_and_non_edges(self):
        h = complete_hypergraph(8, 3)
        aux = build_aux_graph(h, sample_scheme(h, 1, 2))
        with pytest.raises(InvalidInputError):
            lift_matching(aux, {0: 0, 1: 1})
        with pytest.raises(InvalidInputError):
            lift_matching(aux, {0: 0, 1: 0, 2: 1, 3: 2})
        h_sparse = Hypergraph(8, 3, [])
        aux_sparse = build_aux_graph(h_sparse, sample_scheme(h_sparse, 1, 2))
        with pytest.raises(InvalidInputError):
            lift_matching(aux_sparse, {0: 0, 1: 1, 2: 2, 3: 3})

    def test_lift_pm_both_matchings_of_k22(self):
        h = complete_hypergraph(6, 3)
        aux = build_aux_graph(h, sample_scheme(h, 0, 8))
        pm1 = lift_matching_pm(aux, {0: 0, 1: 1})
        pm2 = lift_matching_pm(aux, {0: 1, 1: 0})
        assert pm1 != pm2
        for pm in (pm1, pm2):
            assert len(pm) == 2
            assert set().union(*pm) == set(range(6))
            assert all(h.has_edge(e) for e in pm)

    def test_lift_pm_requires_ell0(self):
        h = complete_hypergraph(8, 3)
        aux = build_aux_graph(h, sample_scheme(h, 1, 2))
        with pytest.raises(InvalidInputError):
            lift_matching_pm(aux, {i: i for i in range(4)})


class TestVerify:
    def test_detects_missing_edge(self):
        h = complete_hypergraph(8, 3)
        aux = build_aux_graph(h, sample_scheme(h, 1, 6))
        cycle = lift_matching(aux, {0: 0, 1: 1, 2: 2, 3: 3})
        victim = cycle.segments()[1]
        h2 = Hypergraph(8, 3, [e for e in h.edges if e != tuple(sorted(victim))])
        check = verify_cycle(h2, cycle)
        assert not check.ok
        assert check.failure == "segment-not-an-edge"
        assert check.witness == tuple(sorted(victim))

    def test_detects_repeated_vertex(self):
        h = complete_hypergraph(8, 3)
        bad = HamiltonCycle(k=3, ell=1, arrangement=(0, 1, 2, 3, 4, 5, 6, 0))
        check = verify_cycle(h, bad)
        assert not check.ok and check.failure == "not-a-permutation"
        assert 0 in check.witness

    def test_detects_divisibility(self):
        h = complete_hypergraph(7, 3)
        bad = HamiltonCycle(k=3, ell=1, arrangement=tuple(range(7)))
        assert verify_cycle(h, bad).failure == "length-not-divisible"


class TestCanonicalize:
    def test_idempotent(self):
        h = complete_hypergraph(8, 3)
        aux = build_aux_graph(h, sample_scheme(h, 1, 10))
        c = lift_matching(aux, {0: 1, 1: 3, 2: 0, 3: 2})
        assert canonicalize(canonicalize(c)) == canonicalize(c)

    def test_reflection_invariant(self):
        # reversing the walk keeps block boundaries only after re-aligning by
        # the interior width (raw string reversal changes the edge set)
        c = HamiltonCycle(k=3, ell=1, arrangement=(0, 1, 2, 3, 4, 5, 6, 7))
        rev = tuple(reversed(c.arrangement))
        realigned = rev[1:] + rev[:1]
        reflected = HamiltonCycle(k=3, ell=1, arrangement=realigned)
        assert frozenset(map(frozenset, reflected.segments())) == \
            frozenset(map(frozenset, c.segments()))
        assert canonicalize(c) == canonicalize(reflected)

    def test_reflection_invariant_ell0(self):
        c = HamiltonCycle(k=3, ell=0, arrangement=(0, 1, 2, 3, 4, 5, 6, 7, 8))
        reflected = HamiltonCycle(k=3, ell=0, arrangement=tuple(reversed(c.arrangement)))
        assert canonicalize(c) == canonicalize(reflected)

    def test_rotation_invariant(self):
        arr = (0, 1, 2, 3, 4, 5, 6, 7)
        c = HamiltonCycle(k=3, ell=1, arrangement=arr)
        rotated = HamiltonCycle(k=3, ell=1, arrangement=arr[2:] + arr[:2])
        assert canonicalize(c) == canonicalize(rotated)

    def test_within_block_sort(self):
        c = HamiltonCycle(k=4, ell=1, arrangement=(0, 2, 1, 3, 5, 4, 6, 7, 9, 8, 11, 10))
        canon = canonicalize(c)
        segs_before = {frozenset(s) for s in c.segments()}
        segs_after = {frozenset(s) for s in canon.segments()}
        assert segs_before == segs_after

    def test_rejects_non_permutation(self):
        with pytest.raises(InvalidInputError):
            canonicalize(HamiltonCycle(k=3, ell=1, arrangement=(0, 0, 1, 2)))


def test_cycle_json_roundtrip():
    c = HamiltonCycle(k=3, ell=1, arrangement=(0, 1, 2, 3, 4, 5))
    assert cycle_from_json_dict(cycle_to_json_dict(c), k=3) == c


def test_all_matchings_of_all_small_schemes_lift_and_verify():
    """Roundtrip over every matching of sampled aux graphs on random inputs."""
    for seed in range(6):
        h = random_hypergraph(6, 3, 0.8, seed)
        aux = build_aux_graph(h, sample_scheme(h, 1, seed))
        m = aux.scheme.m
        for perm in permutations(range(m)):
            if all((i, perm[i]) in aux.graph.edges for i in range(m)):
                cycle = lift_matching(aux, dict(enumerate(perm)))
                assert verify_cycle(h, cycle)
