import json
from itertools import combinations

import pytest

from hampack.constructions import complete_hypergraph, parity_hypergraph, random_hypergraph
from hampack.errors import InvalidQueryError, ParseError
from hampack.hypercore import (Hypergraph, degree_of, degree_report,
                               read_hypergraph, relative_degree,
                               write_hypergraph)


def test_degree_of_complete():
    h = complete_hypergraph(6, 3)
    assert degree_of(h, [0, 1]) == 4  # C(4, 1) completions


def test_degree_of_empty_subset_counts_all_edges():
    h = complete_hypergraph(5, 3)
    assert degree_of(h, []) == h.num_edges()


def test_degree_of_parity_pair_matches_enumeration():
    cons = parity_hypergraph(12, 3)
    h = cons.hypergraph
    # both vertices inside the odd part; count valid third vertices directly
    expected = sum(1 for v in range(12) if v not in (0, 1) and h.has_edge((0, 1, v)))
    assert degree_of(h, [0, 1]) == expected
    # and by the parity rule itself: the third vertex must avoid the odd part
    assert expected == 12 - len(cons.part_a)


def test_degree_of_oversized_subset_rejected():
    h = complete_hypergraph(5, 3)
    with pytest.raises(InvalidQueryError):
        degree_of(h, [0, 1, 2, 3])


def test_degree_report_complete_is_regular():
    rep = degree_report(complete_hypergraph(6, 3), 2)
    assert rep.min_degree == rep.max_degree == 4
    assert rep.witness_min is not None


def test_degree_report_no_edges():
    h = Hypergraph(5, 2, [])
    rep = degree_report(h, 1)
    assert rep.min_degree == rep.max_degree == 0


@pytest.mark.parametrize("d", [0, 3, 5])
def test_degree_report_d_out_of_range(d):
    with pytest.raises(InvalidQueryError):
        degree_report(complete_hypergraph(6, 3), d)


def test_degree_report_parity_bound():
    # scanned minimum respects the construction's guarantee n/2 - k
    rep = degree_report(parity_hypergraph(12, 3).hypergraph, 2)
    assert rep.min_degree >= 3


def test_degree_report_matches_naive_scan():
    for seed in range(5):
        h = random_hypergraph(8, 3, 0.5, seed)
        for d in (1, 2):
            rep = degree_report(h, d)
            naive = {sub: sum(1 for e in h.edges if set(sub) <= set(e))
                     for sub in combinations(range(8), d)}
            assert rep.min_degree == min(naive.values())
            assert rep.max_degree == max(naive.values())
            assert naive[rep.witness_min] == rep.min_degree
            assert naive[rep.witness_max] == rep.max_degree


def test_relative_degree_complete():
    h = complete_hypergraph(6, 3)
    assert relative_degree(h, [0, 1], [2, 3]) == 2


def test_relative_degree_empty_target():
    h = complete_hypergraph(6, 3)
    assert relative_degree(h, [0, 1], []) == 0


def test_relative_degree_rejects_overlap_and_full_subset():
    h = complete_hypergraph(6, 3)
    with pytest.raises(InvalidQueryError):
        relative_degree(h, [0, 1], [1, 2])
    with pytest.raises(InvalidQueryError):
        relative_degree(h, [0, 1, 2], [3, 4])


def test_degree_of_equals_relative_degree_on_complement():
    for seed in range(5):
        h = random_hypergraph(9, 3, 0.4, seed)
        for pair in [(0, 1), (2, 5), (7, 8)]:
            rest = [v for v in range(9) if v not in pair]
            assert degree_of(h, pair) == relative_degree(h, pair, rest)


def test_roundtrip(tmp_path):
    h = random_hypergraph(7, 3, 0.6, 11)
    path = str(tmp_path / "h.json")
    write_hypergraph(h, path)
    assert read_hypergraph(path) == h


def test_read_minimal(tmp_path):
    path = tmp_path / "h.json"
    path.write_text('{"n": 4, "k": 3, "edges": [[0, 1, 2]]}')
    h = read_hypergraph(str(path))
    assert h.num_edges() == 1 and h.has_edge([2, 1, 0])


@pytest.mark.parametrize("payload,fragment", [
    ('{"n": 4, "k": 3, "edges": [[0,1,2],[2,1,0]]}', "duplicate"),
    ('{"n": 4, "k": 3, "edges": [[0,1,9]]}', "out of range"),
    ('{"n": 4, "k": 3, "edges": [[0,1]]}', "distinct"),
    ('{"n": 4, "k": 3}', "keys"),
    ('{"n": 4, "k": 3, "edges": [[0,1,2]], "x": 1}', "keys"),
    ('not json', "JSON"),
])
def test_parse_errors(tmp_path, payload, fragment):
    path = tmp_path / "bad.json"
    path.write_text(payload)
    with pytest.raises(ParseError, match=fragment):
        read_hypergraph(str(path))


def test_constructor_rejects_bad_k():
    with pytest.raises(ParseError):
        Hypergraph(3, 4, [])
    with pytest.raises(ParseError):
        Hypergraph(3, 0, [])


def test_edges_stored_sorted():
    h = Hypergraph(5, 3, [[4, 2, 0], [3, 1, 0]])
    assert h.edges == ((0, 1, 3), (0, 2, 4))
