import itertools

from homlab.core import FiniteGraph, canonical_code
from homlab.enumeration import all_graphs_up_to, graphs_up_to_iso

# counts of graphs up to isomorphism, cross-checked below against a
# labelled-enumeration + canonical-code oracle for n <= 6
CLASS_COUNTS = {0: 1, 1: 1, 2: 2, 3: 4, 4: 11, 5: 34, 6: 156, 7: 1044, 8: 12346}


def labelled_dedupe_oracle(n):
    pairs = list(itertools.combinations(range(n), 2))
    codes = set()
    for mask in range(1 << len(pairs)):
        edges = [pairs[i] for i in range(len(pairs)) if (mask >> i) & 1]
        codes.add(canonical_code(FiniteGraph.from_edges(n, edges)))
    return len(codes)


def test_counts_up_to_seven():
    for n in range(8):
        assert len(graphs_up_to_iso(n)) == CLASS_COUNTS[n]


def test_matches_labelled_oracle_small():
    for n in range(1, 7):
        assert len(graphs_up_to_iso(n)) == labelled_dedupe_oracle(n)


def test_pairwise_non_isomorphic_on_six():
    codes = {canonical_code(g) for g in graphs_up_to_iso(6)}
    assert len(codes) == CLASS_COUNTS[6]


def test_all_graphs_up_to():
    graphs = all_graphs_up_to(5)
    assert len(graphs) == 1 + 2 + 4 + 11 + 34
    assert all(g.n <= 5 for g in graphs)


def test_every_member_valid():
    for g in graphs_up_to_iso(6):
        assert g.n == 6
        for v in range(6):
            assert not g.adjacent(v, v)
