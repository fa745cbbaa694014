import random

import networkx as nx
import pytest

from homlab.core import FiniteGraph, are_isomorphic
from homlab.families import cycle, petersen, rook_l_k33
from homlab.graphio import (
    ParseError,
    emit_edge_list,
    emit_graph6,
    emit_structure_json,
    parse_edge_list,
    parse_graph6,
    parse_structure_json,
)


def random_graph(seed, n):
    rng = random.Random(seed)
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.4]
    return FiniteGraph.from_edges(n, edges)


@pytest.mark.parametrize("seed", range(20))
def test_graph6_round_trip(seed):
    g = random_graph(seed, seed % 9 + 2)
    assert parse_graph6(emit_graph6(g)) == g


@pytest.mark.parametrize("g", [cycle(5), petersen(), rook_l_k33()])
def test_graph6_matches_networkx(g):
    s = emit_graph6(g)
    h = nx.from_graph6_bytes(s.encode())
    assert sorted(map(tuple, map(sorted, h.edges()))) == g.edges()
    back = nx.to_graph6_bytes(h, header=False).decode().strip()
    assert parse_graph6(back) == g


def test_graph6_header_accepted():
    g = cycle(5)
    assert parse_graph6(">>graph6<<" + emit_graph6(g)) == g


def test_graph6_rejects_garbage():
    with pytest.raises(ParseError):
        parse_graph6("")
    with pytest.raises(ParseError):
        parse_graph6("D")  # truncated body


@pytest.mark.parametrize("seed", range(10))
def test_edge_list_round_trip(seed):
    g = random_graph(100 + seed, 7)
    assert parse_edge_list(emit_edge_list(g)) == g


def test_edge_list_errors_carry_line_numbers():
    with pytest.raises(ParseError) as err:
        parse_edge_list("3 2\n0 1\n0 9\n")
    assert err.value.line == 3
    with pytest.raises(ParseError):
        parse_edge_list("3 5\n0 1\n")


def test_structure_json_round_trip():
    g = cycle(5).to_structure()
    assert parse_structure_json(emit_structure_json(g)) == g


def test_structure_json_reports_position():
    with pytest.raises(ParseError) as err:
        parse_structure_json('{"n": 3,')
    assert err.value.line is not None


def test_round_trip_preserves_isomorphism_class():
    g = petersen()
    h = parse_graph6(emit_graph6(g))
    assert are_isomorphic(g, h) is not None
