"""Constructors for the named graphs the experiments keep reaching for."""

from __future__ import annotations

import itertools

from .core import FiniteGraph


def empty_graph(n):
    return FiniteGraph(n, (0,) * n)


def complete_graph(n):
    full = (1 << n) - 1
    return FiniteGraph(n, tuple(full ^ (1 << v) for v in range(n)))


def cycle(n):
    if n < 3:
        raise ValueError("cycles need >= 3 vertices")
    return FiniteGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path(n):
    return FiniteGraph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def disjoint_union(*graphs):
    n = sum(g.n for g in graphs)
    edges = []
    offset = 0
    for g in graphs:
        edges.extend((u + offset, v + offset) for u, v in g.edges())
        offset += g.n
    return FiniteGraph.from_edges(n, edges)


def union_of_cliques(m, k):
    """m disjoint copies of K_k."""
    return disjoint_union(*[complete_graph(k) for _ in range(m)])


def complete_multipartite(*part_sizes):
    n = sum(part_sizes)
    which = []
    for i, size in enumerate(part_sizes):
        which.extend([i] * size)
    edges = [
        (u, v) for u in range(n) for v in range(u + 1, n) if which[u] != which[v]
    ]
    return FiniteGraph.from_edges(n, edges)


def line_graph(g: FiniteGraph):
    base_edges = g.edges()
    n = len(base_edges)
    edges = []
    for i, j in itertools.combinations(range(n), 2):
        if set(base_edges[i]) & set(base_edges[j]):
            edges.append((i, j))
    return FiniteGraph.from_edges(n, edges)


def rook_l_k33():
    """Line graph of K_{3,3}: the 3x3 rook's graph."""
    return line_graph(complete_multipartite(3, 3))


def petersen():
    edges = [(i, (i + 1) % 5) for i in range(5)]
    edges += [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    edges += [(i, 5 + i) for i in range(5)]
    return FiniteGraph.from_edges(10, edges)


def connected_components(g: FiniteGraph):
    seen = [False] * g.n
    comps = []
    for start in range(g.n):
        if seen[start]:
            continue
        comp = []
        stack = [start]
        seen[start] = True
        while stack:
            v = stack.pop()
            comp.append(v)
            row = g.rows[v]
            while row:
                low = row & -row
                w = low.bit_length() - 1
                row ^= low
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def is_complete(g: FiniteGraph):
    return all(g.degree(v) == g.n - 1 for v in range(g.n))


def two_colouring(g: FiniteGraph):
    """A proper 2-colouring as a list, or None if an odd cycle exists."""
    colour = [-1] * g.n
    for start in range(g.n):
        if colour[start] >= 0:
            continue
        colour[start] = 0
        stack = [start]
        while stack:
            v = stack.pop()
            row = g.rows[v]
            while row:
                low = row & -row
                w = low.bit_length() - 1
                row ^= low
                if colour[w] < 0:
                    colour[w] = 1 - colour[v]
                    stack.append(w)
                elif colour[w] == colour[v]:
                    return None
    return colour
