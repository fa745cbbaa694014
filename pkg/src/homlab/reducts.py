"""Switching of finite graphs and the reducts of a finite linear order.

Switching flips adjacency across a vertex cut; switching automorphisms are
recovered by solving the induced cut condition, which pins the switching set
up to complementation.  The order reducts (betweenness, circular order,
separation) realise the reduct lattice of a dense order at finite scale:
reversal, rotation and dihedral actions respectively.
"""

from __future__ import annotations

import itertools

from .core import FiniteGraph, RelationalStructure, Signature
from .errors import InvalidVertex, SizeLimit

SWITCHING_WITNESS_LIMIT = 20

ORDER_SIGNATURE = Signature((("lt", 2),))
BETWEENNESS_SIGNATURE = Signature((("between", 3),))
CIRCULAR_SIGNATURE = Signature((("circ", 3),))
SEPARATION_SIGNATURE = Signature((("sep", 4),))
PURE_SET_SIGNATURE = Signature(())

REDUCT_KINDS = ("order", "betweenness", "circular", "separation", "pure-set")


def switch(g: FiniteGraph, switch_set):
    """Flip adjacency exactly on pairs with one end in the switching set."""
    switch_set = set(switch_set)
    for v in switch_set:
        if not (0 <= v < g.n):
            raise InvalidVertex(f"vertex {v} out of range")
    mask = 0
    for v in switch_set:
        mask |= 1 << v
    rows = []
    for v in range(g.n):
        row = g.rows[v]
        flip = mask if v not in switch_set else (((1 << g.n) - 1) ^ mask)
        row ^= flip & ~(1 << v)
        rows.append(row)
    return FiniteGraph(g.n, tuple(rows))


def switching_automorphism_witness(g: FiniteGraph, perm):
    """A switching set Y with perm(G) = switch(G, Y), or None.

    The flip pattern D = perm(G) xor G must be the cut of Y, so Y is pinned
    up to complementation by vertex 0's flips; of the two complements the
    one not containing vertex 0 is returned.
    """
    if g.n > SWITCHING_WITNESS_LIMIT:
        raise SizeLimit("switching_automorphism_witness", SWITCHING_WITNESS_LIMIT, g.n)
    if sorted(perm) != list(range(g.n)):
        raise InvalidVertex("perm must be a permutation of the vertex set")
    h = g.relabel(perm)
    if g.n == 0:
        return frozenset()
    side = [False] * g.n  # vertex 0's side is fixed to False
    for v in range(1, g.n):
        side[v] = g.adjacent(0, v) != h.adjacent(0, v)
    for u in range(g.n):
        for v in range(u + 1, g.n):
            flipped = g.adjacent(u, v) != h.adjacent(u, v)
            if flipped != (side[u] != side[v]):
                return None
    return frozenset(v for v in range(g.n) if side[v])


def reduct_relation(n, kind):
    """The named reduct of the natural order on 0..n-1 as a structure."""
    if kind not in REDUCT_KINDS:
        raise KeyError(f"unknown reduct kind {kind!r}")
    arity = {"order": 2, "betweenness": 3, "circular": 3, "separation": 4}.get(
        kind, 0
    )
    if arity and n < arity:
        raise InvalidVertex(f"{kind} needs at least {arity} points")
    if kind == "order":
        table = {(x, y) for x in range(n) for y in range(n) if x < y}
        return RelationalStructure.make(ORDER_SIGNATURE, n, {"lt": table})
    if kind == "betweenness":
        table = {
            (x, y, z)
            for x, y, z in itertools.permutations(range(n), 3)
            if x < y < z or z < y < x
        }
        return RelationalStructure.make(BETWEENNESS_SIGNATURE, n, {"between": table})
    if kind == "circular":
        table = {
            (x, y, z)
            for x, y, z in itertools.permutations(range(n), 3)
            if x < y < z or y < z < x or z < x < y
        }
        return RelationalStructure.make(CIRCULAR_SIGNATURE, n, {"circ": table})
    if kind == "separation":
        table = set()
        for w, x, y, z in itertools.permutations(range(n), 4):
            # pairs {w,y} and {x,z} separate each other on the circle closing
            # the line: negative cross-ratio
            if (w - x) * (y - z) * (w - z) * (y - x) < 0:
                table.add((w, x, y, z))
        return RelationalStructure.make(SEPARATION_SIGNATURE, n, {"sep": table})
    return RelationalStructure.make(PURE_SET_SIGNATURE, n, {})


def reduct_group(n, kind):
    """Automorphisms of the reduct, as permutation tuples (brute force)."""
    s = reduct_relation(n, kind)
    return {perm for perm in itertools.permutations(range(n)) if s.relabel(perm) == s}
