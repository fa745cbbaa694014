"""Computable presentations of the countable random graph, with witnesses.

Two explicit oracles: the base-2 digit construction on the naturals and the
quadratic-residue construction on primes = 1 (mod 4).  Extension queries are
solved least-first within a bound, every witness is re-verified against the
adjacency predicate before being returned, and a miss within the bound is
reported as inconclusive, never as a refutation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .core import FiniteGraph, PartialIsomorphism
from .errors import InvalidVertex, SelfLoop, WitnessNotFound
from .numtheory import is_prime, primes_in_class, quadratic_residue


def rado_adjacent(x, y):
    """Bit-digit rule: with a < b, join iff digit a of b (base 2) is 1."""
    if x == y:
        raise SelfLoop(f"adjacency queried on ({x}, {x})")
    if x < 0 or y < 0:
        raise InvalidVertex("vertices are natural numbers")
    a, b = (x, y) if x < y else (y, x)
    return bool((b >> a) & 1)


def prime_graph_adjacent(p, q):
    """Join p to q iff q is a quadratic residue mod p; symmetric for
    p, q = 1 (mod 4) by quadratic reciprocity."""
    if p == q:
        raise SelfLoop(f"adjacency queried on ({p}, {p})")
    for v in (p, q):
        if v % 4 != 1 or not is_prime(v):
            raise InvalidVertex(f"{v} is not a prime congruent to 1 mod 4")
    return quadratic_residue(q, p)


class GraphOracle:
    """Adjacency predicate plus a vertex enumeration."""

    tag = "abstract"

    def adjacent(self, x, y) -> bool:
        raise NotImplementedError

    def contains(self, v) -> bool:
        raise NotImplementedError

    def vertices(self):
        """Enumerate the universe in its canonical order."""
        raise NotImplementedError


class BitOracle(GraphOracle):
    tag = "bit"

    def adjacent(self, x, y):
        return rado_adjacent(x, y)

    def contains(self, v):
        return isinstance(v, int) and v >= 0

    def vertices(self):
        return itertools.count()


class PrimeOracle(GraphOracle):
    tag = "prime"

    def __init__(self):
        self._known = []
        self._source = primes_in_class(1, 4)

    def adjacent(self, x, y):
        return prime_graph_adjacent(x, y)

    def contains(self, v):
        return isinstance(v, int) and v % 4 == 1 and is_prime(v)

    def vertices(self):
        i = 0
        while True:
            if i == len(self._known):
                self._known.append(next(self._source))
            yield self._known[i]
            i += 1


class FiniteGraphOracle(GraphOracle):
    """A finite graph wrapped behind the oracle interface."""

    def __init__(self, graph: FiniteGraph, tag="finite"):
        self.graph = graph
        self.tag = tag

    def adjacent(self, x, y):
        if x == y:
            raise SelfLoop(f"adjacency queried on ({x}, {x})")
        if not (self.contains(x) and self.contains(y)):
            raise InvalidVertex("vertex outside the finite universe")
        return self.graph.adjacent(x, y)

    def contains(self, v):
        return isinstance(v, int) and 0 <= v < self.graph.n

    def vertices(self):
        return iter(range(self.graph.n))


class DifferenceOracle(GraphOracle):
    """Integers joined when their difference lies in a fixed set."""

    def __init__(self, diffs, horizon, tag="difference"):
        self.diffs = frozenset(diffs)
        self.horizon = horizon
        self.tag = tag

    def adjacent(self, x, y):
        if x == y:
            raise SelfLoop(f"adjacency queried on ({x}, {x})")
        d = abs(x - y)
        if d > self.horizon:
            raise InvalidVertex(f"difference {d} beyond horizon {self.horizon}")
        return d in self.diffs

    def contains(self, v):
        return isinstance(v, int) and v >= 0

    def vertices(self):
        return itertools.count()


@dataclass(frozen=True)
class ExtensionQuery:
    targets: frozenset  # vertices the witness must see
    avoid: frozenset  # vertices the witness must miss
    bound: int

    def __post_init__(self):
        if self.targets & self.avoid:
            raise InvalidVertex("target and avoid sets must be disjoint")


def witness_ok(oracle, z, targets, avoid):
    if z in targets or z in avoid:
        return False
    return all(oracle.adjacent(z, u) for u in targets) and not any(
        oracle.adjacent(z, v) for v in avoid
    )


def extension_witness(oracle: GraphOracle, query: ExtensionQuery):
    """Least vertex <= bound seeing all targets and missing all avoids.

    None means exhausted within the bound, not that no witness exists.  The
    returned witness is re-verified before being handed out.
    """
    for v in query.targets | query.avoid:
        if not oracle.contains(v):
            raise InvalidVertex(f"{v} is outside the oracle universe")
    for z in oracle.vertices():
        if z > query.bound:
            return None
        if witness_ok(oracle, z, query.targets, query.avoid):
            return z
    return None


def back_and_forth(a: GraphOracle, b: GraphOracle, steps, bound):
    """Alternate: map the least unmapped vertex of A forward, then of B
    backward, each time solving an extension query in the other oracle.

    Raises WitnessNotFound (carrying the partial map) when a query exhausts
    the bound; that reflects the bound, not non-isomorphism.
    """
    pairs = []
    fwd = {}
    bwd = {}
    a_enum = a.vertices()
    b_enum = b.vertices()
    for round_no in range(1, steps + 1):
        forward = round_no % 2 == 1
        if forward:
            src, tgt, taken = a, b, fwd
        else:
            src, tgt, taken = b, a, bwd
        enum = a_enum if forward else b_enum
        v = None
        for candidate in enum:
            if candidate not in taken:
                v = candidate
                break
        targets = set()
        avoid = set()
        mapping = fwd if forward else bwd
        back = bwd if forward else fwd
        for x, y in mapping.items():
            if src.adjacent(v, x):
                targets.add(y)
            else:
                avoid.add(y)
        query = ExtensionQuery(frozenset(targets), frozenset(avoid), bound)
        z = None
        for cand in tgt.vertices():
            if cand > bound:
                break
            if cand in back:
                continue
            if witness_ok(tgt, cand, targets, avoid):
                z = cand
                break
        if z is None:
            partial = _partial(fwd)
            raise WitnessNotFound(
                bound,
                partial=partial,
                query=("forward" if forward else "backward", v, targets, avoid),
            )
        mapping[v] = z
        back[z] = v
        if forward:
            pairs.append((v, z))
        else:
            pairs.append((z, v))
    return _partial(fwd)


def _partial(fwd):
    return PartialIsomorphism(tuple(sorted(fwd.items())))


def verify_partial_isomorphism(phi: PartialIsomorphism, a: GraphOracle, b: GraphOracle):
    """Pairwise adjacency certificate for a claimed partial isomorphism."""
    items = phi.pairs
    for (x1, y1), (x2, y2) in itertools.combinations(items, 2):
        if a.adjacent(x1, x2) != b.adjacent(y1, y2):
            return False
    return True


@dataclass(frozen=True)
class CommonNeighbourReport:
    window: tuple
    results: tuple  # ((subset, witness-or-None), ...)
    all_found: bool


def common_neighbour_check(oracle: GraphOracle, sets_up_to, window, bound):
    """Common-neighbour witnesses for every subset of the first `window`
    vertices of size <= sets_up_to, searched least-first up to `bound`.

    Full success is the finite shadow of the spanning-subgraph criterion
    (every finite vertex set has a common neighbour).
    """
    if sets_up_to > 5:
        raise InvalidVertex("subset size capped at 5")
    if window > 16:
        raise InvalidVertex("window capped at 16")
    verts = list(itertools.islice(oracle.vertices(), window))
    results = []
    all_found = True
    for size in range(1, min(sets_up_to, len(verts)) + 1):
        for subset in itertools.combinations(verts, size):
            witness = None
            for z in oracle.vertices():
                if z > bound:
                    break
                if z in subset:
                    continue
                if all(oracle.adjacent(z, u) for u in subset):
                    witness = z
                    break
            if witness is None:
                all_found = False
            results.append((subset, witness))
    return CommonNeighbourReport(tuple(verts), tuple(results), all_found)
