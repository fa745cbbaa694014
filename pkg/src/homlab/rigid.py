"""Tournaments, C-relations from rooted binary trees, and their superposition.

The superposition of a tournament (odd automorphism group) with a C-relation
(2-group) is rigid, and ordering-induced pair colourings exhibit the failure
of the Ramsey property on cyclic triples.  Also: permutation patterns as
2-orders, and lattice multiorders from sliding irrational hyperplanes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cmp_to_key

from .core import (
    RelationalStructure,
    Signature,
    TOURNAMENT_SIGNATURE,
    automorphisms,
)
from .errors import (
    DegenerateDirection,
    DomainMismatch,
    InvalidVertex,
    NotACRelation,
    SizeLimit,
)
from .numtheory import first_primes_in_class, quadratic_residue

SUPERPOSITION_SIGNATURE = Signature((("arc", 2), ("gamma", 3)))
TOURNAMENT_AUT_LIMIT = 10
C_RELATION_AUT_LIMIT = 10
PATTERN_LIMIT = 12
KRONECKER_R_LIMIT = 20


# ---------------------------------------------------------------------------
# tournaments


@dataclass(frozen=True)
class Tournament:
    n: int
    arcs: frozenset  # ordered pairs, exactly one orientation per pair

    def __post_init__(self):
        seen = set()
        for x, y in self.arcs:
            if x == y or not (0 <= x < self.n and 0 <= y < self.n):
                raise InvalidVertex(f"bad arc ({x}, {y})")
            key = (min(x, y), max(x, y))
            if key in seen:
                raise InvalidVertex(f"both orientations present on {key}")
            seen.add(key)
        if len(seen) != self.n * (self.n - 1) // 2:
            raise InvalidVertex("every pair needs exactly one arc")

    def has_arc(self, x, y):
        return (x, y) in self.arcs

    def to_structure(self):
        return RelationalStructure.make(
            TOURNAMENT_SIGNATURE, self.n, {"arc": self.arcs}
        )

    def relabel(self, perm):
        return Tournament(self.n, frozenset((perm[x], perm[y]) for x, y in self.arcs))

    @staticmethod
    def from_bits(n, bits):
        """bits over pairs (i<j) in column order; set bit means arc i->j."""
        arcs = []
        k = 0
        for j in range(1, n):
            for i in range(j):
                arcs.append((i, j) if (bits >> k) & 1 else (j, i))
                k += 1
        return Tournament(n, frozenset(arcs))


def transitive_tournament(n):
    return Tournament(n, frozenset((i, j) for i in range(n) for j in range(i + 1, n)))


def cyclic_tournament_3():
    return Tournament(3, frozenset([(0, 1), (1, 2), (2, 0)]))


def random_tournament(n, seed):
    import random

    rng = random.Random(seed)
    return Tournament.from_bits(n, rng.getrandbits(n * (n - 1) // 2))


def all_tournaments_up_to_iso(n):
    """Canonical representatives of all n-vertex tournaments (n <= 7)."""
    import numpy as np

    from .enumeration import _perm_gather

    if n > 7:
        raise SizeLimit("all_tournaments_up_to_iso", 7, n)
    if n == 0:
        return []
    if n == 1:
        return [Tournament(1, frozenset())]
    perms, pair_i, pair_j = _perm_gather(n)
    npairs = len(pair_i)
    weights = 1 << np.arange(npairs - 1, -1, -1, dtype=np.int64)
    reps = {}
    for bits in range(1 << npairs):
        t = Tournament.from_bits(n, bits)
        mat = np.zeros((n, n), dtype=np.int64)
        for x, y in t.arcs:
            mat[x, y] = 1
        codes = mat[perms[:, pair_i], perms[:, pair_j]] @ weights
        canon = int(codes.min())
        if canon not in reps:
            reps[canon] = Tournament.from_bits(n, canon)
    return [reps[c] for c in sorted(reps)]


def tournament_aut_order(t: Tournament):
    """Exact automorphism-group order; always odd for a tournament."""
    if t.n > TOURNAMENT_AUT_LIMIT:
        raise SizeLimit("tournament_aut_order", TOURNAMENT_AUT_LIMIT, t.n)
    return automorphisms(t.to_structure()).order


def prime_tournament_window(m):
    """Generic-tournament source: first m primes = 3 (mod 4), arc p -> q when
    q is a quadratic residue mod p.  Antisymmetric by quadratic reciprocity.
    """
    ps = first_primes_in_class(m, 3, 4)
    arcs = set()
    for i, p in enumerate(ps):
        for j, q in enumerate(ps):
            if i != j and quadratic_residue(q, p):
                arcs.add((i, j))
    return Tournament(m, frozenset(arcs)), ps


# ---------------------------------------------------------------------------
# rooted binary trees and C-relations

# a tree is either an int (leaf label) or a pair (left, right)


def tree_leaves(tree):
    if isinstance(tree, int):
        return [tree]
    left, right = tree
    return tree_leaves(left) + tree_leaves(right)


def parse_tree(text):
    """Nested parentheses over leaf labels, e.g. ((0,1),2)."""
    text = text.replace(" ", "")
    pos = 0

    def parse():
        nonlocal pos
        if pos < len(text) and text[pos] == "(":
            pos += 1
            left = parse()
            if pos >= len(text) or text[pos] != ",":
                raise ValueError(f"expected ',' at offset {pos}")
            pos += 1
            right = parse()
            if pos >= len(text) or text[pos] != ")":
                raise ValueError(f"expected ')' at offset {pos}")
            pos += 1
            return (left, right)
        start = pos
        while pos < len(text) and text[pos].isdigit():
            pos += 1
        if start == pos:
            raise ValueError(f"expected a leaf label at offset {pos}")
        return int(text[start:pos])

    tree = parse()
    if pos != len(text):
        raise ValueError(f"trailing input at offset {pos}")
    leaves = tree_leaves(tree)
    if sorted(leaves) != list(range(len(leaves))):
        raise InvalidVertex("leaf labels must be a bijection with 0..l-1")
    return tree


def emit_tree(tree):
    if isinstance(tree, int):
        return str(tree)
    return f"({emit_tree(tree[0])},{emit_tree(tree[1])})"


def all_leaf_labelled_trees(n_leaves):
    """Every leaf-labelled rooted binary tree; there are (2l-3)!! of them."""
    if n_leaves < 1:
        return []
    trees = [0]
    for leaf in range(1, n_leaves):
        grown = []
        for t in trees:
            grown.extend(_insert_leaf(t, leaf))
        trees = grown
    return trees


def _insert_leaf(tree, leaf):
    yield (tree, leaf)  # split above the root
    if not isinstance(tree, int):
        left, right = tree
        for sub in _insert_leaf(left, leaf):
            yield (sub, right)
        for sub in _insert_leaf(right, leaf):
            yield (left, sub)


@dataclass(frozen=True)
class CRelation:
    """Ternary leaf relation gamma(x, y; z): x and y branch off below z.

    Stored extensionally as ordered triples (x, y, z) meaning gamma(x,y;z);
    both (x, y, z) and (y, x, z) are present when the relation holds.
    """

    size: int
    triples: frozenset

    def holds(self, x, y, z):
        return (x, y, z) in self.triples

    def to_structure(self):
        return RelationalStructure.make(
            Signature((("gamma", 3),)), self.size, {"gamma": self.triples}
        )

    def check_axioms(self):
        """Symmetry in the first two arguments and exactly one distinguished
        element per 3-subset.  Returns the violating triple set."""
        bad = set()
        for x, y, z in self.triples:
            if len({x, y, z}) != 3:
                bad.add((x, y, z))
            elif (y, x, z) not in self.triples:
                bad.add((x, y, z))
        for a, b, c in itertools.combinations(range(self.size), 3):
            distinguished = [
                z for x, y, z in ((b, c, a), (a, c, b), (a, b, c)) if self.holds(x, y, z)
            ]
            if len(distinguished) != 1:
                bad.update({(b, c, a), (a, c, b), (a, b, c)} & self.triples)
                bad.add((a, b, c))
        return bad


def c_relation_of_tree(tree):
    """gamma(x,y;z) iff the meet of x and y is strictly below the meet with z."""
    leaves = tree_leaves(tree)
    n = len(leaves)
    # per leaf, the internal-node ids (preorder) along its root path
    counter = itertools.count()
    paths = {}

    def walk(node, path):
        if isinstance(node, int):
            paths[node] = tuple(path)
            return
        me = next(counter)
        left, right = node
        walk(left, path + (me,))
        walk(right, path + (me,))

    walk(tree, ())

    def meet_depth(a, b):
        pa, pb = paths[a], paths[b]
        d = 0
        for u, v in zip(pa, pb):
            if u != v:
                break
            d += 1
        return d

    triples = set()
    for x, y, z in itertools.permutations(range(n), 3):
        if x < y and meet_depth(x, y) > meet_depth(x, z):
            triples.add((x, y, z))
            triples.add((y, x, z))
    return CRelation(n, frozenset(triples))


def tree_of_c_relation(gamma: CRelation):
    """Reconstruct a leaf-labelled tree whose C-relation equals gamma.

    Two leaves sit in the same child subtree of the root iff some third leaf
    witnesses gamma for them; recursion on the two blocks.  Inconsistent
    input raises NotACRelation carrying the violating triples.
    """
    bad = gamma.check_axioms()
    if bad:
        raise NotACRelation("axioms violated", sorted(bad))

    def build(block):
        if len(block) == 1:
            return block[0]
        if len(block) == 2:
            return (block[0], block[1])
        inside = set(block)
        same = {v: {v} for v in block}
        for x, y in itertools.combinations(block, 2):
            if any((x, y, z) in gamma.triples for z in block if z in inside):
                union = same[x] | same[y]
                for v in union:
                    same[v] = union
        blocks = {frozenset(s) for s in same.values()}
        if len(blocks) != 2:
            raise NotACRelation(
                f"root split of {sorted(block)} has {len(blocks)} blocks",
                sorted(gamma.triples),
            )
        b1, b2 = sorted(blocks, key=min)
        # every same-block pair must be witnessed by every outside leaf
        violations = []
        for side, other in ((b1, b2), (b2, b1)):
            for x, y in itertools.combinations(sorted(side), 2):
                for z in sorted(other):
                    if (x, y, z) not in gamma.triples:
                        violations.append((x, y, z))
        if violations:
            raise NotACRelation("split not coherent", violations)
        return (build(sorted(b1)), build(sorted(b2)))

    if gamma.size < 1:
        raise NotACRelation("need at least one leaf")
    tree = build(list(range(gamma.size)))
    if c_relation_of_tree(tree).triples != gamma.triples:
        raise NotACRelation("reconstruction mismatch", sorted(gamma.triples))
    return tree


def _shape(tree):
    if isinstance(tree, int):
        return "L"
    a, b = _shape(tree[0]), _shape(tree[1])
    lo, hi = sorted((a, b))
    return f"({lo}{hi})"


def c_aut_order(gamma: CRelation):
    """Exact order of Aut(gamma): one factor of 2 per internal node whose
    child subtrees have the same shape.  Always a power of 2."""
    if gamma.size > C_RELATION_AUT_LIMIT:
        raise SizeLimit("c_aut_order", C_RELATION_AUT_LIMIT, gamma.size)
    if gamma.size == 1:
        return 1
    tree = tree_of_c_relation(gamma)

    def order(node):
        if isinstance(node, int):
            return 1
        left, right = node
        factor = 2 if _shape(left) == _shape(right) else 1
        return factor * order(left) * order(right)

    return order(tree)


# ---------------------------------------------------------------------------
# superposition and the Ramsey failure


def superpose(t: Tournament, gamma: CRelation):
    """Overlay tournament and C-relation on one domain (union signature)."""
    if t.n != gamma.size:
        raise DomainMismatch(f"tournament on {t.n} points, gamma on {gamma.size}")
    return RelationalStructure.make(
        SUPERPOSITION_SIGNATURE, t.n, {"arc": t.arcs, "gamma": gamma.triples}
    )


def superposition_aut_order(s: RelationalStructure):
    return automorphisms(s).order


def cyclic_triples(arcs, domain_size):
    """3-subsets whose induced tournament is a 3-cycle.

    Cyclic iff every vertex wins exactly one of the three games.
    """
    arcset = set(arcs)
    out = []
    for a, b, c in itertools.combinations(range(domain_size), 3):
        outdeg = {v: 0 for v in (a, b, c)}
        for x, y in itertools.permutations((a, b, c), 2):
            if (x, y) in arcset:
                outdeg[x] += 1
        if sorted(outdeg.values()) == [1, 1, 1]:
            out.append((a, b, c))
    return out


@dataclass(frozen=True)
class RamseyFailureReport:
    colouring: tuple  # ((arc, colour), ...) sorted
    cyclic: tuple  # ((triple, colours-present), ...)
    all_cyclic_bichromatic: bool


def ramsey_failure_colouring(s, order):
    """Colour each arc red when the total order agrees with it, blue otherwise.

    Works on a Tournament or any structure with an "arc" relation.  `order`
    lists the domain from least to greatest.  Every 3-subset inducing a
    cyclic tournament is reported with the colours its arcs realise.
    """
    if isinstance(s, Tournament):
        arcs, n = sorted(s.arcs), s.n
    else:
        arcs, n = sorted(s.table("arc")), s.n
    if sorted(order) != list(range(n)):
        raise InvalidVertex("order must list the whole domain")
    rank = {v: i for i, v in enumerate(order)}
    colouring = tuple(
        ((x, y), "red" if rank[x] < rank[y] else "blue") for x, y in arcs
    )
    colour_of = dict(colouring)
    cyclic = []
    ok = True
    for a, b, c in cyclic_triples(arcs, n):
        pair_arcs = [
            arc
            for arc in itertools.permutations((a, b, c), 2)
            if arc in colour_of
        ]
        colours = tuple(sorted({colour_of[arc] for arc in pair_arcs}))
        cyclic.append(((a, b, c), colours))
        if len(colours) != 2:
            ok = False
    return RamseyFailureReport(colouring, tuple(cyclic), ok)


# ---------------------------------------------------------------------------
# permutation patterns and multiorders


def pattern_contains(p, q):
    """Does q contain p as an order-isomorphic subsequence?

    Returns (True, positions) with the lexicographically least 0-based
    witness positions, or (False, None).
    """
    p, q = list(p), list(q)
    if len(set(p)) != len(p) or len(set(q)) != len(q):
        raise InvalidVertex("patterns must have distinct entries")
    if len(q) > PATTERN_LIMIT:
        raise SizeLimit("pattern_contains", PATTERN_LIMIT, len(q))
    if len(p) > len(q):
        return False, None
    for positions in itertools.combinations(range(len(q)), len(p)):
        vals = [q[i] for i in positions]
        if all(
            (p[i] < p[j]) == (vals[i] < vals[j])
            for i in range(len(p))
            for j in range(i + 1, len(p))
        ):
            return True, positions
    return False, None


@dataclass(frozen=True)
class MultiOrder:
    """n points carrying m strict total orders, each stored as a rank vector."""

    n: int
    ranks: tuple  # of tuples; ranks[i][v] = position of v in order i

    def __post_init__(self):
        for r in self.ranks:
            if sorted(r) != list(range(self.n)):
                raise InvalidVertex("each order must be a bijective ranking")

    def to_structure(self):
        sig = Signature(tuple((f"lt{i + 1}", 2) for i in range(len(self.ranks))))
        tables = {}
        for i, r in enumerate(self.ranks):
            tables[f"lt{i + 1}"] = {
                (x, y) for x in range(self.n) for y in range(self.n) if r[x] < r[y]
            }
        return RelationalStructure.make(sig, self.n, tables)


def two_order_to_permutation(mo: MultiOrder):
    """Label points by the first order; read them off in the second order."""
    if len(mo.ranks) != 2:
        raise InvalidVertex("needs exactly two orders")
    first, second = mo.ranks
    by_second = sorted(range(mo.n), key=lambda v: second[v])
    return tuple(first[v] + 1 for v in by_second)


def permutation_to_two_order(perm):
    """Inverse of two_order_to_permutation for a permutation of 1..n."""
    n = len(perm)
    if sorted(perm) != list(range(1, n + 1)):
        raise InvalidVertex("expected a permutation of 1..n")
    first = tuple(perm[i] - 1 for i in range(n))
    second = tuple(range(n))
    return MultiOrder(n, (first, second))


# exact sign arithmetic for sums of integer multiples of square roots


def _squarefree(d):
    if d < 1:
        return False
    f = 2
    while f * f <= d:
        if d % (f * f) == 0:
            return False
        f += 1
    return True


def _surd_sign(terms):
    """Sign of sum(b * sqrt(d)) for distinct squarefree d; exact, len <= 3."""
    terms = [(b, d) for b, d in terms if b != 0]
    if not terms:
        return 0
    if len(terms) == 1:
        return 1 if terms[0][0] > 0 else -1
    if len(terms) == 2:
        (b1, d1), (b2, d2) = terms
        if b1 > 0 and b2 > 0:
            return 1
        if b1 < 0 and b2 < 0:
            return -1
        lhs = b1 * b1 * d1  # squares of the two magnitudes
        rhs = b2 * b2 * d2
        if lhs == rhs:
            return 0
        winner = b1 if lhs > rhs else b2
        return 1 if winner > 0 else -1
    if len(terms) == 3:
        # isolate the largest-magnitude term and square once
        terms = sorted(terms, key=lambda t: t[0] * t[0] * t[1], reverse=True)
        (b1, d1), (b2, d2), (b3, d3) = terms
        # sign(b1 sqrt(d1) + b2 sqrt(d2) + b3 sqrt(d3)): compare
        # (b2 sqrt(d2) + b3 sqrt(d3)) against -b1 sqrt(d1) via one squaring
        s23 = _surd_sign([(b2, d2), (b3, d3)])
        s1 = 1 if b1 > 0 else -1
        if s23 == 0 or s23 == s1:
            return s1
        # opposite signs: compare squares (both sides nonnegative)
        # (b2 sqrt d2 + b3 sqrt d3)^2 = b2^2 d2 + b3^2 d3 + 2 b2 b3 sqrt(d2 d3)
        lhs_rat = b2 * b2 * d2 + b3 * b3 * d3
        rhs_rat = b1 * b1 * d1
        cross = 2 * b2 * b3
        inner = _surd_sign([(lhs_rat - rhs_rat, 1), (cross, d2 * d3)])
        if inner == 0:
            return 0
        return s1 if inner < 0 else -s1
    raise SizeLimit("surd comparison terms", 3, len(terms))


def _normalise_surds(pairs):
    """Combine b*sqrt(d) terms with equal squarefree part."""
    acc = {}
    for b, d in pairs:
        acc[d] = acc.get(d, 0) + b
    return [(b, d) for d, b in sorted(acc.items()) if b != 0]


def kronecker_multiorder(directions, window_radius):
    """Orders on the integer window [-R, R]^n by exact irrational dot keys.

    Each direction is a list of (coefficient, radicand) pairs, component j
    worth coefficient * sqrt(radicand); radicands must be distinct and
    squarefree within a direction, which makes the coordinates rationally
    independent outright (no heuristic needed) and rules out ties.
    """
    if window_radius > KRONECKER_R_LIMIT:
        raise SizeLimit("kronecker window radius", KRONECKER_R_LIMIT, window_radius)
    m = len(directions)
    n = None
    for direction in directions:
        if n is None:
            n = len(direction)
        elif len(direction) != n:
            raise DegenerateDirection("directions must share a dimension")
        seen = set()
        for b, d in direction:
            if b == 0:
                raise DegenerateDirection("zero coefficient breaks independence")
            if not _squarefree(d):
                raise DegenerateDirection(f"radicand {d} is not squarefree")
            if d in seen:
                raise DegenerateDirection("repeated radicand breaks independence")
            seen.add(d)
    if n is None or not (m < n):
        raise DegenerateDirection("need m < n directions")

    r = window_radius
    points = list(itertools.product(range(-r, r + 1), repeat=n))

    def compare(p, q, direction):
        terms = _normalise_surds(
            (b * (p[j] - q[j]), d) for j, (b, d) in enumerate(direction)
        )
        sign = _surd_sign(terms)
        if sign == 0 and p != q:
            raise DegenerateDirection(f"tied keys for {p} and {q}")
        return sign

    ranks = []
    for direction in directions:
        ordered = sorted(
            range(len(points)),
            key=cmp_to_key(lambda a, b: compare(points[a], points[b], direction)),
        )
        rank = [0] * len(points)
        for pos, idx in enumerate(ordered):
            rank[idx] = pos
        ranks.append(tuple(rank))
    return points, MultiOrder(len(points), tuple(ranks))


def compare_along_direction(p, q, direction):
    """Exact -1/0/+1 comparison of two integer points under one direction."""
    terms = _normalise_surds(
        (b * (p[j] - q[j]), d) for j, (b, d) in enumerate(direction)
    )
    return _surd_sign(terms)
