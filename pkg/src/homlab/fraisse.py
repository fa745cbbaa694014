"""Executable amalgamation-class machinery.

A ClassSpec bundles a membership predicate with labelled enumeration and,
where a uniform construction exists, joint-embedding and amalgamation
constructors.  The checkers scan every instance up to the stated size in a
fixed order, so failures are reported with the least witness; constructive
solutions are always re-verified, and failures are certified by an
exhaustive search over quotient hosts (hereditarity makes hosts larger than
|B1|+|B2|-|A| redundant, so that exhaustion is complete up to the bound).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .core import (
    GRAPH_SIGNATURE,
    RelationalStructure,
    Signature,
    TOURNAMENT_SIGNATURE,
    canonical_code,
    canonical_code_fixing_prefix,
    induced_substructure,
)
from .errors import InvalidEmbedding, SizeLimit

HEREDITARY_LIMIT = 6
JEP_LIMIT = 5
AP_LIMIT = 5


# ---------------------------------------------------------------------------
# structure helpers


def graph_structure(n, edges):
    pairs = set()
    for u, v in edges:
        pairs.add((u, v))
        pairs.add((v, u))
    return RelationalStructure.make(GRAPH_SIGNATURE, n, {"adj": pairs})


def structure_edges(s):
    return {(u, v) for u, v in s.table("adj") if u < v}


def is_embedding(small, big, mapping):
    """Is mapping an induced embedding small -> big?"""
    if small.signature != big.signature:
        return False
    if len(set(mapping)) != len(mapping) or len(mapping) != small.n:
        return False
    image = list(mapping)
    for (name, table), (_, arity) in zip(small.tables, small.signature.relations):
        big_table = big.table(name)
        for t in itertools.product(range(small.n), repeat=arity):
            if ((t in table)) != (tuple(image[x] for x in t) in big_table):
                return False
    return True


def find_embedding(small, big, fixed=()):
    """First induced embedding small -> big extending `fixed`, or None.

    Deterministic: source vertices in index order, targets ascending.
    """
    if small.signature != big.signature:
        return None
    incident = [[] for _ in range(small.n)]
    for ri, (name, table) in enumerate(small.tables):
        for t in table:
            for v in set(t):
                incident[v].append((ri, t))
    big_tables = [table for _, table in big.tables]
    small_tables = [table for _, table in small.tables]
    arities = [arity for _, arity in small.signature.relations]

    mapping = [-1] * small.n
    used = set()
    for a, b in fixed:
        mapping[a] = b
        used.add(b)

    def consistent(v):
        # forward: fully-mapped small tuples through v land in big
        for ri, t in incident[v]:
            img = []
            for x in t:
                if mapping[x] < 0:
                    break
                img.append(mapping[x])
            else:
                if tuple(img) not in big_tables[ri]:
                    return False
        # induced: big tuples inside the current image pull back
        img_set = {m for m in mapping if m >= 0}
        inv = {m: i for i, m in enumerate(mapping) if m >= 0}
        for ri, arity in enumerate(arities):
            for t in big_tables[ri]:
                if all(x in img_set for x in t):
                    if tuple(inv[x] for x in t) not in small_tables[ri]:
                        return False
        return True

    for a, _ in fixed:
        if not consistent(a):
            return None

    order = [v for v in range(small.n) if mapping[v] < 0]

    def extend(i):
        if i == len(order):
            return True
        v = order[i]
        for w in range(big.n):
            if w in used:
                continue
            mapping[v] = w
            used.add(w)
            if consistent(v) and extend(i + 1):
                return True
            mapping[v] = -1
            used.discard(w)
        return False

    if extend(0):
        return tuple(mapping)
    return None


def find_all_embeddings(small, big):
    """Yield every induced embedding small -> big (brute force, tiny sizes)."""
    for image in itertools.permutations(range(big.n), small.n):
        if is_embedding(small, big, image):
            yield image


# ---------------------------------------------------------------------------
# class specifications


class ClassSpec:
    """A hereditary class given by membership plus labelled enumeration.

    Subclasses may provide constructive join/amalgamate strategies; anything
    they return is re-verified by the checkers, and a missing or failing
    strategy falls back to exhaustive search.
    """

    name = "abstract"
    signature = GRAPH_SIGNATURE

    def __init__(self):
        self._catalog_cache = {}
        self._extension_cache = {}

    def membership(self, s) -> bool:
        raise NotImplementedError

    def all_labelled(self, n):
        raise NotImplementedError

    def join(self, a, b):
        return None

    def amalgamate(self, base, b1, b2, strong):
        """Constructive amalgam in standard layout (B2-new appended), or None."""
        return None

    # --- derived machinery ---

    def catalog(self, n):
        """Members on exactly n points, one canonical representative each."""
        if n not in self._catalog_cache:
            reps = {}
            for s in self.all_labelled(n):
                code = canonical_code(s)
                if code not in reps:
                    reps[code] = s
            self._catalog_cache[n] = [reps[c] for c in sorted(reps)]
        return self._catalog_cache[n]

    def extensions(self, base, b):
        """Members on b points whose first base.n points equal base, up to
        isomorphism fixing the base pointwise."""
        key = (base, b)
        if key not in self._extension_cache:
            reps = {}
            for s in self.all_labelled(b):
                if induced_substructure(s, range(base.n)) != base:
                    continue
                code = canonical_code_fixing_prefix(s, base.n)
                if code not in reps:
                    reps[code] = s
            self._extension_cache[key] = [reps[c] for c in sorted(reps)]
        return self._extension_cache[key]


class GraphClass(ClassSpec):
    name = "all-graphs"

    def _graph_ok(self, s):
        table = s.table("adj")
        for x, y in table:
            if x == y or (y, x) not in table:
                return False
        return True

    def membership(self, s):
        return self._graph_ok(s)

    def all_labelled(self, n):
        pairs = list(itertools.combinations(range(n), 2))
        for mask in range(1 << len(pairs)):
            edges = [pairs[i] for i in range(len(pairs)) if (mask >> i) & 1]
            s = graph_structure(n, edges)
            if self.membership(s):
                yield s

    def join(self, a, b):
        edges = list(structure_edges(a))
        edges += [(u + a.n, v + a.n) for u, v in structure_edges(b)]
        return graph_structure(a.n + b.n, edges)

    def amalgamate(self, base, b1, b2, strong):
        return standard_solution(base.n, b1, b2, free_amalgam_structures(base.n, b1, b2))


class KFreeGraphClass(GraphClass):
    def __init__(self, k):
        super().__init__()
        self.k = k
        self.name = f"k{k}free"

    def membership(self, s):
        if not self._graph_ok(s):
            return False
        edges = structure_edges(s)
        for verts in itertools.combinations(range(s.n), self.k):
            if all(
                (x, y) in edges or (y, x) in edges
                for x, y in itertools.combinations(verts, 2)
            ):
                return False
        return True


class BipartiteGraphClass(GraphClass):
    name = "bipartite-graphs"

    def membership(self, s):
        if not self._graph_ok(s):
            return False
        from .core import FiniteGraph
        from .families import two_colouring

        return two_colouring(FiniteGraph.from_structure(s)) is not None

    def amalgamate(self, base, b1, b2, strong):
        c = free_amalgam_structures(base.n, b1, b2)
        if not self.membership(c):
            return None
        return standard_solution(base.n, b1, b2, c)


class MatchingClass(GraphClass):
    name = "matchings"

    def membership(self, s):
        if not self._graph_ok(s):
            return False
        deg = [0] * s.n
        for u, v in structure_edges(s):
            deg[u] += 1
            deg[v] += 1
        return all(d <= 1 for d in deg)

    def amalgamate(self, base, b1, b2, strong):
        if strong:
            c = free_amalgam_structures(base.n, b1, b2)
            if not self.membership(c):
                return None
            return standard_solution(base.n, b1, b2, c)
        # identify the B1/B2 partners of any base vertex matched in both
        e1 = structure_edges(b1)
        e2 = structure_edges(b2)

        def partner(edges, v):
            for x, y in edges:
                if x == v:
                    return y
                if y == v:
                    return x
            return None

        ident = {}
        for v in range(base.n):
            p1 = partner(e1, v)
            p2 = partner(e2, v)
            if p1 is not None and p1 >= base.n and p2 is not None and p2 >= base.n:
                ident[p2] = p1
        fresh = {}
        nxt = b1.n
        for x in range(base.n, b2.n):
            if x not in ident:
                fresh[x] = nxt
                nxt += 1

        def g2(x):
            if x < base.n:
                return x
            return ident.get(x, fresh.get(x))

        edges = set(e1)
        edges |= {tuple(sorted((g2(u), g2(v)))) for u, v in e2}
        c = graph_structure(nxt, edges)
        if not self.membership(c):
            return None
        return c, tuple(range(b1.n)), tuple(g2(v) for v in range(b2.n))


class TournamentClass(ClassSpec):
    name = "tournaments"
    signature = TOURNAMENT_SIGNATURE

    def membership(self, s):
        arcs = s.table("arc")
        for x in range(s.n):
            if (x, x) in arcs:
                return False
            for y in range(x + 1, s.n):
                if ((x, y) in arcs) == ((y, x) in arcs):
                    return False
        return True

    def all_labelled(self, n):
        pairs = list(itertools.combinations(range(n), 2))
        for mask in range(1 << len(pairs)):
            arcs = [
                pairs[i] if (mask >> i) & 1 else pairs[i][::-1]
                for i in range(len(pairs))
            ]
            yield RelationalStructure.make(self.signature, n, {"arc": arcs})

    def join(self, a, b):
        arcs = set(a.table("arc"))
        arcs |= {(u + a.n, v + a.n) for u, v in b.table("arc")}
        arcs |= {(u, v) for u in range(a.n) for v in range(a.n, a.n + b.n)}
        return RelationalStructure.make(self.signature, a.n + b.n, {"arc": arcs})

    def amalgamate(self, base, b1, b2, strong):
        shift = {v: (v if v < base.n else v + b1.n - base.n) for v in range(b2.n)}
        arcs = set(b1.table("arc"))
        arcs |= {(shift[u], shift[v]) for u, v in b2.table("arc")}
        # orient the undetermined cross pairs from the B1 side to the B2 side
        arcs |= {
            (u, v)
            for u in range(base.n, b1.n)
            for v in range(b1.n, b1.n + b2.n - base.n)
        }
        n = b1.n + b2.n - base.n
        c = RelationalStructure.make(self.signature, n, {"arc": arcs})
        return standard_solution(base.n, b1, b2, c)


class LinearOrderClass(ClassSpec):
    name = "linear-orders"
    signature = Signature((("lt", 2),))

    def membership(self, s):
        lt = s.table("lt")
        for x in range(s.n):
            if (x, x) in lt:
                return False
            for y in range(s.n):
                if x != y and ((x, y) in lt) == ((y, x) in lt):
                    return False
        for x, y in lt:
            for z in range(s.n):
                if (y, z) in lt and (x, z) not in lt:
                    return False
        return True

    @staticmethod
    def from_ranks(ranks):
        n = len(ranks)
        lt = {(x, y) for x in range(n) for y in range(n) if ranks[x] < ranks[y]}
        return RelationalStructure.make(Signature((("lt", 2),)), n, {"lt": lt})

    def all_labelled(self, n):
        for perm in itertools.permutations(range(n)):
            yield self.from_ranks(perm)

    def join(self, a, b):
        ranks = list(self._ranks(a)) + [r + a.n for r in self._ranks(b)]
        return self.from_ranks(ranks)

    @staticmethod
    def _ranks(s):
        lt = s.table("lt")
        return [sum(1 for y in range(s.n) if (y, x) in lt) for x in range(s.n)]

    def amalgamate(self, base, b1, b2, strong):
        c = merge_linear_orders(base.n, self._ranks(b1), self._ranks(b2), self)
        return standard_solution(base.n, b1, b2, c)


def merge_linear_orders(a, ranks1, ranks2, cls):
    """Shuffle B2's new points into B1's order, consistently over the base.

    New points land in the base-gap their B2 position dictates; within one
    gap, B1's new points come first.  Works per order for m-orders too.
    """
    n1, n2 = len(ranks1), len(ranks2)
    seq1 = sorted(range(n1), key=lambda v: ranks1[v])
    seq2 = sorted(range(n2), key=lambda v: ranks2[v])
    # gap index for each B2-new point: number of base points before it in B2
    out = []
    gap_of = {}
    seen_base = 0
    for v in seq2:
        if v < a:
            seen_base += 1
        else:
            gap_of[v] = seen_base
    seen_base = 0
    for v in seq1:
        if v < a:
            # pour in B2-new points that belong to this gap, before the base
            # point... they belong AFTER previous base point, before this one
            pass
    # build merged sequence walking B1's order and flushing gap buckets
    buckets = {}
    for v, gap in gap_of.items():
        buckets.setdefault(gap, []).append(v)
    for gap in buckets:
        buckets[gap].sort(key=lambda v: ranks2[v])
    merged = []
    seen_base = 0
    pending = [v for v in buckets.get(0, [])]
    for v in seq1:
        if v < a:
            merged.extend(pending)
            pending = []
            merged.append(("b1", v))
            seen_base += 1
            pending = list(buckets.get(seen_base, []))
        else:
            merged.append(("b1", v))
    merged.extend(pending)
    # merged holds ("b1", v) entries and raw b2-new labels
    final = []
    for item in merged:
        if isinstance(item, tuple):
            final.append(item[1])
        else:
            final.append(n1 + item - a)
    ranks = [0] * (n1 + n2 - a)
    for pos, v in enumerate(final):
        ranks[v] = pos
    return cls.from_ranks(ranks)


class MOrderClass(ClassSpec):
    def __init__(self, m):
        super().__init__()
        self.m = m
        self.name = f"{m}-orders"
        self.signature = Signature(tuple((f"lt{i + 1}", 2) for i in range(m)))
        self._lo = LinearOrderClass()

    def membership(self, s):
        for i in range(self.m):
            single = RelationalStructure.make(
                self._lo.signature, s.n, {"lt": s.table(f"lt{i + 1}")}
            )
            if not self._lo.membership(single):
                return False
        return True

    def from_rank_lists(self, rank_lists):
        n = len(rank_lists[0])
        tables = {}
        for i, ranks in enumerate(rank_lists):
            tables[f"lt{i + 1}"] = {
                (x, y) for x in range(n) for y in range(n) if ranks[x] < ranks[y]
            }
        return RelationalStructure.make(self.signature, n, tables)

    def all_labelled(self, n):
        perms = list(itertools.permutations(range(n)))
        for combo in itertools.product(perms, repeat=self.m):
            yield self.from_rank_lists(list(combo))

    def _rank_lists(self, s):
        out = []
        for i in range(self.m):
            lt = s.table(f"lt{i + 1}")
            out.append(
                [sum(1 for y in range(s.n) if (y, x) in lt) for x in range(s.n)]
            )
        return out

    def join(self, a, b):
        ra, rb = self._rank_lists(a), self._rank_lists(b)
        return self.from_rank_lists(
            [list(r1) + [r + a.n for r in r2] for r1, r2 in zip(ra, rb)]
        )

    def amalgamate(self, base, b1, b2, strong):
        merged = []
        for r1, r2 in zip(self._rank_lists(b1), self._rank_lists(b2)):
            single = merge_linear_orders(base.n, r1, r2, self._lo)
            merged.append(self._lo._ranks(single))
        return standard_solution(base.n, b1, b2, self.from_rank_lists(merged))


class CRelationClass(ClassSpec):
    name = "c-relations"
    signature = Signature((("gamma", 3),))

    def membership(self, s):
        from .errors import NotACRelation
        from .rigid import CRelation, tree_of_c_relation

        gamma = CRelation(s.n, frozenset(s.table("gamma")))
        if s.n <= 2:
            return not s.table("gamma")
        try:
            tree_of_c_relation(gamma)
            return True
        except NotACRelation:
            return False

    def all_labelled(self, n):
        from .rigid import all_leaf_labelled_trees, c_relation_of_tree

        if n == 0:
            return
        seen = set()
        for tree in all_leaf_labelled_trees(n):
            gamma = c_relation_of_tree(tree)
            if gamma.triples not in seen:
                seen.add(gamma.triples)
                yield RelationalStructure.make(
                    self.signature, n, {"gamma": gamma.triples}
                )

    def join(self, a, b):
        from .rigid import CRelation, c_relation_of_tree, tree_of_c_relation

        def tree_of(s):
            return tree_of_c_relation(CRelation(s.n, frozenset(s.table("gamma"))))

        joined = (tree_of(a), _shift_tree(tree_of(b), a.n))
        gamma = c_relation_of_tree(joined)
        return RelationalStructure.make(
            self.signature, a.n + b.n, {"gamma": gamma.triples}
        )


def _shift_tree(tree, offset):
    if isinstance(tree, int):
        return tree + offset
    return (_shift_tree(tree[0], offset), _shift_tree(tree[1], offset))


class SuperpositionClass(ClassSpec):
    """Independent overlay of two classes over the disjoint union signature."""

    def __init__(self, first, second):
        super().__init__()
        self.first = first
        self.second = second
        self.name = f"{first.name}*{second.name}"
        names = {n for n, _ in first.signature.relations} & {
            n for n, _ in second.signature.relations
        }
        if names:
            raise InvalidEmbedding(f"overlapping relation names: {names}")
        self.signature = Signature(
            first.signature.relations + second.signature.relations
        )

    def _parts(self, s):
        t1 = {
            name: s.table(name) for name, _ in self.first.signature.relations
        }
        t2 = {
            name: s.table(name) for name, _ in self.second.signature.relations
        }
        return (
            RelationalStructure.make(self.first.signature, s.n, t1),
            RelationalStructure.make(self.second.signature, s.n, t2),
        )

    def _combine(self, s1, s2):
        tables = {name: table for name, table in s1.tables}
        tables.update({name: table for name, table in s2.tables})
        return RelationalStructure.make(self.signature, s1.n, tables)

    def membership(self, s):
        s1, s2 = self._parts(s)
        return self.first.membership(s1) and self.second.membership(s2)

    def all_labelled(self, n):
        for s1 in self.first.all_labelled(n):
            for s2 in self.second.all_labelled(n):
                yield self._combine(s1, s2)

    def join(self, a, b):
        a1, a2 = self._parts(a)
        b1, b2 = self._parts(b)
        j1 = self.first.join(a1, b1)
        j2 = self.second.join(a2, b2)
        if j1 is None or j2 is None:
            return None
        return self._combine(j1, j2)

    def amalgamate(self, base, b1, b2, strong):
        base1, base2 = self._parts(base)
        x1, x2 = self._parts(b1)
        y1, y2 = self._parts(b2)
        s1 = self.first.amalgamate(base1, x1, y1, True)
        s2 = self.second.amalgamate(base2, x2, y2, True)
        if s1 is None or s2 is None:
            return None
        (c1, g1a, g2a), (c2, g1b, g2b) = s1, s2
        if (g1a, g2a) != (g1b, g2b):
            return None  # components must agree on the gluing layout
        return self._combine(c1, c2), g1a, g2a


class PredicateClass(GraphClass):
    """Ad-hoc graph class from a predicate; mainly a negative-test fixture."""

    def __init__(self, name, predicate):
        super().__init__()
        self.name = name
        self._predicate = predicate

    def membership(self, s):
        return self._graph_ok(s) and self._predicate(s)


def class_by_name(name, **params):
    name = name.lower()
    if name in ("all-graphs", "graphs"):
        return GraphClass()
    if name.startswith("k") and name.endswith("free"):
        return KFreeGraphClass(int(name[1:-4]))
    if name in ("tournaments",):
        return TournamentClass()
    if name in ("bipartite", "bipartite-graphs"):
        return BipartiteGraphClass()
    if name in ("matchings",):
        return MatchingClass()
    if name in ("linear-orders", "orders"):
        return LinearOrderClass()
    if name.endswith("-orders") and name[0].isdigit():
        return MOrderClass(int(name.split("-")[0]))
    if name in ("c-relations", "crelations"):
        return CRelationClass()
    raise KeyError(f"unknown class kind {name!r}")


# ---------------------------------------------------------------------------
# free amalgams


def free_amalgam_structures(a, b1, b2):
    """Free amalgam in standard layout: B1 then B2's new points, no new
    relations across the two sides."""
    shift = {v: (v if v < a else v + b1.n - a) for v in range(b2.n)}
    n = b1.n + b2.n - a
    tables = {}
    for name, table in b1.tables:
        merged = set(table)
        merged |= {tuple(shift[x] for x in t) for t in b2.table(name)}
        tables[name] = merged
    return RelationalStructure.make(b1.signature, n, tables)


def free_amalgam(base, b1, b2, f1, f2):
    """Public free amalgam over explicit embeddings (graph signatures).

    Relabels so that f1, f2 become prefix inclusions, then glues with no
    cross edges.  Raises InvalidEmbedding unless f1, f2 are induced
    embeddings of `base`.
    """
    f1, f2 = tuple(f1), tuple(f2)
    if not is_embedding(base, b1, f1) or not is_embedding(base, b2, f2):
        raise InvalidEmbedding("inputs must be induced embeddings of the base")
    b1n = _relabel_prefix(b1, f1)
    b2n = _relabel_prefix(b2, f2)
    return free_amalgam_structures(base.n, b1n, b2n)


def _relabel_prefix(s, f):
    """Relabel s so the image of f occupies 0..len(f)-1 in order."""
    rest = [v for v in range(s.n) if v not in set(f)]
    order = list(f) + rest
    perm = [0] * s.n
    for new, old in enumerate(order):
        perm[old] = new
    return s.relabel(perm)


# ---------------------------------------------------------------------------
# checkers


@dataclass(frozen=True)
class AmalgamationWitness:
    base: RelationalStructure
    b1: RelationalStructure
    b2: RelationalStructure
    verdict: tuple  # ("solved", c, g1, g2) | ("unsolvable-up-to", bound)

    @property
    def solved(self):
        return self.verdict[0] == "solved"


def check_hereditary(cls: ClassSpec, n):
    """All induced substructures of members of size <= n stay members."""
    if n > HEREDITARY_LIMIT:
        raise SizeLimit("check_hereditary", HEREDITARY_LIMIT, n)
    for size in range(1, n + 1):
        for member in cls.catalog(size):
            for k in range(1, size):
                for verts in itertools.combinations(range(size), k):
                    sub = induced_substructure(member, verts)
                    if not cls.membership(sub):
                        return False, (member, verts, sub)
    return True, None


def check_jep(cls: ClassSpec, n):
    """Any two members of size <= n embed jointly in a member of size <= 2n."""
    if n > JEP_LIMIT:
        raise SizeLimit("check_jep", JEP_LIMIT, n)
    for sa in range(1, n + 1):
        for sb in range(sa, n + 1):
            for a in cls.catalog(sa):
                for b in cls.catalog(sb):
                    host = cls.join(a, b)
                    ok = (
                        host is not None
                        and host.n <= 2 * n
                        and cls.membership(host)
                        and find_embedding(a, host) is not None
                        and find_embedding(b, host) is not None
                    )
                    if not ok:
                        host = _jep_search(cls, a, b, 2 * n)
                        if host is None:
                            return False, (a, b)
    return True, None


def _jep_search(cls, a, b, bound):
    for size in range(max(a.n, b.n), bound + 1):
        for host in cls.catalog(size):
            if (
                find_embedding(a, host) is not None
                and find_embedding(b, host) is not None
            ):
                return host
    return None


def check_ap(cls: ClassSpec, n, strong=False):
    """Amalgamation over all instances with |B1|, |B2| <= n.

    Returns (True, None) or (False, AmalgamationWitness) for the first
    unsolvable instance in scan order (base size, base, |B1|, B1, |B2|, B2).
    """
    if n > AP_LIMIT:
        raise SizeLimit("check_ap", AP_LIMIT, n)
    for a in range(1, n + 1):
        for base in cls.catalog(a):
            for s1 in range(a, n + 1):
                for i1, b1 in enumerate(cls.extensions(base, s1)):
                    for s2 in range(s1, n + 1):
                        exts2 = cls.extensions(base, s2)
                        start = i1 if s2 == s1 else 0
                        for b2 in exts2[start:]:
                            witness = solve_amalgamation(cls, base, b1, b2, strong)
                            if not witness.solved:
                                return False, witness
    return True, None


def standard_solution(a, b1, b2, c):
    """Embeddings for the no-identification layout: B1 kept in place, B2's
    new points appended after it."""
    g1 = tuple(range(b1.n))
    g2 = tuple(v if v < a else b1.n + v - a for v in range(b2.n))
    return c, g1, g2


def solve_amalgamation(cls: ClassSpec, base, b1, b2, strong=False):
    """Solve one instance: constructive strategy first, then exhaustive
    search (quotients with cross completions for binary signatures, catalog
    hosts otherwise).  Every solution is re-verified before acceptance."""
    candidate = cls.amalgamate(base, b1, b2, strong)
    if candidate is not None and _verify_amalgam(cls, base, b1, b2, candidate, strong):
        return AmalgamationWitness(base, b1, b2, ("solved", *candidate))
    binary = all(arity <= 2 for _, arity in cls.signature.relations)
    if binary:
        found = _search_amalgam(cls, base, b1, b2, strong)
    else:
        found = _catalog_search_amalgam(cls, base, b1, b2, strong)
    if found is not None:
        return AmalgamationWitness(base, b1, b2, ("solved", *found))
    return AmalgamationWitness(base, b1, b2, ("unsolvable-up-to", b1.n + b2.n))


def _verify_amalgam(cls, base, b1, b2, solution, strong):
    """Check a claimed (C, g1, g2): member, induced embeddings, agreement on
    the base, and (strong) images meeting exactly in the base."""
    c, g1, g2 = solution
    if not cls.membership(c):
        return False
    if any(g1[v] != g2[v] for v in range(base.n)):
        return False
    if not is_embedding(b1, c, g1) or not is_embedding(b2, c, g2):
        return False
    if strong:
        overlap = set(g1) & set(g2)
        if overlap != {g1[v] for v in range(base.n)}:
            return False
    return True


def _search_amalgam(cls, base, b1, b2, strong):
    """Exhaustive: identify some new points of B2 with new points of B1,
    then complete unspecified cross pairs in every way the signature allows.

    Hereditary classes admit an amalgam iff they admit one on the union of
    the images, so hosts beyond the quotients are redundant.
    """
    a = base.n
    new1 = list(range(a, b1.n))
    new2 = list(range(a, b2.n))
    matchings = [{}]
    if not strong:
        for k in range(1, min(len(new1), len(new2)) + 1):
            for targets in itertools.permutations(new1, k):
                for sources in itertools.combinations(new2, k):
                    matchings.append(dict(zip(sources, targets)))
    for matching in matchings:
        for sol in _quotient_candidates(cls, base, b1, b2, matching):
            if _verify_amalgam(cls, base, b1, b2, sol, strong):
                return sol
    return None


def _catalog_search_amalgam(cls, base, b1, b2, strong):
    """Host search over the class catalog (non-binary signatures).

    Complete up to |B1|+|B2|-|A| points, which suffices for hereditary
    classes (restrict any solution to the union of the images).
    """
    for size in range(max(b1.n, b2.n), b1.n + b2.n - base.n + 1):
        for host in cls.catalog(size):
            for g1 in find_all_embeddings(b1, host):
                fixed = [(v, g1[v]) for v in range(base.n)]
                g2 = find_embedding(b2, host, fixed=fixed)
                if g2 is None:
                    continue
                if strong:
                    overlap = set(g1) & set(g2)
                    if overlap != {g1[v] for v in range(base.n)}:
                        continue
                return host, g1, g2
    return None


def _quotient_candidates(cls, base, b1, b2, matching):
    a = base.n
    fresh = {}
    nxt = b1.n
    for v in range(a, b2.n):
        if v not in matching:
            fresh[v] = nxt
            nxt += 1

    def g2(v):
        if v < a:
            return v
        return matching.get(v, fresh.get(v))

    n = nxt
    g1 = tuple(range(b1.n))
    g2t = tuple(g2(v) for v in range(b2.n))
    tables = {}
    for name, table in b1.tables:
        merged = set(table)
        merged |= {tuple(g2(x) for x in t) for t in b2.table(name)}
        tables[name] = merged
    seed = RelationalStructure.make(cls.signature, n, tables)
    side1 = sorted(set(range(a, b1.n)) - set(matching.values()))
    side2 = sorted(fresh.values())
    cross = [(x, y) for x in side1 for y in side2]
    options = [list(_pair_fillings(cls.signature, x, y)) for x, y in cross]
    for combo in itertools.product(*options):
        tabs = {name: set(table) for name, table in seed.tables}
        for extra in combo:
            for name, t in extra:
                tabs[name].add(t)
        yield RelationalStructure.make(cls.signature, n, tabs), g1, g2t


def _pair_fillings(signature, x, y):
    """Ways to decide all binary relations on an unordered cross pair."""
    per_relation = []
    for name, arity in signature.relations:
        if arity == 1:
            continue
        if arity == 2:
            per_relation.append(
                [
                    (),
                    ((name, (x, y)),),
                    ((name, (y, x)),),
                    ((name, (x, y)), (name, (y, x))),
                ]
            )
    for combo in itertools.product(*per_relation):
        yield tuple(t for group in combo for t in group)


# ---------------------------------------------------------------------------
# ages and limit approximation


def age(s, k):
    """Canonical codes of induced substructures of size <= k with counts."""
    if k > 5:
        raise SizeLimit("age", 5, k)
    out = {}
    for size in range(1, min(k, s.n) + 1):
        for verts in itertools.combinations(range(s.n), size):
            code = canonical_code(induced_substructure(s, verts))
            out[code] = out.get(code, 0) + 1
    return out


_PREFIX_CAP = 11  # 3^11 demands is already far beyond any stage budget


def limit_approximation(cls: ClassSpec, stages, seed):
    """Grow a finite window of the class limit by one-point extensions.

    Prefix rounds: round p enumerates every extension type over every
    nonempty subset of the first p vertices, in a seeded random order, and
    realises each unmet, class-consistent demand with a fresh vertex.
    Realising a demand never unrealises another, so one pass saturates the
    prefix and p advances; `stages` bounds the number of adjoined vertices.
    """
    if stages > 200:
        raise SizeLimit("limit_approximation stages", 200, stages)
    if not isinstance(cls, (GraphClass, TournamentClass)):
        raise SizeLimit("limit_approximation kind", 0, cls.name)
    rng = random.Random(seed)
    state = _LimitState(cls)
    budget = stages
    for prefix in range(1, _PREFIX_CAP + 1):
        if budget <= 0 or prefix > state.n:
            break
        demands = [
            (verts, pattern)
            for size in range(1, prefix + 1)
            for verts in itertools.combinations(range(prefix), size)
            for pattern in range(1 << size)
        ]
        rng.shuffle(demands)
        for verts, pattern in demands:
            if budget <= 0:
                break
            if not state.admissible(verts, pattern):
                continue
            if state.realised(verts, pattern):
                continue
            state.adjoin(verts, pattern)
            budget -= 1
    return state.structure()


class _LimitState:
    def __init__(self, cls):
        self.cls = cls
        self.is_tournament = isinstance(cls, TournamentClass)
        self.k_bound = cls.k if isinstance(cls, KFreeGraphClass) else None
        self.n = 1
        self.adj = [set()]  # graph neighbours / tournament out-neighbours
        if self.is_tournament:
            self.inn = [set()]

    def admissible(self, verts, pattern):
        if self.is_tournament or self.k_bound is None:
            return True
        chosen = [v for i, v in enumerate(verts) if (pattern >> i) & 1]
        # adding a vertex adjacent to all of `chosen` creates a k-clique iff
        # chosen contains a (k-1)-clique
        for sub in itertools.combinations(chosen, self.k_bound - 1):
            if all(
                y in self.adj[x] for x, y in itertools.combinations(sub, 2)
            ):
                return False
        return True

    def realised(self, verts, pattern):
        for z in range(self.n):
            if z in verts:
                continue
            ok = True
            for i, v in enumerate(verts):
                want = bool((pattern >> i) & 1)
                if self.is_tournament:
                    have = v in self.adj[z]  # arc z -> v
                else:
                    have = v in self.adj[z]
                if have != want:
                    ok = False
                    break
            if ok:
                return True
        return False

    def adjoin(self, verts, pattern):
        z = self.n
        self.n += 1
        self.adj.append(set())
        if self.is_tournament:
            self.inn.append(set())
        for i, v in enumerate(verts):
            if (pattern >> i) & 1:
                if self.is_tournament:
                    self.adj[z].add(v)
                    self.inn[v].add(z)
                else:
                    self.adj[z].add(v)
                    self.adj[v].add(z)
            elif self.is_tournament:
                self.adj[v].add(z)
                self.inn[z].add(v)
        if self.is_tournament:
            # orient the pairs the demand leaves free: away from the window
            for v in range(self.n - 1):
                if v not in verts and v not in self.adj[z] and z not in self.adj[v]:
                    self.adj[z].add(v)
                    self.inn[v].add(z)

    def structure(self):
        if self.is_tournament:
            arcs = {(x, y) for x in range(self.n) for y in self.adj[x]}
            return RelationalStructure.make(
                TOURNAMENT_SIGNATURE, self.n, {"arc": arcs}
            )
        edges = {(x, y) for x in range(self.n) for y in self.adj[x]}
        return RelationalStructure.make(GRAPH_SIGNATURE, self.n, {"adj": edges})


def verified_age_level(s, cls: ClassSpec, k_max=4):
    """Largest k <= k_max with every size-k member of the class in age(s)."""
    codes = set(age(s, min(k_max, 5)))
    level = 0
    for k in range(1, k_max + 1):
        want = {canonical_code(m) for m in cls.catalog(k)}
        if want <= codes:
            level = k
        else:
            break
    return level
