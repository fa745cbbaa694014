"""Finite relational structures and their symmetry kernel.

Everything downstream (homogeneity testing, amalgamation checking, the
rigid-structure experiments) funnels through the handful of operations in
this module: induced substructures, isomorphism search, automorphism groups
with exact orders, canonical codes, and orbit partitions on injective
k-tuples.

Vertices are always dense 0-based integers.  Group orders are exact: they
come from an orbit-stabiliser chain whose orbits are computed by direct
existence searches, one prescribed-prefix backtrack per candidate point.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import InvalidVertex, SignatureMismatch, SizeLimit

AUTOMORPHISM_LIMIT = 30
CANONICAL_LIMIT = 12
ORBIT_TUPLE_LIMIT = 4


# ---------------------------------------------------------------------------
# domain types


@dataclass(frozen=True)
class Signature:
    """Named relations with positive arities, order-significant."""

    relations: tuple  # of (name, arity)

    def __post_init__(self):
        names = [name for name, _ in self.relations]
        if len(set(names)) != len(names):
            raise ValueError("relation names must be unique")
        for name, arity in self.relations:
            if arity < 1:
                raise ValueError(f"relation {name!r}: arity must be >= 1")

    @property
    def names(self):
        return tuple(name for name, _ in self.relations)

    def arity(self, name):
        for rname, arity in self.relations:
            if rname == name:
                return arity
        raise KeyError(name)


GRAPH_SIGNATURE = Signature((("adj", 2),))
TOURNAMENT_SIGNATURE = Signature((("arc", 2),))


@dataclass(frozen=True)
class RelationalStructure:
    """A finite structure: domain {0..n-1} plus one tuple-set per relation.

    No symmetry or irreflexivity is imposed here; specific structure kinds
    (graphs, tournaments, C-relations) enforce their own shape on top.
    The empty domain is allowed.
    """

    signature: Signature
    n: int
    tables: tuple  # of (name, frozenset of tuples), aligned with signature

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("domain size must be >= 0")
        if tuple(name for name, _ in self.tables) != self.signature.names:
            raise ValueError("tables must align with signature order")
        for (name, arity), (_, table) in zip(self.signature.relations, self.tables):
            for t in table:
                if len(t) != arity:
                    raise InvalidVertex(f"{name}: tuple {t} has wrong arity")
                if any(not (0 <= x < self.n) for x in t):
                    raise InvalidVertex(f"{name}: tuple {t} out of range")

    @staticmethod
    def make(signature, n, tables):
        """Build from a {name: iterable-of-tuples} mapping."""
        aligned = tuple(
            (name, frozenset(map(tuple, tables.get(name, ()))))
            for name in signature.names
        )
        return RelationalStructure(signature, n, aligned)

    def table(self, name):
        for rname, table in self.tables:
            if rname == name:
                return table
        raise KeyError(name)

    def relabel(self, perm):
        """Image of the structure under vertex permutation perm (v -> perm[v])."""
        tabs = {
            name: {tuple(perm[x] for x in t) for t in table}
            for name, table in self.tables
        }
        return RelationalStructure.make(self.signature, self.n, tabs)

    def total_tuples(self):
        return sum(len(table) for _, table in self.tables)


@dataclass(frozen=True)
class FiniteGraph:
    """Undirected loopless graph, adjacency kept as one bit-row per vertex."""

    n: int
    rows: tuple  # of int bitmasks

    def __post_init__(self):
        if len(self.rows) != self.n:
            raise ValueError("need one adjacency row per vertex")
        for v, row in enumerate(self.rows):
            if row >> self.n:
                raise InvalidVertex(f"row {v} has bits beyond the domain")
            if (row >> v) & 1:
                raise InvalidVertex(f"loop at vertex {v}")
        for v in range(self.n):
            for w in range(v + 1, self.n):
                if ((self.rows[v] >> w) & 1) != ((self.rows[w] >> v) & 1):
                    raise InvalidVertex(f"asymmetric adjacency at ({v}, {w})")

    @staticmethod
    def from_edges(n, edges):
        rows = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidVertex(f"edge ({u}, {v}) out of range")
            if u == v:
                raise InvalidVertex(f"loop at vertex {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return FiniteGraph(n, tuple(rows))

    def adjacent(self, u, v):
        return bool((self.rows[u] >> v) & 1)

    def edges(self):
        return [
            (u, v)
            for u in range(self.n)
            for v in range(u + 1, self.n)
            if (self.rows[u] >> v) & 1
        ]

    def degree(self, v):
        return self.rows[v].bit_count()

    def degrees(self):
        return [row.bit_count() for row in self.rows]

    def complement(self):
        full = (1 << self.n) - 1
        return FiniteGraph(
            self.n, tuple((full ^ row) & ~(1 << v) for v, row in enumerate(self.rows))
        )

    def relabel(self, perm):
        rows = [0] * self.n
        for v in range(self.n):
            row = self.rows[v]
            new = 0
            while row:
                low = row & -row
                new |= 1 << perm[low.bit_length() - 1]
                row ^= low
            rows[perm[v]] = new
        return FiniteGraph(self.n, tuple(rows))

    def common_neighbours(self, verts):
        mask = (1 << self.n) - 1
        for v in verts:
            mask &= self.rows[v]
        return mask.bit_count()

    def to_structure(self):
        pairs = set()
        for u, v in self.edges():
            pairs.add((u, v))
            pairs.add((v, u))
        return RelationalStructure.make(GRAPH_SIGNATURE, self.n, {"adj": pairs})

    @staticmethod
    def from_structure(s):
        if s.signature.names != ("adj",):
            raise SignatureMismatch("not a graph-signature structure")
        edges = {(min(u, v), max(u, v)) for u, v in s.table("adj") if u != v}
        return FiniteGraph.from_edges(s.n, edges)


@dataclass(frozen=True)
class PartialIsomorphism:
    """Injective map between structure domains, stored as ordered pairs."""

    pairs: tuple  # of (source, target)

    def __post_init__(self):
        src = [a for a, _ in self.pairs]
        tgt = [b for _, b in self.pairs]
        if len(set(src)) != len(src) or len(set(tgt)) != len(tgt):
            raise InvalidVertex("partial isomorphism must be injective both ways")

    @property
    def domain(self):
        return tuple(a for a, _ in self.pairs)

    @property
    def image(self):
        return tuple(b for _, b in self.pairs)

    def as_dict(self):
        return dict(self.pairs)

    def verifies_on(self, src, tgt):
        """Check preservation and reflection of every relation on the pairs.

        src/tgt may be FiniteGraph or RelationalStructure (same kind).
        """
        m = self.as_dict()
        if isinstance(src, FiniteGraph):
            for a in m:
                for b in m:
                    if src.adjacent(a, b) != tgt.adjacent(m[a], m[b]):
                        return False
            return True
        if src.signature != tgt.signature:
            raise SignatureMismatch("differing signatures")
        dom = set(m)
        img = {m[a]: a for a in m}
        for name, table in src.tables:
            arity = src.signature.arity(name)
            ttable = tgt.table(name)
            for t in itertools.product(sorted(dom), repeat=arity):
                if (t in table) != (tuple(m[x] for x in t) in ttable):
                    return False
        _ = img
        return True


@dataclass(frozen=True)
class PermGroupDescription:
    """Generators plus the exact group order from the stabiliser chain."""

    n: int
    generators: tuple  # of tuples (one-line notation)
    order: int

    def vertex_orbits(self):
        """Orbit partition of the domain under the generated group."""
        seen = [False] * self.n
        orbits = []
        for start in range(self.n):
            if seen[start]:
                continue
            orb = [start]
            seen[start] = True
            queue = [start]
            while queue:
                v = queue.pop()
                for g in self.generators:
                    w = g[v]
                    if not seen[w]:
                        seen[w] = True
                        orb.append(w)
                        queue.append(w)
            orbits.append(sorted(orb))
        return orbits


# ---------------------------------------------------------------------------
# refinement colouring (sound orbit invariant, used for search pruning)


def _refine_graph_colors(g: FiniteGraph):
    colors = list(g.degrees())
    while True:
        keys = []
        for v in range(g.n):
            row = g.rows[v]
            nbr = []
            while row:
                low = row & -row
                nbr.append(colors[low.bit_length() - 1])
                row ^= low
            nbr.sort()
            keys.append((colors[v], tuple(nbr)))
        ranks = {k: i for i, k in enumerate(sorted(set(keys)))}
        new = [ranks[k] for k in keys]
        if new == colors:
            return colors
        colors = new


def _refine_structure_colors(s: RelationalStructure):
    incident = _incident_tuples(s)
    colors = []
    for v in range(s.n):
        profile = sorted(
            (ri, tuple(i for i, x in enumerate(t) if x == v)) for ri, t in incident[v]
        )
        colors.append(tuple(profile))
    ranks = {k: i for i, k in enumerate(sorted(set(colors)))}
    colors = [ranks[k] for k in colors]
    for _ in range(s.n):
        keys = []
        for v in range(s.n):
            sig = sorted(
                (ri, tuple(colors[x] if x != v else -1 for x in t))
                for ri, t in incident[v]
            )
            keys.append((colors[v], tuple(sig)))
        ranks = {k: i for i, k in enumerate(sorted(set(keys)))}
        new = [ranks[k] for k in keys]
        if new == colors:
            break
        colors = new
    return colors


def _incident_tuples(s: RelationalStructure):
    """incident[v] = list of (relation_index, tuple) with v among the entries."""
    incident = [[] for _ in range(s.n)]
    for ri, (_, table) in enumerate(s.tables):
        for t in table:
            for v in set(t):
                incident[v].append((ri, t))
    return incident


# ---------------------------------------------------------------------------
# backtracking search engine


class _GraphSearch:
    def __init__(self, src: FiniteGraph, tgt: FiniteGraph):
        self.src = src
        self.tgt = tgt
        self.src_colors = _refine_graph_colors(src)
        self.tgt_colors = _refine_graph_colors(tgt)

    def color_profiles_match(self):
        return sorted(self._profile(self.src, self.src_colors)) == sorted(
            self._profile(self.tgt, self.tgt_colors)
        )

    @staticmethod
    def _profile(g, colors):
        # (degree, refined colour census) — colour ids are rank-normalised by
        # the refinement so equal structures yield equal profiles
        hist = {}
        for v in range(g.n):
            key = (g.degree(v), colors[v])
            hist[key] = hist.get(key, 0) + 1
        return list(hist.items())

    def search(self, prefix):
        """First injective edge-preserving bijection extending prefix, or None.

        prefix: sequence of (source, target) pairs.  Targets are tried in
        ascending order, so the result is deterministic.
        """
        n = self.src.n
        if self.tgt.n != n:
            return None
        mapping = [-1] * n
        used = 0
        for a, b in prefix:
            if not self._consistent(mapping, a, b):
                return None
            mapping[a] = b
            used |= 1 << b
        free = [v for v in range(n) if mapping[v] < 0]
        # most-constrained-first among the refinement classes, ties by index
        class_size = {}
        for c in self.src_colors:
            class_size[c] = class_size.get(c, 0) + 1
        free.sort(key=lambda v: (class_size[self.src_colors[v]], v))

        src_deg = self.src.degrees()
        tgt_deg = self.tgt.degrees()

        def extend(i, used):
            if i == len(free):
                return True
            v = free[i]
            for w in range(n):
                if (used >> w) & 1:
                    continue
                if src_deg[v] != tgt_deg[w]:
                    continue
                if not self._consistent(mapping, v, w):
                    continue
                mapping[v] = w
                if extend(i + 1, used | (1 << w)):
                    return True
                mapping[v] = -1
            return False

        if extend(0, used):
            return tuple(mapping)
        return None

    def _consistent(self, mapping, v, w):
        rows_s = self.src.rows
        rows_t = self.tgt.rows
        rv = rows_s[v]
        rw = rows_t[w]
        for a, b in enumerate(mapping):
            if b < 0 or a == v:
                continue
            if ((rv >> a) & 1) != ((rw >> b) & 1):
                return False
        return True


class _StructureSearch:
    def __init__(self, src: RelationalStructure, tgt: RelationalStructure):
        if src.signature != tgt.signature:
            raise SignatureMismatch("structures must share a signature")
        self.src = src
        self.tgt = tgt
        self.src_colors = _refine_structure_colors(src)
        self.tgt_colors = _refine_structure_colors(tgt)
        self.src_incident = _incident_tuples(src)
        self.tgt_incident = _incident_tuples(tgt)
        self.tgt_tables = [table for _, table in tgt.tables]
        self.src_tables = [table for _, table in src.tables]

    def table_sizes_match(self):
        return all(
            len(a) == len(b) for a, b in zip(self.src_tables, self.tgt_tables)
        )

    def search(self, prefix):
        n = self.src.n
        if self.tgt.n != n:
            return None
        mapping = [-1] * n
        inverse = [-1] * n
        for a, b in prefix:
            mapping[a] = b
            inverse[b] = a
        for a, b in prefix:
            if not self._consistent(mapping, inverse, a, b):
                return None
        free = [v for v in range(n) if mapping[v] < 0]
        class_size = {}
        for c in self.src_colors:
            class_size[c] = class_size.get(c, 0) + 1
        free.sort(key=lambda v: (class_size[self.src_colors[v]], v))

        def extend(i):
            if i == len(free):
                return True
            v = free[i]
            for w in range(n):
                if inverse[w] >= 0:
                    continue
                mapping[v] = w
                inverse[w] = v
                if self._consistent(mapping, inverse, v, w) and extend(i + 1):
                    return True
                mapping[v] = -1
                inverse[w] = -1
            return False

        if extend(0):
            return tuple(mapping)
        return None

    def _consistent(self, mapping, inverse, v, w):
        # forward: fully-mapped source tuples through v must land in target
        for ri, t in self.src_incident[v]:
            img = []
            ok = True
            for x in t:
                mx = mapping[x]
                if mx < 0:
                    ok = False
                    break
                img.append(mx)
            if ok and tuple(img) not in self.tgt_tables[ri]:
                return False
        # backward: fully-hit target tuples through w must pull back
        for ri, t in self.tgt_incident[w]:
            pre = []
            ok = True
            for x in t:
                px = inverse[x]
                if px < 0:
                    ok = False
                    break
                pre.append(px)
            if ok and tuple(pre) not in self.src_tables[ri]:
                return False
        return True


def _make_search(src, tgt):
    if isinstance(src, FiniteGraph) and isinstance(tgt, FiniteGraph):
        return _GraphSearch(src, tgt)
    if isinstance(src, FiniteGraph) or isinstance(tgt, FiniteGraph):
        raise SignatureMismatch("cannot compare a graph with a general structure")
    return _StructureSearch(src, tgt)


# ---------------------------------------------------------------------------
# public operations


def induced_substructure(s, verts):
    """Substructure on verts, re-indexed 0..len(verts)-1 in the given order."""
    verts = list(verts)
    if len(set(verts)) != len(verts):
        raise InvalidVertex("vertices must be distinct")
    n = s.n
    for v in verts:
        if not (0 <= v < n):
            raise InvalidVertex(f"vertex {v} out of range")
    pos = {v: i for i, v in enumerate(verts)}
    if isinstance(s, FiniteGraph):
        k = len(verts)
        rows = [0] * k
        for i, v in enumerate(verts):
            for j, w in enumerate(verts):
                if i != j and s.adjacent(v, w):
                    rows[i] |= 1 << j
        return FiniteGraph(k, tuple(rows))
    keep = set(verts)
    tabs = {
        name: {tuple(pos[x] for x in t) for t in table if set(t) <= keep}
        for name, table in s.tables
    }
    return RelationalStructure.make(s.signature, len(verts), tabs)


def are_isomorphic(s, t):
    """A relation-preserving bijection s -> t, or None.

    Deterministic: the backtracking explores targets in ascending order.
    """
    if isinstance(s, FiniteGraph) != isinstance(t, FiniteGraph):
        raise SignatureMismatch("mixed graph / structure comparison")
    if s.n != t.n:
        return None
    search = _make_search(s, t)
    if isinstance(search, _GraphSearch):
        if sorted(s.degrees()) != sorted(t.degrees()):
            return None
        if not search.color_profiles_match():
            return None
    else:
        if not search.table_sizes_match():
            return None
    return search.search(())


def automorphisms(s):
    """Exact automorphism group via an orbit-stabiliser chain.

    Level k finds the orbit of vertex k under the pointwise stabiliser of
    0..k-1 by one prescribed-prefix search per candidate point; the order
    is the product of the orbit sizes.
    """
    n = s.n
    if n > AUTOMORPHISM_LIMIT:
        raise SizeLimit("automorphisms", AUTOMORPHISM_LIMIT, n)
    if n == 0:
        return PermGroupDescription(0, (), 1)
    search = _make_search(s, s)
    colors = search.src_colors
    gens = []
    order = 1
    identity = [(i, i) for i in range(n)]
    for level in range(n):
        orbit_size = 1
        for w in range(level + 1, n):
            if colors[w] != colors[level]:
                continue
            prefix = identity[:level] + [(level, w)]
            g = search.search(prefix)
            if g is not None:
                gens.append(g)
                orbit_size += 1
        order *= orbit_size
    return PermGroupDescription(n, tuple(gens), order)


# --- canonical codes -------------------------------------------------------


def _structure_cells(signature, n):
    """Per-level cell lists: cells[k] = tuples over 0..k whose max entry is k.

    The canonical code reads relation membership bits cell by cell; because
    every level-k cell only mentions positions <= k, the code of the first
    m vertices is a prefix of the full code, which is what makes deletion
    of the last vertex canonicity-preserving.
    """
    cells = [[] for _ in range(n)]
    for ri, (_, arity) in enumerate(signature.relations):
        for t in itertools.product(range(n), repeat=arity):
            cells[max(t)].append((ri, t))
    for level_cells in cells:
        level_cells.sort()
    return cells


_STATE_CAP = 250_000


def _symmetric_pattern_key(s):
    """Per-relation pattern sets when membership depends only on the equality
    pattern of a tuple, else None.

    Such tables (empty, complete, all-distinct, diagonal, ...) are invariant
    under every permutation, so any vertex ordering gives the same code and
    the pattern sets characterise the structure up to isomorphism.
    """
    key = []
    for (_, arity), (_, table) in zip(s.signature.relations, s.tables):
        by_pattern = {}
        for t in itertools.product(range(s.n), repeat=arity):
            pat = tuple(t.index(x) for x in t)
            by_pattern.setdefault(pat, [0, 0])[t in table] += 1
        present = []
        for pat, (absent, here) in sorted(by_pattern.items()):
            if absent and here:
                return None
            if here:
                present.append(pat)
        key.append(tuple(present))
    return tuple(key)


def canonical_code(s):
    """Lexicographically least encoding over all vertex orderings.

    Equal codes iff isomorphic.  Pruned breadth-first over orderings that
    stay minimal; fully symmetric tables short-circuit and other heavily
    tied inputs fall back to brute force.
    """
    if isinstance(s, FiniteGraph):
        s = s.to_structure()
    n = s.n
    if n > CANONICAL_LIMIT:
        raise SizeLimit("canonical_code", CANONICAL_LIMIT, n)
    header = repr((s.signature.relations, n)).encode()
    sym = _symmetric_pattern_key(s)
    if sym is not None:
        return header + b"|sym" + repr(sym).encode()
    bits = _min_code_bits(s)
    return header + b"|" + bits


def _min_code_bits(s, pinned=0):
    """Byte encoding of the minimal code; positions < pinned stay in place.

    Breadth-first over partial orderings: at each level keep exactly the
    orderings whose next code column attains the minimum.  Columns read only
    positions <= level, so the kept prefix always extends to the global
    minimum.
    """
    n = s.n
    tables = [table for _, table in s.tables]
    cells = _structure_cells(s.signature, n)
    out = []

    def column(assign, level):
        word = 0
        for ri, t in cells[level]:
            word = (word << 1) | (tuple(assign[i] for i in t) in tables[ri])
        return word

    if pinned:
        base = tuple(range(pinned))
        out.extend(column(base[: level + 1], level) for level in range(pinned))
        states = [base]
    else:
        states = [()]
    for level in range(pinned, n):
        best = None
        nxt = []
        for seq in states:
            used = set(seq)
            for v in range(n):
                if v in used:
                    continue
                col = column(seq + (v,), level)
                if best is None or col < best:
                    best = col
                    nxt = [seq + (v,)]
                elif col == best:
                    nxt.append(seq + (v,))
        out.append(best)
        states = nxt
        if len(states) > _STATE_CAP:
            return _min_code_bits_brute(s, pinned)
    return repr(out).encode()


def _min_code_bits_brute(s, pinned=0):
    n = s.n
    tables = [table for _, table in s.tables]
    cells = _structure_cells(s.signature, n)
    fixed = tuple(range(pinned))
    rest = [v for v in range(n) if v >= pinned]
    best = None
    for tail in itertools.permutations(rest):
        assign = fixed + tail
        cols = []
        for level in range(n):
            word = 0
            for ri, t in cells[level]:
                word = (word << 1) | (tuple(assign[i] for i in t) in tables[ri])
            cols.append(word)
            if best is not None and cols > best[: len(cols)]:
                break
        else:
            if best is None or cols < best:
                best = cols
    return repr(best).encode()


def canonical_code_fixing_prefix(s, pinned):
    """Least code over orderings that keep vertices 0..pinned-1 in place.

    Used to deduplicate structure extensions relative to a fixed base.
    """
    if isinstance(s, FiniteGraph):
        s = s.to_structure()
    header = repr((s.signature.relations, s.n, pinned)).encode()
    sym = _symmetric_pattern_key(s)
    if sym is not None:
        return header + b"|sym" + repr(sym).encode()
    return header + b"|" + _min_code_bits(s, pinned=pinned)


# --- orbits on tuples ------------------------------------------------------


def tuple_orbit_labels(s, k, group=None):
    """Orbit labels for all injective k-tuples under Aut(s).

    Returns (tuples, labels) where tuples is the lexicographically sorted
    list of injective k-tuples and labels[i] is the index (into tuples) of
    the least tuple in the same orbit.  Internal helper: no size guard.
    """
    import numpy as np

    n = s.n
    if group is None:
        group = automorphisms(s)
    tuples = list(itertools.permutations(range(n), k))
    if not tuples:
        return tuples, np.zeros(0, dtype=np.int64)
    arr = np.array(tuples, dtype=np.int64)
    powers = n ** np.arange(k - 1, -1, -1, dtype=np.int64)
    codes = arr @ powers
    # codes are sorted ascending because itertools.permutations is lex
    labels = np.arange(len(tuples), dtype=np.int64)
    if not group.generators:
        return tuples, labels
    gens = [np.array(g, dtype=np.int64) for g in group.generators]
    # min-label propagation along (tuple -> image) in both directions until
    # stable: labels converge to the least tuple index of each orbit.  Image
    # indices are recomputed per sweep to keep memory flat.
    while True:
        changed = False
        for g in gens:
            idx = np.searchsorted(codes, g[arr] @ powers)
            pulled = labels[idx]
            better = pulled < labels
            if better.any():
                labels[better] = pulled[better]
                changed = True
            if (labels < labels[idx]).any():
                np.minimum.at(labels, idx, labels)
                changed = True
        if not changed:
            return tuples, labels


def orbits_on_ktuples(s, k):
    """Partition of injective k-tuples into Aut(s)-orbits.

    Orbits are listed by their least member; members are sorted.
    """
    n = s.n
    if n > AUTOMORPHISM_LIMIT:
        raise SizeLimit("orbits_on_ktuples", AUTOMORPHISM_LIMIT, n)
    if k > ORBIT_TUPLE_LIMIT:
        raise SizeLimit("orbits_on_ktuples arity", ORBIT_TUPLE_LIMIT, k)
    tuples, labels = tuple_orbit_labels(s, k)
    groups = {}
    for t, lab in zip(tuples, labels):
        groups.setdefault(int(lab), []).append(t)
    return [groups[lab] for lab in sorted(groups)]
