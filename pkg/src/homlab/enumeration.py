"""Isomorph-free exhaustive generation of small graphs.

Orderly (Read/Faradzev-style) generation: a labelled graph is *canonical*
when its upper-triangle code, read column by column, is lexicographically
least over all relabellings.  Deleting the last vertex of a canonical graph
leaves a canonical graph, so every canonical n-vertex graph is produced
exactly once by extending a canonical (n-1)-vertex graph with one new last
vertex, keeping the child iff it passes the canonicity test.  No global
dedup set is needed.

The canonicity test propagates the set of partial orderings that attain the
minimal code prefix; graphs whose tie-set explodes (near-complete or highly
symmetric ones) fall back to a vectorised minimum over all permutations.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from .core import FiniteGraph

_TIE_CAP = 300_000


def _identity_columns(rows, n):
    """cols[j] = adjacency bits of vertex j to 0..j-1, earlier vertex = MSB."""
    cols = []
    for j in range(1, n):
        word = 0
        for i in range(j):
            word = (word << 1) | ((rows[j] >> i) & 1)
        cols.append(word)
    return cols


_NUMPY_SWITCH = 32


def _is_canonical_dfs(rows, n, idcols):
    """True iff no vertex ordering yields a smaller column code.

    States carry, for every unused vertex, its next-column word built up
    incrementally (word' = word << 1 | adjacency-to-the-vertex-just-placed),
    so each level costs O(states * n) instead of O(states * n * depth).
    Wide tie sets are handed to the vectorised continuation; returns None
    when even that explodes (caller falls back to brute force).
    """
    verts = range(n)
    states = [(1 << s, [(rows[v] >> s) & 1 for v in verts]) for s in verts]
    for j in range(1, n):
        target = idcols[j - 1]
        nxt = []
        for used, words in states:
            for v in verts:
                if (used >> v) & 1:
                    continue
                word = words[v]
                if word > target:
                    continue
                if word < target:
                    return False
                nxt.append(
                    (
                        used | (1 << v),
                        [(words[u] << 1) | ((rows[u] >> v) & 1) for u in verts],
                    )
                )
        states = nxt
        if len(states) > _NUMPY_SWITCH and j < n - 1:
            return _is_canonical_vec(rows, n, idcols, states, j)
    return True


def _is_canonical_vec(rows, n, idcols, states, level):
    """Continue the tie search with whole-level numpy sweeps."""
    import numpy as np

    adj = np.zeros((n, n), dtype=np.int64)
    for v in range(n):
        for w in range(n):
            adj[v, w] = (rows[v] >> w) & 1
    used = np.array([u for u, _ in states], dtype=np.int64)
    words = np.array([w for _, w in states], dtype=np.int64)
    shifts = np.arange(n, dtype=np.int64)
    for j in range(level + 1, n):
        target = idcols[j - 1]
        free = ((used[:, None] >> shifts) & 1) == 0
        if bool((free & (words < target)).any()):
            return False
        si, vi = np.nonzero(free & (words == target))
        if si.size == 0:
            # identity is always a surviving state, so ties never die out
            return True
        if si.size > _TIE_CAP:
            return None
        used = used[si] | (np.int64(1) << vi)
        words = (words[si] << 1) | adj[:, vi].T
    return True


@lru_cache(maxsize=16)
def _perm_gather(n):
    """All n! permutations plus column-ordered pair indices, as arrays."""
    import numpy as np

    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int8)
    pair_i = []
    pair_j = []
    for j in range(1, n):
        for i in range(j):
            pair_i.append(i)
            pair_j.append(j)
    return perms, np.array(pair_i), np.array(pair_j)


def _is_canonical_brute(rows, n, idcols):
    """Vectorised minimum over all permutations (fallback path, n <= 10)."""
    import numpy as np

    perms, pair_i, pair_j = _perm_gather(n)
    mat = np.zeros((n, n), dtype=bool)
    for v in range(n):
        for w in range(n):
            mat[v, w] = (rows[v] >> w) & 1
    bits = mat[perms[:, pair_i], perms[:, pair_j]]
    nbits = bits.shape[1]
    if nbits > 62:
        raise ValueError("brute canonicity fallback supports n <= 11 only")
    weights = 1 << np.arange(nbits - 1, -1, -1, dtype=np.int64)
    codes = bits.astype(np.int64) @ weights
    ident = 0
    for j in range(1, n):
        ident = (ident << j) | idcols[j - 1]
    return int(codes.min()) == ident


def _is_canonical(rows, n):
    if n <= 1:
        return True
    # swapping the last two vertices only changes the last two columns; if
    # that swap lowers the code the graph cannot be canonical (cheap filter)
    if n >= 3:
        a, b = rows[n - 2], rows[n - 1]
        wa = wb = 0
        for i in range(n - 2):
            wa = (wa << 1) | ((a >> i) & 1)
            wb = (wb << 1) | ((b >> i) & 1)
        if wb < wa:
            return False
    idcols = _identity_columns(rows, n)
    verdict = _is_canonical_dfs(rows, n, idcols)
    if verdict is None:
        verdict = _is_canonical_brute(rows, n, idcols)
    return verdict


_CACHE = {}


def graphs_up_to_iso(n):
    """All graphs on exactly n vertices up to isomorphism (cached).

    Each class is represented by its canonical (code-minimal) labelling.
    """
    if n in _CACHE:
        return _CACHE[n]
    if n == 0:
        out = [FiniteGraph(0, ())]
    elif n == 1:
        out = [FiniteGraph(1, (0,))]
    else:
        out = []
        for parent in graphs_up_to_iso(n - 1):
            prows = parent.rows
            for nbhd in range(1 << (n - 1)):
                rows = [
                    prows[v] | (((nbhd >> v) & 1) << (n - 1)) for v in range(n - 1)
                ]
                rows.append(nbhd)
                if _is_canonical(rows, n):
                    out.append(FiniteGraph(n, tuple(rows)))
    _CACHE[n] = out
    return out


def all_graphs_up_to(n):
    """Graphs on 1..n vertices up to isomorphism, smaller sizes first."""
    out = []
    for k in range(1, n + 1):
        out.extend(graphs_up_to_iso(k))
    return out


def stream_graphs(n):
    """Yield the canonical n-vertex graphs without caching the level.

    Parents (level n-1) are cached as usual; the n-level classes are
    generated in the same deterministic order as graphs_up_to_iso(n).
    """
    if n in _CACHE:
        yield from _CACHE[n]
        return
    if n <= 1:
        yield from graphs_up_to_iso(n)
        return
    for parent in graphs_up_to_iso(n - 1):
        prows = parent.rows
        for nbhd in range(1 << (n - 1)):
            rows = [prows[v] | (((nbhd >> v) & 1) << (n - 1)) for v in range(n - 1)]
            rows.append(nbhd)
            if _is_canonical(rows, n):
                yield FiniteGraph(n, tuple(rows))
