"""Sum-free sets: exact counting, the coin-toss random measure, windows.

The census backtracks over increasing integers, pruning forbidden sums with
bit masks; every node of the search tree is one sum-free subset, so counting
nodes counts subsets (the empty set included).  The random measure scans
1..N and tosses a fair coin only for integers not already expressible as a
sum; trial t of an ensemble derives its own generator by mixing (seed, t),
so trials are reproducible individually and aggregation is order-free.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from .core import FiniteGraph
from .errors import SizeLimit

CENSUS_LIMIT = 42
RANDOM_N_LIMIT = 10**6
WINDOW_LIMIT = 10**4


@dataclass(frozen=True)
class SumFreeSet:
    elements: tuple  # sorted positive integers
    horizon: int  # largest integer examined when the set was built

    def __post_init__(self):
        if list(self.elements) != sorted(set(self.elements)):
            raise ValueError("elements must be sorted and distinct")
        if self.elements and self.elements[0] < 1:
            raise ValueError("elements must be positive")

    def __contains__(self, x):
        return x in set(self.elements)


@dataclass(frozen=True)
class SumFreeCensus:
    n: int
    total: int
    odd_type: int  # subsets of the odd numbers
    top_type: int  # subsets of (n/2, n]
    both_type: int
    other: int  # neither odd-type nor top-type
    ratio: float  # total / 2^(n/2)
    ratio_squared: Fraction  # exact: total^2 / 2^n


def is_sum_free(elements):
    """(True, None) or (False, (x, y, z)) with x + y = z, x <= y, least first."""
    values = sorted(set(elements))
    present = set(values)
    for i, x in enumerate(values):
        for y in values[i:]:
            if x + y in present:
                return False, (x, y, x + y)
    return True, None


def census(n):
    """Exact count of sum-free subsets of {1..n}, split by type.

    Backtracking over increasing integers; `forbidden` accumulates all sums
    of chosen pairs as a bit mask, so each node extends only by safe values.
    """
    if n > CENSUS_LIMIT:
        raise SizeLimit("census", CENSUS_LIMIT, n)
    total = odd = top = both = 0
    half = n / 2
    odd_mask = 0
    for j in range(1, n + 1, 2):
        odd_mask |= 1 << j
    top_mask = 0
    for j in range(n, 0, -1):
        if j > half:
            top_mask |= 1 << j
        else:
            break

    stack = [(1, 0, 0)]  # (next value to try, chosen mask, forbidden mask)
    while stack:
        start, chosen, forbidden = stack.pop()
        total += 1
        is_odd = not (chosen & ~odd_mask)
        is_top = not (chosen & ~top_mask)
        odd += is_odd
        top += is_top
        both += is_odd and is_top
        for j in range(start, n + 1):
            if (forbidden >> j) & 1:
                continue
            stack.append(
                (j + 1, chosen | (1 << j), forbidden | (chosen << j) | (1 << (2 * j)))
            )
    ratio = total / (2 ** (n / 2))
    return SumFreeCensus(
        n,
        total,
        odd,
        top,
        both,
        total - odd - top + both,
        ratio,
        Fraction(total * total, 2**n),
    )


def _mix(seed, t=0):
    """splitmix64-style mixing of (seed, trial) into one 64-bit stream id."""
    x = (seed * 0x9E3779B97F4A7C15 + t * 0xBF58476D1CE4E5B9 + 0x94D049BB133111EB) & (
        2**64 - 1
    )
    x ^= x >> 30
    x = (x * 0xBF58476D1CE4E5B9) & (2**64 - 1)
    x ^= x >> 27
    x = (x * 0x94D049BB133111EB) & (2**64 - 1)
    x ^= x >> 31
    return x


def random_sum_free(seed, n_max):
    """One draw from the coin-toss measure, truncated at n_max.

    Scan 1..n_max: an integer already expressible as a sum of two chosen
    elements is excluded outright; otherwise a fair coin decides.  Sum-free
    by construction.
    """
    if n_max > RANDOM_N_LIMIT:
        raise SizeLimit("random_sum_free", RANDOM_N_LIMIT, n_max)
    rng = random.Random(_mix(seed))
    chosen = 0
    forbidden = 0
    for j in range(1, n_max + 1):
        if (forbidden >> j) & 1:
            continue
        if rng.getrandbits(1):
            forbidden |= (chosen << j) | (1 << (2 * j))
            chosen |= 1 << j
    elements = []
    m = chosen
    while m:
        low = m & -m
        elements.append(low.bit_length() - 1)
        m ^= low
    return SumFreeSet(tuple(elements), n_max)


@dataclass(frozen=True)
class DensitySummary:
    trials: int
    n_max: int
    seed: int
    p_no_evens: float
    no_evens_count: int
    mean_density: float
    mean_density_no_evens: float
    histogram: tuple  # ((bin_low, bin_high, count), ...)
    mass_below_sixth: float  # exploratory; no pass/fail semantics


def _density_chunk(args):
    seed, start, stop, n_max = args
    densities = []
    no_evens = []
    for t in range(start, stop):
        s = random_sum_free(_mix(seed, t), n_max)
        densities.append(len(s.elements) / n_max)
        no_evens.append(all(x % 2 for x in s.elements))
    return densities, no_evens


def density_experiment(trials, n_max, seed, bin_width=0.01, workers=1):
    """Per-trial densities of the coin-toss measure, with the no-evens split.

    The histogram uses fixed-width bins over [0, 0.5); the mass below 1/6 is
    reported for inspection only.
    """
    chunks = []
    step = max(1, trials // max(1, workers * 8))
    for start in range(0, trials, step):
        chunks.append((seed, start, min(start + step, trials), n_max))
    if workers > 1:
        from multiprocessing import Pool

        with Pool(workers) as pool:
            parts = pool.map(_density_chunk, chunks)
    else:
        parts = [_density_chunk(c) for c in chunks]
    densities = []
    no_evens = []
    for d, ne in parts:
        densities.extend(d)
        no_evens.extend(ne)
    count_ne = sum(no_evens)
    mean = sum(densities) / trials
    mean_ne = (
        sum(d for d, ne in zip(densities, no_evens) if ne) / count_ne
        if count_ne
        else float("nan")
    )
    nbins = int(0.5 / bin_width) + 1
    counts = [0] * nbins
    for d in densities:
        counts[min(int(d / bin_width), nbins - 1)] += 1
    histogram = tuple(
        (i * bin_width, (i + 1) * bin_width, c) for i, c in enumerate(counts)
    )
    below = sum(1 for d in densities if d < 1 / 6) / trials
    return DensitySummary(
        trials,
        n_max,
        seed,
        count_ne / trials,
        count_ne,
        mean,
        mean_ne,
        histogram,
        below,
    )


def circulant_window(s: SumFreeSet, m):
    """Graph on 0..m-1 joining x and y when |x - y| is an element."""
    if m > WINDOW_LIMIT:
        raise SizeLimit("circulant_window", WINDOW_LIMIT, m)
    diffs = set(s.elements)
    edges = [
        (i, i + d) for d in diffs if d < m for i in range(m - d)
    ]
    return FiniteGraph.from_edges(m, edges)


@dataclass(frozen=True)
class HensonWindowReport:
    k: int
    window: int
    bound: int
    checked: int
    obstructions: tuple  # ((U, V), ...) pairs with no witness within bound
    all_found: bool


def henson_window_check(s: SumFreeSet, k, m, bound):
    """Extension-property scan for the difference graph of a sum-free set.

    For every disjoint U (independent in the graph), V inside the first m
    integers with |U|, |V| <= k, finds the least z <= bound adjacent to all
    of U and none of V.  Candidates come from intersecting the shifted
    element lists (z is adjacent to u iff z = u +- element), which is
    equivalent to the least-first scan but stays cheap when elements are
    huge.  Exhausted pairs are reported as obstruction candidates, not
    disproofs.
    """
    if k > 3 or m > 64:
        raise SizeLimit("henson_window_check", (3, 64), (k, m))
    elements = list(s.elements)
    elem_set = set(elements)

    def adjacent(x, y):
        return abs(x - y) in elem_set

    def candidates(u_set):
        if not u_set:
            return range(bound + 1)
        sets = []
        for u in u_set:
            shifted = {u + e for e in elements if u + e <= bound}
            shifted |= {u - e for e in elements if 0 <= u - e}
            sets.append(shifted)
        common = set.intersection(*sets)
        return sorted(common)

    verts = range(m)
    obstructions = []
    checked = 0
    for su in range(0, k + 1):
        for u_tuple in itertools.combinations(verts, su):
            if any(
                adjacent(a, b) for a, b in itertools.combinations(u_tuple, 2)
            ):
                continue  # only independent U can ever have a common neighbour
            rest = [v for v in verts if v not in u_tuple]
            for sv in range(0, k + 1):
                for v_tuple in itertools.combinations(rest, sv):
                    checked += 1
                    v_set = set(v_tuple)
                    witness = None
                    for z in candidates(set(u_tuple)):
                        if z in u_tuple or z in v_set or z > bound:
                            continue
                        if all(not adjacent(z, v) for v in v_tuple):
                            witness = z
                            break
                    if witness is None:
                        obstructions.append((u_tuple, v_tuple))
    return HensonWindowReport(
        k, m, bound, checked, tuple(obstructions), not obstructions
    )


def greedy_gap_universal(window, k, gap=3):
    """A sum-free set whose difference graph realises every (U, V) demand
    over the first `window` integers with |U| <= k.

    For each subset W of the window (sizes 0..k) a fresh witness z is placed
    beyond `gap` times everything seen so far and the differences z - w
    (w in W) join the set; the gap keeps all old sums below every new
    element, and each z is screened so it misses every window vertex outside
    W.  Gap growth is the knob: gap >= 3 keeps the safety argument local.
    """
    elements = []
    horizon = window

    def sum_free_with(extra):
        return is_sum_free(elements + extra)[0]

    for size in range(0, k + 1):
        for w_tuple in itertools.combinations(range(window), size):
            base = max([horizon] + elements)
            z = gap * base + 1
            while True:
                diffs = sorted(z - w for w in w_tuple)
                others = [v for v in range(window) if v not in w_tuple]
                ok = (
                    all(d not in elements for d in diffs)
                    and sum_free_with(diffs)
                    and all(
                        (z - v) not in set(elements) | set(diffs) for v in others
                    )
                )
                if ok:
                    elements.extend(diffs)
                    elements.sort()
                    horizon = z
                    break
                z += 1
    return SumFreeSet(tuple(elements), horizon)
