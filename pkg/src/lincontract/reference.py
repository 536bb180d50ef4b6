"""Slow, obviously-correct references for cross-checking the solver.

Nothing here calls the enumerator, the matching algorithm or the demand
oracles; everything is exhaustive enumeration over explicit tables.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Sequence

from .matching import is_matching

Line = tuple[Fraction, Fraction]  # (slope, intercept)


def argmax_demand(fs: Sequence[Fraction], cs: Sequence[Fraction], alpha: Fraction) -> int:
    """Bit mask of the tie-broken best response, straight from the definition."""
    return max(range(len(fs)), key=lambda b: (alpha * fs[b] - cs[b], fs[b], -b))


def upper_envelope(lines: Sequence[Line], lo: Fraction, hi: Fraction) -> list[tuple[Fraction, int]]:
    """Walk the upper envelope of ``slope*x + intercept`` over ``[lo, hi]``.

    Returns ``(x, i)`` pairs: line ``i`` is on top from ``x`` on.  The first
    pair is at ``lo``.  Ties at a point go to the larger slope, then the
    smaller index, which mirrors the agent's tie-breaking when lines are
    indexed by bit mask.
    """
    cur = max(range(len(lines)), key=lambda i: (lines[i][0] * lo + lines[i][1], lines[i][0], -i))
    out = [(lo, cur)]
    while True:
        s0, b0 = lines[cur]
        best = None
        for i, (s, b) in enumerate(lines):
            if s > s0:
                key = ((b0 - b) / (s - s0), -s, i)
                if best is None or key < best:
                    best = key
        if best is None or best[0] > hi:
            return out
        cur = best[2]
        out.append((best[0], cur))


def envelope_breakpoints(fs: Sequence[Fraction], cs: Sequence[Fraction]) -> list[tuple[Fraction, int]]:
    """All ``(alpha_i, demanded bits)`` on [0, 1] including ``alpha_0 = 0``."""
    return upper_envelope([(f, -c) for f, c in zip(fs, cs)], Fraction(0), Fraction(1))


def pairwise_breakpoints(fs: Sequence[Fraction], cs: Sequence[Fraction]) -> list[Fraction]:
    """Critical values in (0, 1] by intersecting every pair of lines.

    A candidate counts when the demand there differs from the demand halfway
    back to the previous candidate.  Quadratic in ``2**n``; small n only.
    """
    cands = {Fraction(0), Fraction(1)}
    size = len(fs)
    for a in range(size):
        for b in range(a + 1, size):
            if fs[a] != fs[b]:
                g = (cs[a] - cs[b]) / (fs[a] - fs[b])
                if 0 < g <= 1:
                    cands.add(g)
    ordered = sorted(cands)
    return [
        g
        for prev, g in zip(ordered, ordered[1:])
        if argmax_demand(fs, cs, g) != argmax_demand(fs, cs, (prev + g) / 2)
    ]


def matching_reward_table(ends: Sequence[tuple[int, int]], rewards: Sequence[Fraction]) -> list[Fraction]:
    """``f(S)`` for every edge mask: best matching contained in ``S``."""
    m = len(ends)
    table = [Fraction(0)] * (1 << m)
    for s in range(1, 1 << m):
        best = max(table[s & ~(1 << i)] for i in range(m) if s >> i & 1)
        if is_matching(ends, s):
            best = max(best, sum((rewards[i] for i in range(m) if s >> i & 1), Fraction(0)))
        table[s] = best
    return table


def additive_table(weights: Sequence[Fraction]) -> list[Fraction]:
    m = len(weights)
    table = [Fraction(0)] * (1 << m)
    for s in range(1, 1 << m):
        low = (s & -s).bit_length() - 1
        table[s] = table[s & (s - 1)] + weights[low]
    return table


def perfect_matchings(nl: int, nr: int, ends: Sequence[tuple[int, int]]) -> list[tuple[int, ...]]:
    """Every perfect matching, as sorted edge-index tuples (backtracking)."""
    if nl != nr:
        return []
    by_left: list[list[int]] = [[] for _ in range(nl)]
    for i, (l, _) in enumerate(ends):
        by_left[l].append(i)
    out: list[tuple[int, ...]] = []
    used = [False] * nr
    chosen: list[int] = []

    def rec(l: int) -> None:
        if l == nl:
            out.append(tuple(sorted(chosen)))
            return
        for i in by_left[l]:
            r = ends[i][1]
            if not used[r]:
                used[r] = True
                chosen.append(i)
                rec(l + 1)
                chosen.pop()
                used[r] = False

    rec(0)
    return out


def best_matching_value(nl: int, nr: int, ends: Sequence[tuple[int, int]], weights: Sequence[Fraction]) -> Fraction:
    """Max total weight over all matchings (empty allowed), by DP over the set
    of used right vertices."""
    by_left: list[list[int]] = [[] for _ in range(nl)]
    for i, (l, _) in enumerate(ends):
        by_left[l].append(i)
    dp = {0: Fraction(0)}
    for l in range(nl):
        nxt = dict(dp)
        for mask, val in dp.items():
            for i in by_left[l]:
                r = ends[i][1]
                if not mask >> r & 1:
                    key = mask | 1 << r
                    cand = val + weights[i]
                    if key not in nxt or cand > nxt[key]:
                        nxt[key] = cand
        dp = nxt
    return max(dp.values())


def shortest_path_by_enumeration(vertices, s, t, arcs: Sequence[tuple], alpha: Fraction) -> Fraction | None:
    """Minimum over all simple s-t paths; ``arcs`` are ``(src, dst, c, f)``."""
    out: dict = {v: [] for v in vertices}
    for a, b, c, f in arcs:
        out[a].append((b, c - alpha * f))
    best: list[Fraction | None] = [None]

    def dfs(x, seen, dist) -> None:
        if x == t:
            if best[0] is None or dist < best[0]:
                best[0] = dist
            return
        for y, w in out[x]:
            if y not in seen:
                dfs(y, seen | {y}, dist + w)

    dfs(s, {s}, Fraction(0))
    return best[0]


def lower_envelope_kinks(lines: Sequence[Line], lo: Fraction, hi: Fraction) -> list[Fraction]:
    """Points in the open interval (lo, hi) where min of the lines changes slope."""
    neg = [(-s, -b) for s, b in lines]
    return [x for x, _ in upper_envelope(neg, lo, hi)[1:] if x < hi]


def multiset_bound(n: int, k: int) -> int:
    """``sum_{j=1..n} C(j+k-1, j)``: distinct sums of j values from k levels."""
    return sum(comb(j + k - 1, j) for j in range(1, n + 1))
