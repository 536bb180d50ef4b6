"""Bipartite graphs with exact weights and lexicographic max-weight matching."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Hashable, Sequence

from .core import ActionSet, ZERO, as_rational, format_rational
from .errors import NormalizationError, SchemaError


@dataclass(frozen=True, order=True)
class LexWeight:
    """Element of the ordered group Q x Q x Z under lexicographic order.

    ``primary`` is the edge's utility contribution, ``secondary`` its reward
    and ``tiebreak`` settles whatever is still tied (we use ``-2**index`` so
    that the smaller bit vector wins).
    """

    primary: Fraction
    secondary: Fraction = ZERO
    tiebreak: int = 0

    def __add__(self, other: LexWeight) -> LexWeight:
        return LexWeight(self.primary + other.primary, self.secondary + other.secondary, self.tiebreak + other.tiebreak)

    def __sub__(self, other: LexWeight) -> LexWeight:
        return LexWeight(self.primary - other.primary, self.secondary - other.secondary, self.tiebreak - other.tiebreak)

    def __neg__(self) -> LexWeight:
        return LexWeight(-self.primary, -self.secondary, -self.tiebreak)

    def as_tuple(self) -> tuple:
        return (self.primary, self.secondary, self.tiebreak)


@dataclass(frozen=True)
class Edge:
    v: Hashable
    u: Hashable
    f: Fraction
    c: Fraction


@dataclass(frozen=True, eq=False)
class BipartiteInstance:
    """Tasks on the left, resources on the right, one action per edge.

    Edge order is the canonical order: edge ``i`` is bit ``i`` of the
    corresponding :class:`ActionSet`.
    """

    tasks: tuple
    resources: tuple
    edges: tuple[Edge, ...]
    normalized: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "tasks", tuple(self.tasks))
        object.__setattr__(self, "resources", tuple(self.resources))
        edges = tuple(Edge(e.v, e.u, as_rational(e.f), as_rational(e.c)) for e in self.edges)
        object.__setattr__(self, "edges", edges)
        check_topology(self.tasks, self.resources, [(e.v, e.u) for e in edges])
        for e in edges:
            if e.f < 0 or e.c < 0:
                raise SchemaError(f"edge ({e.v}, {e.u}) has a negative reward or cost")
        if self.normalized and self.max_reward() > 1:
            raise NormalizationError(f"max-weight matching reward {self.max_reward()} exceeds 1")

    @property
    def n(self) -> int:
        return len(self.edges)

    def ends(self) -> list[tuple[int, int]]:
        li = {v: i for i, v in enumerate(self.tasks)}
        ri = {u: i for i, u in enumerate(self.resources)}
        return [(li[e.v], ri[e.u]) for e in self.edges]

    def max_reward(self, within: int | None = None) -> Fraction:
        """Weight of the best matching under plain rewards, optionally restricted
        to the edges in bit mask ``within``."""
        m = max_weight_matching(self, lambda i, e: LexWeight(e.f), within=within)
        return sum((self.edges[i].f for i in m.edges), ZERO)

    def normalized_copy(self) -> BipartiteInstance:
        """Scale rewards and costs by the same factor so every matching reward is
        at most 1.  A common positive scale leaves all demands unchanged."""
        top = self.max_reward()
        scale = 1 / top if top > 1 else Fraction(1)
        edges = tuple(Edge(e.v, e.u, e.f * scale, e.c * scale) for e in self.edges)
        return BipartiteInstance(self.tasks, self.resources, edges, normalized=True)

    def to_json(self) -> dict:
        return {
            "tasks": list(self.tasks),
            "resources": list(self.resources),
            "edges": [
                {"v": e.v, "u": e.u, "f": format_rational(e.f), "c": format_rational(e.c)} for e in self.edges
            ],
            "normalized": self.normalized,
        }

    def __eq__(self, other: object) -> bool:
        return isinstance(other, BipartiteInstance) and (self.tasks, self.resources, self.edges, self.normalized) == (
            other.tasks,
            other.resources,
            other.edges,
            other.normalized,
        )

    __hash__ = None  # type: ignore[assignment]


def check_topology(left: Sequence, right: Sequence, pairs: Sequence[tuple]) -> None:
    if len(set(left)) != len(left) or len(set(right)) != len(right):
        raise SchemaError("duplicate vertex name")
    ls, rs = set(left), set(right)
    seen = set()
    for v, u in pairs:
        if v not in ls or u not in rs:
            raise SchemaError(f"edge ({v}, {u}) has an endpoint outside the vertex lists")
        if (v, u) in seen:
            raise SchemaError(f"duplicate edge ({v}, {u})")
        seen.add((v, u))


@dataclass(frozen=True)
class Matching:
    """Edge subset of a graph, given as sorted edge indices."""

    graph: object
    edges: tuple[int, ...]

    def to_action_set(self) -> ActionSet:
        return ActionSet.of(len(self.graph.edges), self.edges)

    def is_valid(self) -> bool:
        ends = self.graph.ends()
        ls = [ends[i][0] for i in self.edges]
        rs = [ends[i][1] for i in self.edges]
        return len(set(ls)) == len(ls) and len(set(rs)) == len(rs)

    def pairs(self) -> list[tuple]:
        return [(self.graph.edges[i].v, self.graph.edges[i].u) for i in self.edges]

    def __len__(self) -> int:
        return len(self.edges)


def _add(a: tuple, b: tuple) -> tuple:
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def _sub(a: tuple, b: tuple) -> tuple:
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def max_weight_edges(nl: int, nr: int, ends: Sequence[tuple[int, int]], weights: Sequence[LexWeight]) -> list[int]:
    """Indices of a maximum-weight matching of a bipartite graph.

    Successive augmentation: each round finds the best-gain augmenting path by
    Bellman-Ford over the alternating residual graph and stops once no path
    has positive gain.  Correct over any ordered abelian group, so exact
    lexicographic weights work unchanged.  Edges of nonpositive weight are
    never part of an optimum and are dropped up front.
    """
    zero = (0, 0, 0)
    w = [x.as_tuple() for x in weights]
    usable = [i for i in range(len(ends)) if w[i] > zero]
    mate_l = [-1] * nl
    mate_r = [-1] * nr
    while True:
        dist: list = [zero if mate_l[v] == -1 else None for v in range(nl)]
        pred = [-1] * nl
        for _ in range(nl + 1):
            changed = False
            for e in usable:
                l, r = ends[e]
                m = mate_r[r]
                if dist[l] is None or m == -1 or m == e:
                    continue
                l2 = ends[m][0]
                cand = _sub(_add(dist[l], w[e]), w[m])
                if dist[l2] is None or cand > dist[l2]:
                    dist[l2] = cand
                    pred[l2] = e
                    changed = True
            if not changed:
                break
        else:
            raise RuntimeError("positive alternating cycle: matching was not extreme")
        best, best_e = zero, -1
        for e in usable:
            l, r = ends[e]
            if mate_r[r] == -1 and dist[l] is not None:
                cand = _add(dist[l], w[e])
                if cand > best:
                    best, best_e = cand, e
        if best_e == -1:
            break
        e = best_e
        for _ in range(nl + 1):
            l, r = ends[e]
            old = mate_l[l]
            mate_l[l] = e
            mate_r[r] = e
            if old == -1:
                break
            e = pred[l]
        else:
            raise RuntimeError("augmenting path did not terminate")
    return sorted(e for e in mate_l if e != -1)


def max_weight_matching(
    g,
    weight: Callable[[int, Edge], LexWeight],
    within: int | None = None,
) -> Matching:
    """Maximum-weight matching of ``g`` under ``weight(index, edge)``.

    ``within`` restricts the search to the edges in that bit mask.  Whatever
    ties survive the weight are resolved toward the smaller bit vector only if
    ``weight`` encodes that itself (see :func:`demand_weight`).
    """
    ends = g.ends()
    idx = [i for i in range(len(ends)) if within is None or within >> i & 1]
    sub_w = [weight(i, g.edges[i]) for i in idx]
    chosen = max_weight_edges(len(g.tasks), len(g.resources), [ends[i] for i in idx], sub_w)
    return Matching(g, tuple(sorted(idx[k] for k in chosen)))


def demand_weight(alpha: Fraction) -> Callable[[int, Edge], LexWeight]:
    """Edge weight realising the agent's tie-broken preference at ``alpha``."""
    return lambda i, e: LexWeight(alpha * e.f - e.c, e.f, -(1 << i))


def is_matching(ends: Sequence[tuple[int, int]], bits: int) -> bool:
    ls, rs = set(), set()
    i = 0
    while bits:
        if bits & 1:
            l, r = ends[i]
            if l in ls or r in rs:
                return False
            ls.add(l)
            rs.add(r)
        bits >>= 1
        i += 1
    return True
