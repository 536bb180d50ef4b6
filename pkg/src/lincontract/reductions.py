"""Parametric shortest path -> min perfect matching -> agent demand, and the
one-sided-cost reformulation over resource vertices.

Parametric weights are affine: ``w_alpha(e) = c_e - alpha * f_e``.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable

from .core import (
    ZERO,
    ActionSet,
    AdditiveFunction,
    ContractInstance,
    SetFunctionOracle,
    as_rational,
    format_rational,
)
from .errors import (
    CostNotOneSidedError,
    NegativeWeightError,
    NoPerfectMatchingError,
    SchemaError,
    UnreachableError,
)
from .matching import BipartiteInstance, Edge, LexWeight, Matching, check_topology, max_weight_matching


@dataclass(frozen=True)
class PathEdge:
    src: Hashable
    dst: Hashable
    c: Fraction
    f: Fraction

    def weight(self, alpha: Fraction) -> Fraction:
        return self.c - alpha * self.f


def _check_range(lo: Fraction, hi: Fraction) -> None:
    if not 0 <= lo < hi:
        raise SchemaError(f"validity range [{lo}, {hi}] must satisfy 0 <= lo < hi")


@dataclass(frozen=True, eq=False)
class ParametricPathInstance:
    """Directed graph with affine edge weights, valid on ``[lo, hi]``."""

    vertices: tuple
    s: Hashable
    t: Hashable
    edges: tuple[PathEdge, ...]
    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "lo", as_rational(self.lo))
        object.__setattr__(self, "hi", as_rational(self.hi))
        edges = tuple(PathEdge(e.src, e.dst, as_rational(e.c), as_rational(e.f)) for e in self.edges)
        object.__setattr__(self, "edges", edges)
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise SchemaError("duplicate vertex name")
        if self.s not in vs or self.t not in vs or self.s == self.t:
            raise SchemaError("s and t must be two distinct listed vertices")
        _check_range(self.lo, self.hi)
        seen = set()
        for e in edges:
            if e.src not in vs or e.dst not in vs:
                raise SchemaError(f"edge ({e.src}, {e.dst}) has an unknown endpoint")
            if e.src == e.dst:
                raise SchemaError(f"self-loop at {e.src}")
            if (e.src, e.dst) in seen:
                raise SchemaError(f"duplicate edge ({e.src}, {e.dst})")
            seen.add((e.src, e.dst))
            if e.c < 0:
                raise SchemaError(f"edge ({e.src}, {e.dst}) has negative constant cost")
            if e.weight(self.lo) < 0 or e.weight(self.hi) < 0:
                raise SchemaError(f"edge ({e.src}, {e.dst}) turns negative inside [{self.lo}, {self.hi}]")

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "s": self.s,
            "t": self.t,
            "edges": [
                {"from": e.src, "to": e.dst, "c": format_rational(e.c), "f": format_rational(e.f)} for e in self.edges
            ],
            "range": [format_rational(self.lo), format_rational(self.hi)],
        }

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ParametricPathInstance) and self.to_json() == other.to_json()

    __hash__ = None  # type: ignore[assignment]


def shortest_path_value(p: ParametricPathInstance, alpha: Fraction) -> Fraction:
    """Exact s-t distance under ``w_alpha`` (Dijkstra)."""
    alpha = Fraction(alpha)
    adj: dict = {v: [] for v in p.vertices}
    for e in p.edges:
        w = e.weight(alpha)
        if w < 0:
            raise NegativeWeightError(f"edge ({e.src}, {e.dst}) has weight {w} at alpha={alpha}")
        adj[e.src].append((e.dst, w))
    order = {v: i for i, v in enumerate(p.vertices)}
    dist = {p.s: ZERO}
    heap = [(ZERO, order[p.s], p.s)]
    done = set()
    while heap:
        d, _, x = heapq.heappop(heap)
        if x in done:
            continue
        if x == p.t:
            return d
        done.add(x)
        for y, w in adj[x]:
            nd = d + w
            if y not in dist or nd < dist[y]:
                dist[y] = nd
                heapq.heappush(heap, (nd, order[y], y))
    raise UnreachableError(f"{p.t} is not reachable from {p.s}")


@dataclass(frozen=True, eq=False)
class ParametricMatchingInstance:
    """Bipartite graph whose edge ``e`` weighs ``c_e - alpha * f_e``.

    ``f`` may be negative here; ``c`` may not.
    """

    tasks: tuple
    resources: tuple
    edges: tuple[Edge, ...]
    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "tasks", tuple(self.tasks))
        object.__setattr__(self, "resources", tuple(self.resources))
        object.__setattr__(self, "lo", as_rational(self.lo))
        object.__setattr__(self, "hi", as_rational(self.hi))
        edges = tuple(Edge(e.v, e.u, as_rational(e.f), as_rational(e.c)) for e in self.edges)
        object.__setattr__(self, "edges", edges)
        check_topology(self.tasks, self.resources, [(e.v, e.u) for e in edges])
        _check_range(self.lo, self.hi)
        for e in edges:
            if e.c < 0:
                raise SchemaError(f"edge ({e.v}, {e.u}) has negative constant cost")
            if self.weight_of(e, self.lo) < 0 or self.weight_of(e, self.hi) < 0:
                raise SchemaError(f"edge ({e.v}, {e.u}) turns negative inside [{self.lo}, {self.hi}]")
        if len(self.tasks) != len(self.resources):
            raise NoPerfectMatchingError("sides have different sizes")
        card = max_weight_matching(self, lambda i, e: LexWeight(Fraction(1)))
        if len(card) != len(self.tasks):
            raise NoPerfectMatchingError("graph has no perfect matching")

    @property
    def n(self) -> int:
        return len(self.edges)

    @staticmethod
    def weight_of(e: Edge, alpha: Fraction) -> Fraction:
        return e.c - alpha * e.f

    def ends(self) -> list[tuple[int, int]]:
        li = {v: i for i, v in enumerate(self.tasks)}
        ri = {u: i for i, u in enumerate(self.resources)}
        return [(li[e.v], ri[e.u]) for e in self.edges]

    def matching_weight(self, edges, alpha: Fraction) -> Fraction:
        return sum((self.weight_of(self.edges[i], alpha) for i in edges), ZERO)

    def to_json(self) -> dict:
        return {
            "tasks": list(self.tasks),
            "resources": list(self.resources),
            "edges": [
                {"v": e.v, "u": e.u, "c": format_rational(e.c), "f": format_rational(e.f)} for e in self.edges
            ],
            "range": [format_rational(self.lo), format_rational(self.hi)],
        }

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ParametricMatchingInstance) and self.to_json() == other.to_json()

    __hash__ = None  # type: ignore[assignment]


def left_copy(x) -> str:
    return f"v:{x}"


def right_copy(x) -> str:
    return f"u:{x}"


def path_to_matching(p: ParametricPathInstance) -> ParametricMatchingInstance:
    """Split every inner vertex ``x`` into ``v:x`` (left) and ``u:x`` (right).

    ``s`` stays on the left and ``t`` on the right.  Edges entering ``s`` or
    leaving ``t`` are dropped; each inner vertex gets a zero-weight edge
    between its two copies so unused vertices can match themselves.
    """
    inner = [x for x in p.vertices if x not in (p.s, p.t)]
    tasks = [p.s, *map(left_copy, inner)]
    resources = [*map(right_copy, inner), p.t]
    if len(set(tasks) | set(resources)) != len(tasks) + len(resources):
        raise SchemaError("vertex names collide after splitting")
    edges = []
    for e in p.edges:
        if e.dst == p.s or e.src == p.t:
            continue
        v = p.s if e.src == p.s else left_copy(e.src)
        u = p.t if e.dst == p.t else right_copy(e.dst)
        edges.append(Edge(v, u, e.f, e.c))
    edges.extend(Edge(left_copy(x), right_copy(x), ZERO, ZERO) for x in inner)
    return ParametricMatchingInstance(tuple(tasks), tuple(resources), tuple(edges), p.lo, p.hi)


def min_perfect_matching(m: ParametricMatchingInstance, alpha: Fraction) -> Matching:
    """Minimum-weight perfect matching at ``alpha``; ties go to the smaller
    bit vector over the canonical edge order."""
    alpha = Fraction(alpha)
    if not m.lo <= alpha <= m.hi:
        raise ValueError(f"alpha={alpha} outside validity range [{m.lo}, {m.hi}]")
    best = max_weight_matching(m, lambda i, e: LexWeight(Fraction(1), -m.weight_of(e, alpha), -(1 << i)))
    if len(best) != len(m.tasks):
        raise NoPerfectMatchingError("graph has no perfect matching")
    return best


def transform_constant(m: ParametricMatchingInstance, alpha2: Fraction, size_scaled: bool = False) -> Fraction:
    """``K = max |f'| + max c' / alpha2``, times the number of tasks if ``size_scaled``.

    The unscaled constant keeps every edge weight nonnegative on
    ``[alpha2, hi]`` but does not stop a non-perfect matching from beating all
    perfect ones.  Scaling by ``|V|`` makes ``alpha * K`` exceed the weight of
    any perfect matching, which restores that guarantee.
    """
    alpha2 = Fraction(alpha2)
    if alpha2 <= 0:
        raise ValueError("alpha2 must be positive")
    if not m.edges:
        raise ValueError("empty graph")
    k = max(abs(e.f) for e in m.edges) + max(e.c for e in m.edges) / alpha2
    return k * len(m.tasks) if size_scaled else k


def matching_to_demand(m: ParametricMatchingInstance, alpha2: Fraction, size_scaled: bool = False) -> BipartiteInstance:
    """Rescale a min-perfect-matching instance into a valid agent instance.

    Each edge gets reward ``(f' + K) / (2K|E|)`` and cost ``c' / (2K|E|)``, so
    rewards and costs are nonnegative, every matching earns at most 1 and all
    agent weights are nonnegative for contracts in ``[alpha2, hi]``.
    """
    k = transform_constant(m, alpha2, size_scaled)
    if k == 0:
        raise ValueError("degenerate instance: all rewards and costs are zero (K = 0)")
    scale = 2 * k * m.n
    edges = tuple(Edge(e.v, e.u, (e.f + k) / scale, e.c / scale) for e in m.edges)
    return BipartiteInstance(m.tasks, m.resources, edges, normalized=True)


class VertexMatchingReward(SetFunctionOracle):
    """``f'(T)`` = best matching using resources in ``T`` and any task."""

    def __init__(self, g: BipartiteInstance):
        self.graph = g
        self.n = len(g.resources)
        self._ri = {u: i for i, u in enumerate(g.resources)}

    def value(self, bits: int) -> Fraction:
        within = 0
        for i, e in enumerate(self.graph.edges):
            if bits >> self._ri[e.u] & 1:
                within |= 1 << i
        return self.graph.max_reward(within=within)


@dataclass(frozen=True, eq=False)
class RadoVertexInstance:
    """One-sided-cost matching instance restated over resource subsets."""

    graph: BipartiteInstance
    vertex_costs: tuple[Fraction, ...]

    @property
    def n(self) -> int:
        return len(self.graph.resources)

    @property
    def reward(self) -> VertexMatchingReward:
        return VertexMatchingReward(self.graph)

    @property
    def cost(self) -> AdditiveFunction:
        return AdditiveFunction(self.vertex_costs)

    def to_contract_instance(self) -> ContractInstance:
        return ContractInstance(self.n, self.reward, self.cost)

    def matched_resources(self, matching: Matching) -> ActionSet:
        ri = {u: i for i, u in enumerate(self.graph.resources)}
        return ActionSet.of(self.n, [ri[self.graph.edges[i].u] for i in matching.edges])


def one_sided_to_vertex(g: BipartiteInstance) -> RadoVertexInstance:
    """Requires every edge at the same resource to share one cost.  Resources
    without edges get cost 0."""
    costs: dict = {}
    for e in g.edges:
        if costs.setdefault(e.u, e.c) != e.c:
            raise CostNotOneSidedError(f"edges at resource {e.u} have different costs")
    return RadoVertexInstance(g, tuple(costs.get(u, ZERO) for u in g.resources))
