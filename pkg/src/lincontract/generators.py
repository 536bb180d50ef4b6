"""Seeded instance generators.

Randomness comes from numpy's PCG64 bit generator seeded with the 64-bit
seed of the :class:`GeneratorSpec`, so a spec always yields the same
instance.  Random rationals are drawn as ``num/den`` with ``den <= max_den``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import (
    AdditiveFunction,
    ContractInstance,
    SquareOfModular,
    TableFunction,
    WeightedCoverage,
)
from .matching import BipartiteInstance, Edge
from .reductions import ParametricPathInstance, PathEdge

FAMILIES = (
    "explicit-table",
    "supermodular-square",
    "submodular-coverage-cost",
    "matching-random",
    "matching-one-sided",
    "matching-integer",
    "parametric-path-random",
)


@dataclass(frozen=True)
class GeneratorSpec:
    family: str
    seed: int = 0
    n: int = 3  # actions, or vertices for parametric paths
    tasks: int = 3
    resources: int = 3
    edges: int = 5
    max_den: int = 100
    max_weight: int = 10
    F: int = 4
    C: int = 4
    levels: int | None = None  # distinct edge rewards for matching-random
    edge_percent: int = 40  # parametric paths: chance of each arc

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {', '.join(FAMILIES)}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.n < 1 or self.max_den < 1 or self.max_weight < 1:
            raise ValueError("sizes and bounds must be positive")
        if self.family.startswith("matching"):
            if self.tasks < 1 or self.resources < 1:
                raise ValueError("need at least one task and one resource")
            if not 1 <= self.edges <= self.tasks * self.resources:
                raise ValueError(f"edge count must lie in [1, {self.tasks * self.resources}]")
        if self.family == "matching-integer" and (self.F < 1 or self.C < 0):
            raise ValueError("integer bounds need F >= 1 and C >= 0")
        if self.levels is not None and self.levels < 1:
            raise ValueError("levels must be positive")
        if self.family == "parametric-path-random" and self.n < 2:
            raise ValueError("a path instance needs at least s and t")


class _Draw:
    def __init__(self, seed: int):
        self.rng = np.random.Generator(np.random.PCG64(seed))

    def int(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi]."""
        return int(self.rng.integers(lo, hi, endpoint=True))

    def frac(self, max_den: int, lo_num: int = 0) -> Fraction:
        """Random rational in [0, 1] (or (0, 1] with ``lo_num=1``)."""
        den = self.int(1, max_den)
        return Fraction(self.int(lo_num, den), den)

    def pairs(self, a: int, b: int, k: int) -> list[tuple[int, int]]:
        picks = self.rng.choice(a * b, size=k, replace=False)
        return sorted((int(p) // b, int(p) % b) for p in picks)


def _table(spec: GeneratorSpec, d: _Draw) -> ContractInstance:
    # c <= f per subset keeps every set potentially profitable for some alpha <= 1
    rewards, costs = [Fraction(0)], [Fraction(0)]
    for _ in range(1, 1 << spec.n):
        den = d.int(1, spec.max_den)
        fn = d.int(0, den)
        rewards.append(Fraction(fn, den))
        costs.append(Fraction(d.int(0, fn), den))
    return ContractInstance(spec.n, TableFunction(spec.n, tuple(rewards)), TableFunction(spec.n, tuple(costs)))


def _square_weights(spec: GeneratorSpec, d: _Draw) -> SquareOfModular:
    return SquareOfModular(tuple(d.int(1, spec.max_weight) for _ in range(spec.n)))


def _supermodular(spec: GeneratorSpec, d: _Draw) -> ContractInstance:
    reward = _square_weights(spec, d)
    cost = AdditiveFunction(tuple(Fraction(d.int(0, spec.max_den), spec.max_den * spec.n) for _ in range(spec.n)))
    return ContractInstance(spec.n, reward, cost)


def _coverage(spec: GeneratorSpec, d: _Draw) -> ContractInstance:
    reward = _square_weights(spec, d)
    m = spec.n + 2
    weights = tuple(Fraction(d.int(1, spec.max_den), spec.max_den * m) for _ in range(m))
    covers = []
    for _ in range(spec.n):
        c = {e for e in range(m) if d.int(0, 2) == 0}
        covers.append(frozenset(c or {d.int(0, m - 1)}))
    return ContractInstance(spec.n, reward, WeightedCoverage(weights, tuple(covers)))


def _names(spec: GeneratorSpec) -> tuple[list[str], list[str]]:
    return [f"v{i + 1}" for i in range(spec.tasks)], [f"u{j + 1}" for j in range(spec.resources)]


def _matching(spec: GeneratorSpec, d: _Draw, one_sided: bool = False) -> BipartiteInstance:
    tasks, resources = _names(spec)
    pairs = d.pairs(spec.tasks, spec.resources, spec.edges)
    levels = None
    if spec.levels is not None:
        levels = sorted({d.frac(spec.max_den, 1) for _ in range(4 * spec.levels)})[: spec.levels]
    side_cost = [d.frac(spec.max_den) / 2 for _ in resources]
    edges = []
    for i, j in pairs:
        f = levels[d.int(0, len(levels) - 1)] if levels else d.frac(spec.max_den)
        c = side_cost[j] if one_sided else d.frac(spec.max_den) / 2
        edges.append(Edge(tasks[i], resources[j], f, c))
    return BipartiteInstance(tasks, resources, edges).normalized_copy()


def _matching_integer(spec: GeneratorSpec, d: _Draw) -> BipartiteInstance:
    tasks, resources = _names(spec)
    edges = [
        Edge(tasks[i], resources[j], Fraction(d.int(0, spec.F)), Fraction(d.int(0, spec.C)))
        for i, j in d.pairs(spec.tasks, spec.resources, spec.edges)
    ]
    return BipartiteInstance(tasks, resources, edges)


def _path(spec: GeneratorSpec, d: _Draw) -> ParametricPathInstance:
    inner = [f"x{i + 1}" for i in range(spec.n - 2)]
    vertices = ["s", *inner, "t"]
    lo = Fraction(d.int(1, 4), 10)
    hi = min(Fraction(1), lo + Fraction(d.int(2, 8), 10))
    arcs = [(a, b) for a in vertices for b in vertices if a != b and d.int(0, 99) < spec.edge_percent]
    if not _reaches(arcs, "s", "t"):
        spine = zip(["s", *inner], [*inner, "t"])
        arcs += [a for a in spine if a not in set(arcs)]
    edges = []
    for a, b in sorted(arcs, key=lambda ab: (vertices.index(ab[0]), vertices.index(ab[1]))):
        f = Fraction(d.int(-spec.max_weight, spec.max_weight), d.int(1, 4))
        c = max(Fraction(0), hi * f) + d.frac(4)
        edges.append(PathEdge(a, b, c, f))
    return ParametricPathInstance(tuple(vertices), "s", "t", tuple(edges), lo, hi)


def _reaches(arcs, s, t) -> bool:
    seen, todo = {s}, [s]
    while todo:
        x = todo.pop()
        for a, b in arcs:
            if a == x and b not in seen:
                seen.add(b)
                todo.append(b)
    return t in seen


def generate(spec: GeneratorSpec):
    """Build the instance described by ``spec``."""
    d = _Draw(spec.seed)
    fam = spec.family
    if fam == "explicit-table":
        return _table(spec, d)
    if fam == "supermodular-square":
        return _supermodular(spec, d)
    if fam == "submodular-coverage-cost":
        return _coverage(spec, d)
    if fam == "matching-random":
        return _matching(spec, d)
    if fam == "matching-one-sided":
        return _matching(spec, d, one_sided=True)
    if fam == "matching-integer":
        return _matching_integer(spec, d)
    return _path(spec, d)
