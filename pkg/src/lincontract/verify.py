"""Seeded property suites behind ``lincontract verify``.

Each ``*_case`` function checks one seeded instance against the references
in :mod:`lincontract.reference` and returns a list of failure messages, each
carrying enough (seed, alpha) detail to reproduce it.  Empty list = pass.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import reference as ref
from .core import ActionSet, ContractInstance, TableFunction
from .envelope import DemandOracle, all_critical_values, cv_segment
from .generators import GeneratorSpec, generate
from .matching import BipartiteInstance
from .oracles import (
    SupermodularDemand,
    brute_force_demand,
    make_matching_contract_instance,
    matching_demand,
)
from .reductions import (
    matching_to_demand,
    min_perfect_matching,
    one_sided_to_vertex,
    path_to_matching,
    shortest_path_value,
)

# Fixed bound constants for the counting suite.
ONE_SIDED_CONSTANT = 4


def _sample_alphas(seed: int, count: int, max_den: int = 12) -> list[Fraction]:
    rng = np.random.Generator(np.random.PCG64(seed))
    out = []
    for _ in range(count):
        den = int(rng.integers(1, max_den, endpoint=True))
        out.append(Fraction(int(rng.integers(0, den, endpoint=True)), den))
    return out


def _grid(lo: Fraction, hi: Fraction, count: int = 20) -> list[Fraction]:
    return [lo + (hi - lo) * Fraction(j, count - 1) for j in range(count)]


def _sample_points(lo: Fraction, hi: Fraction, lines: set[tuple[Fraction, Fraction]]) -> list[Fraction]:
    """20-point grid plus every kink of ``min(c - alpha*f)`` over ``lines``."""
    kinks = ref.lower_envelope_kinks([(-f, c) for c, f in lines], lo, hi)
    return sorted(set(_grid(lo, hi)) | set(kinks))


def _brute_oracle(inst: ContractInstance) -> DemandOracle:
    return DemandOracle(lambda a: brute_force_demand(inst, a))


# ----------------------------------------------------------------- envelope


def envelope_instance(seed: int) -> ContractInstance:
    return generate(GeneratorSpec("explicit-table", seed=seed, n=1 + seed % 10, max_den=100))


def envelope_case(seed: int) -> list[str]:
    """Enumerated breakpoints match the envelope walk; query count <= 2k + 2."""
    inst = envelope_instance(seed)
    fs, cs = inst.table()
    oracle = _brute_oracle(inst)
    found = cv_segment(oracle, inst, Fraction(0), Fraction(1))
    calls = oracle.calls
    expected = ref.envelope_breakpoints(fs, cs)
    errors = []
    if found != [a for a, _ in expected[1:]]:
        errors.append(f"envelope seed={seed}: got {found}, expected {[a for a, _ in expected[1:]]}")
    else:
        for a, bits in expected:
            if oracle(a).bits != bits:
                errors.append(f"envelope seed={seed} alpha={a}: demanded {oracle(a).bits}, expected {bits}")
    if calls > 2 * len(found) + 2:
        errors.append(f"queries seed={seed}: {calls} distinct queries for k={len(found)}")
    return errors


def envelope_query_stats(seed: int) -> tuple[int, int]:
    inst = envelope_instance(seed)
    oracle = _brute_oracle(inst)
    k = len(cv_segment(oracle, inst, Fraction(0), Fraction(1)))
    return k, oracle.calls


# -------------------------------------------------------------- supermodular


def supermodular_instance(seed: int) -> ContractInstance:
    family = "supermodular-square" if seed % 2 == 0 else "submodular-coverage-cost"
    return generate(GeneratorSpec(family, seed=seed, n=1 + seed % 10))


def supermodular_case(seed: int) -> list[str]:
    """Demanded sets form a chain and there are at most n + 1 breakpoints."""
    inst = supermodular_instance(seed)
    errors = []
    curve = all_critical_values(DemandOracle(SupermodularDemand(inst)), inst)
    plain = all_critical_values(_brute_oracle(inst), inst)
    if curve.breakpoints != plain.breakpoints:
        errors.append(f"supermodular seed={seed}: warm-started curve differs from exhaustive curve")
    if len(curve) > inst.n + 1:
        errors.append(f"supermodular seed={seed}: {len(curve)} breakpoints for n={inst.n}")
    fs, cs = inst.table()
    alphas = sorted(set(_grid(Fraction(0), Fraction(1), 21)) | set(curve.alphas))
    prev = None
    for a in alphas:
        s = ActionSet(inst.n, ref.argmax_demand(fs, cs, a))
        if prev is not None and not prev <= s:
            errors.append(f"supermodular seed={seed} alpha={a}: {prev!r} not contained in {s!r}")
            break
        prev = s
    return errors


# ------------------------------------------------------------------ matching


def matching_instance(seed: int) -> BipartiteInstance:
    tasks, resources = 2 + seed % 3, 2 + (seed // 3) % 3
    edges = 1 + seed % min(10, tasks * resources)
    return generate(GeneratorSpec("matching-random", seed=seed, tasks=tasks, resources=resources, edges=edges, max_den=4))


def edge_subset_instance(g: BipartiteInstance) -> ContractInstance:
    """The edge-subset contract with rewards tabulated by enumeration."""
    ends = g.ends()
    rewards = ref.matching_reward_table(ends, [e.f for e in g.edges])
    costs = ref.additive_table([e.c for e in g.edges])
    return ContractInstance(g.n, TableFunction(g.n, tuple(rewards)), TableFunction(g.n, tuple(costs)))


def matching_case(seed: int) -> list[str]:
    """matching_demand agrees with exhaustive demand at 50 contracts."""
    g = matching_instance(seed)
    inst = edge_subset_instance(g)
    errors = []
    for a in _sample_alphas(seed, 50):
        m = matching_demand(g, a)
        want = brute_force_demand(inst, a)
        if m.to_action_set() != want:
            errors.append(f"matching seed={seed} alpha={a}: got {m.to_action_set()!r}, brute force {want!r}")
        if not m.is_valid():
            errors.append(f"matching seed={seed} alpha={a}: {m.pairs()} is not a matching")
        if any(a * g.edges[i].f - g.edges[i].c < 0 for i in m.edges):
            errors.append(f"matching seed={seed} alpha={a}: negative-weight edge chosen")
    return errors


# ---------------------------------------------------------------- reductions


def path_instance(seed: int):
    return generate(GeneratorSpec("parametric-path-random", seed=seed, n=3 + seed % 6, max_weight=3))


def path_case(seed: int) -> list[str]:
    """Shortest path value equals min perfect matching value after the split."""
    p = path_instance(seed)
    m = path_to_matching(p)
    arcs = [(e.src, e.dst, e.c, e.f) for e in p.edges]
    perfect = ref.perfect_matchings(len(m.tasks), len(m.resources), m.ends())
    lines = {(sum(m.edges[i].c for i in pm), sum(m.edges[i].f for i in pm)) for pm in perfect}
    errors = []
    for a in _sample_points(p.lo, p.hi, lines):
        sp = shortest_path_value(p, a)
        mp = m.matching_weight(min_perfect_matching(m, a).edges, a)
        brute = ref.shortest_path_by_enumeration(p.vertices, p.s, p.t, arcs, a)
        if not sp == mp == brute:
            errors.append(f"path seed={seed} alpha={a}: dijkstra {sp}, matching {mp}, enumeration {brute}")
    return errors


TRANSFORM_CHECKS = ("nonnegative", "reward-bound", "weights", "argmin-argmax", "breakpoints")


def transform_checks(seed: int, size_scaled: bool = False) -> dict[str, list[str]]:
    """Validity of the rescaled instance, failures grouped by property.

    ``argmin-argmax`` asks that the min perfect matchings under the source
    weights be exactly the max perfect matchings under the rescaled weights,
    and that no matching at all does better than them.
    """
    p = path_instance(seed)
    m = path_to_matching(p)
    alpha2, hi = p.lo, p.hi
    g = matching_to_demand(m, alpha2, size_scaled)
    ends = m.ends()
    nl, nr = len(m.tasks), len(m.resources)
    out: dict[str, list[str]] = {k: [] for k in TRANSFORM_CHECKS}
    tag = f"transform seed={seed}" + (" scaled" if size_scaled else "")
    if any(e.f < 0 or e.c < 0 for e in g.edges):
        out["nonnegative"].append(f"{tag}: negative reward or cost")
    if ref.best_matching_value(nl, nr, ends, [e.f for e in g.edges]) > 1:
        out["reward-bound"].append(f"{tag}: a matching earns more than 1")
    for a in (alpha2, hi):
        if any(a * e.f - e.c < 0 for e in g.edges):
            out["weights"].append(f"{tag} alpha={a}: negative agent weight")
    perfect = ref.perfect_matchings(nl, nr, ends)
    src_lines = [(sum(m.edges[i].c for i in pm), sum(m.edges[i].f for i in pm)) for pm in perfect]
    dst_lines = [(sum(g.edges[i].f for i in pm), sum(g.edges[i].c for i in pm)) for pm in perfect]
    bad = out["argmin-argmax"]
    for a in _sample_points(alpha2, hi, set(src_lines)):
        src = [c - a * f for c, f in src_lines]
        dst = [a * f - c for f, c in dst_lines]
        argmin = {pm for pm, w in zip(perfect, src) if w == min(src)}
        argmax = {pm for pm, w in zip(perfect, dst) if w == max(dst)}
        if argmin != argmax:
            bad.append(f"{tag} alpha={a}: optimal perfect matchings differ")
        if min_perfect_matching(m, a).edges not in argmin:
            bad.append(f"{tag} alpha={a}: min_perfect_matching not optimal")
        overall = ref.best_matching_value(nl, nr, ends, [a * e.f - e.c for e in g.edges])
        if overall != max(dst):
            bad.append(f"{tag} alpha={a}: best matching {overall} beats best perfect {max(dst)}")
        chosen = matching_demand(g, a)
        if sum((a * g.edges[i].f - g.edges[i].c for i in chosen.edges), Fraction(0)) != overall:
            bad.append(f"{tag} alpha={a}: demand is not a max-weight matching")
    # critical values inside (alpha2, hi) must be the source breakpoints
    inst = make_matching_contract_instance(g)
    oracle = DemandOracle(lambda x: matching_demand(g, x).to_action_set())
    demand_cvs = [x for x in cv_segment(oracle, inst, alpha2, hi) if x < hi]
    kinks = ref.lower_envelope_kinks([(-f, c) for c, f in src_lines], alpha2, hi)
    if demand_cvs != kinks:
        out["breakpoints"].append(f"{tag}: critical values {demand_cvs} vs matching breakpoints {kinks}")
    return out


def transform_case(seed: int) -> list[str]:
    return [msg for msgs in transform_checks(seed).values() for msg in msgs]


def transform_scaled_case(seed: int) -> list[str]:
    return [msg for msgs in transform_checks(seed, size_scaled=True).values() for msg in msgs]


def one_sided_instance(seed: int) -> BipartiteInstance:
    tasks, resources = 1 + seed % 4, 1 + (seed // 4) % 8
    edges = 1 + seed % min(8, tasks * resources)
    return generate(
        GeneratorSpec("matching-one-sided", seed=seed, tasks=tasks, resources=resources, edges=edges, max_den=6)
    )


def rado_case(seed: int) -> list[str]:
    """Best edge-subset utility equals best resource-subset utility."""
    g = one_sided_instance(seed)
    rado = one_sided_to_vertex(g)
    edge_inst = edge_subset_instance(g)
    vert = rado.to_contract_instance()
    fe, ce = edge_inst.table()
    fv, cv = vert.table()
    errors = []
    for a in _sample_alphas(seed, 20):
        ue = max(a * f - c for f, c in zip(fe, ce))
        uv = max(a * f - c for f, c in zip(fv, cv))
        if ue != uv:
            errors.append(f"rado seed={seed} alpha={a}: edge optimum {ue} vs vertex optimum {uv}")
        t = rado.matched_resources(matching_demand(g, a))
        if a * vert.f(t) - vert.c(t) != uv:
            errors.append(f"rado seed={seed} alpha={a}: matched resources are not a vertex best response")
    return errors


# ------------------------------------------------------------------ counting


def _matching_curve_size(g: BipartiteInstance) -> int:
    g = g if g.normalized else g.normalized_copy()
    inst = make_matching_contract_instance(g)
    oracle = DemandOracle(lambda x: matching_demand(g, x).to_action_set())
    return len(cv_segment(oracle, inst, Fraction(0), Fraction(1)))


def one_sided_count_case(seed: int) -> list[str]:
    g = one_sided_instance(seed)
    n = len(g.resources)
    k = _matching_curve_size(g)
    bound = ONE_SIDED_CONSTANT * n * n
    return [] if k <= bound else [f"one-sided seed={seed}: {k} critical values > {bound} (|U|={n})"]


def integer_instance(seed: int) -> BipartiteInstance:
    tasks, resources = 1 + seed % 3, 1 + (seed // 3) % 4
    edges = 1 + seed % min(8, tasks * resources)
    F, C = 1 + seed % 4, 1 + (seed // 4) % 4
    return generate(
        GeneratorSpec("matching-integer", seed=seed, tasks=tasks, resources=resources, edges=edges, F=F, C=C)
    )


def integer_count_case(seed: int) -> list[str]:
    g = integer_instance(seed)
    F = max(1, max(int(e.f) for e in g.edges))
    C = max(1, max(int(e.c) for e in g.edges))
    bound = (g.n * F * C) ** 3
    k = _matching_curve_size(g)
    return [] if k <= bound else [f"integer seed={seed}: {k} critical values > (nFC)^3 = {bound}"]


def levels_instance(seed: int) -> BipartiteInstance:
    tasks, resources = 2 + seed % 3, 2 + (seed // 3) % 3
    edges = 1 + seed % min(8, tasks * resources)
    return generate(
        GeneratorSpec(
            "matching-random", seed=seed, tasks=tasks, resources=resources, edges=edges, levels=1 + seed % 3, max_den=8
        )
    )


def levels_count_case(seed: int) -> list[str]:
    g = levels_instance(seed)
    k = len({e.f for e in g.edges})
    bound = ref.multiset_bound(g.n, k)
    found = _matching_curve_size(g)
    return [] if found <= bound else [f"levels seed={seed}: {found} critical values > {bound} (k={k})"]


# -------------------------------------------------------------------- runner


@dataclass
class SuiteReport:
    name: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures


SUITES: dict[str, list[tuple[str, Callable[[int], list[str]], int]]] = {
    "envelope": [("envelope", envelope_case, 200)],
    "supermodular": [("supermodular", supermodular_case, 100)],
    "matching": [("matching", matching_case, 100)],
    "reductions": [("path", path_case, 50), ("transform", transform_case, 50), ("transform-scaled", transform_scaled_case, 50), ("rado", rado_case, 50)],
    "counting": [
        ("one-sided", one_sided_count_case, 100),
        ("integer", integer_count_case, 100),
        ("levels", levels_count_case, 100),
    ],
}


def run_cases(name: str, case: Callable[[int], list[str]], count: int, jobs: int = 1) -> SuiteReport:
    start = time.perf_counter()
    seeds = range(count)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(case, seeds))
    else:
        results = [case(s) for s in seeds]
    report = SuiteReport(name, count, [msg for r in results for msg in r])
    report.seconds = time.perf_counter() - start
    return report


def run_suite(suite: str, jobs: int = 1, count: int | None = None) -> list[SuiteReport]:
    if suite not in SUITES:
        raise KeyError(f"unknown suite {suite!r}; expected one of {', '.join(SUITES)}")
    return [run_cases(name, case, count or default, jobs) for name, case, default in SUITES[suite]]
