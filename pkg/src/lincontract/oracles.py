"""Concrete demand oracles.

* :func:`brute_force_demand` scans all ``2**n`` subsets; works for any f, c.
* :func:`matching_demand` solves matching-based instances by a lexicographic
  max-weight matching.
* :func:`supermodular_demand` is the exhaustive oracle specialised to
  supermodular rewards and submodular costs, where demanded sets only grow
  with the contract and the search can start from an earlier answer.
"""

from __future__ import annotations

import bisect
import math
import threading
from fractions import Fraction

from .core import (
    ActionSet,
    AdditiveFunction,
    ContractInstance,
    SetFunctionOracle,
    require_complementary,
)
from .envelope import DemandOracle
from .errors import GroundSetTooLarge, NormalizationError, OracleMismatch
from .matching import BipartiteInstance, Matching, demand_weight, max_weight_matching

DEFAULT_CAP = 24
DEBUG_CHECK_LIMIT = 12


def _scaled_table(inst: ContractInstance) -> tuple[list[int], list[int]]:
    """Rewards and costs of every subset as integers over one common denominator."""
    cache = inst._table
    if "scaled" not in cache:
        fs, cs = inst.table()
        den = math.lcm(*(x.denominator for x in fs), *(x.denominator for x in cs))
        cache["scaled"] = (
            [x.numerator * (den // x.denominator) for x in fs],
            [x.numerator * (den // x.denominator) for x in cs],
        )
    return cache["scaled"]


def _supersets(n: int, lower: int):
    free = ((1 << n) - 1) & ~lower
    sub = free
    while True:
        yield lower | sub
        if sub == 0:
            return
        sub = (sub - 1) & free


def brute_force_demand(
    inst: ContractInstance,
    alpha: Fraction,
    cap: int = DEFAULT_CAP,
    lower: ActionSet | None = None,
) -> ActionSet:
    """The demanded set at ``alpha`` by exhaustive search.

    With ``lower`` given only supersets of it are scanned.
    """
    if inst.n > cap:
        raise GroundSetTooLarge(f"{inst.n} actions exceeds the exhaustive-search cap of {cap}")
    alpha = Fraction(alpha)
    fs, cs = _scaled_table(inst)
    p, q = alpha.numerator, alpha.denominator
    candidates = range(1 << inst.n) if lower is None else _supersets(inst.n, lower.bits)
    best = max(candidates, key=lambda b: (p * fs[b] - q * cs[b], fs[b], -b))
    return ActionSet(inst.n, best)


class MatchingReward(SetFunctionOracle):
    """``f(S)`` = weight of the best matching inside edge set ``S``."""

    def __init__(self, g: BipartiteInstance):
        self.graph = g
        self.n = g.n
        self._memo: dict[int, Fraction] = {}

    def value(self, bits: int) -> Fraction:
        hit = self._memo.get(bits)
        if hit is None:
            hit = self._memo[bits] = self.graph.max_reward(within=bits)
        return hit


def make_matching_contract_instance(g: BipartiteInstance) -> ContractInstance:
    """Edge-subset contract: matching-based reward, additive edge costs."""
    top = g.max_reward()
    if top > 1:
        raise NormalizationError(f"max-weight matching reward {top} exceeds 1")
    return ContractInstance(g.n, MatchingReward(g), AdditiveFunction(tuple(e.c for e in g.edges)))


def matching_demand(g: BipartiteInstance, alpha: Fraction) -> Matching:
    """Best response at ``alpha`` as a matching.

    Edge weights are ``(alpha*f - c, f, -2**i)``: utility, then reward, then
    the canonical set order.  The result is the same set
    :func:`brute_force_demand` picks on the edge-subset instance.
    """
    return max_weight_matching(g, demand_weight(Fraction(alpha)))


def supermodular_demand(
    inst: ContractInstance,
    alpha: Fraction,
    lower: ActionSet | None = None,
    cap: int = DEFAULT_CAP,
    check: bool = False,
) -> ActionSet:
    """Demand for monotone supermodular reward and monotone submodular cost.

    ``lower`` may be the demanded set at any smaller contract; under these
    classes the answer is a superset of it.  ``check=True`` verifies the
    classes exhaustively first (only for ``n <= 12``).
    """
    if check and inst.n <= DEBUG_CHECK_LIMIT:
        require_complementary(inst.reward, inst.cost)
    return brute_force_demand(inst, alpha, cap=cap, lower=lower)


class SupermodularDemand:
    """Callable supermodular oracle that warm-starts from earlier answers."""

    def __init__(self, inst: ContractInstance, cap: int = DEFAULT_CAP, check: bool = False):
        if check and inst.n <= DEBUG_CHECK_LIMIT:
            require_complementary(inst.reward, inst.cost)
        self.inst = inst
        self.cap = cap
        self._alphas: list[Fraction] = []
        self._sets: list[ActionSet] = []
        self._lock = threading.Lock()

    def __call__(self, alpha: Fraction) -> ActionSet:
        alpha = Fraction(alpha)
        with self._lock:
            i = bisect.bisect_right(self._alphas, alpha)
            lower = self._sets[i - 1] if i else None
        s = supermodular_demand(self.inst, alpha, lower=lower, cap=self.cap)
        with self._lock:
            i = bisect.bisect_left(self._alphas, alpha)
            if i == len(self._alphas) or self._alphas[i] != alpha:
                self._alphas.insert(i, alpha)
                self._sets.insert(i, s)
        return s


ORACLE_KINDS = ("brute", "matching", "supermodular")


def build_oracle(instance, kind: str, cap: int = DEFAULT_CAP, check: bool = False) -> tuple[DemandOracle, ContractInstance]:
    """Pair an instance with the named oracle.

    Bipartite instances accept ``matching`` and ``brute`` (the latter over
    edge subsets); set-function instances accept ``brute`` and
    ``supermodular``.
    """
    if isinstance(instance, BipartiteInstance):
        inst = make_matching_contract_instance(instance)
        if kind == "matching":
            g = instance
            return DemandOracle(lambda a: matching_demand(g, a).to_action_set()), inst
        if kind == "brute":
            return DemandOracle(lambda a: brute_force_demand(inst, a, cap=cap)), inst
        raise OracleMismatch(f"oracle {kind!r} does not apply to a bipartite instance")
    if isinstance(instance, ContractInstance):
        if kind == "brute":
            return DemandOracle(lambda a: brute_force_demand(instance, a, cap=cap)), instance
        if kind == "supermodular":
            return DemandOracle(SupermodularDemand(instance, cap=cap, check=check)), instance
        raise OracleMismatch(f"oracle {kind!r} does not apply to a set-function instance")
    raise OracleMismatch(f"no demand oracle for {type(instance).__name__}")
