"""Critical values of a linear contract via demand queries.

The enumerator bisects [alpha, beta] at the indifference point of the two
endpoint demands and stops as soon as the demand at that point already equals
the right endpoint's.  Each critical value costs at most two extra queries.
"""

from __future__ import annotations

import bisect
import csv
import threading
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Callable, Iterable, TextIO

from .core import ActionSet, Breakpoint, ContractInstance, format_rational
from .errors import ContractError, EqualRewardsError


class DemandOracle:
    """Memoizing wrapper around a best-response function ``alpha -> S_alpha``.

    ``calls`` counts distinct contracts queried so far.  The wrapped function
    must be pure and must break ties exactly like
    :func:`lincontract.core.demand_compare`.
    """

    def __init__(self, query: Callable[[Fraction], ActionSet]):
        self._query = query
        self._memo: dict[Fraction, ActionSet] = {}
        self._lock = threading.Lock()

    def __call__(self, alpha: Fraction) -> ActionSet:
        alpha = Fraction(alpha)
        if not 0 <= alpha <= 1:
            raise ValueError(f"contract {alpha} outside [0, 1]")
        with self._lock:
            hit = self._memo.get(alpha)
        if hit is not None:
            return hit
        s = self._query(alpha)
        with self._lock:
            return self._memo.setdefault(alpha, s)

    @property
    def calls(self) -> int:
        return len(self._memo)

    def queried(self) -> list[Fraction]:
        with self._lock:
            return sorted(self._memo)

    def reset(self) -> None:
        with self._lock:
            self._memo.clear()


def indifference_point(fa: Fraction, ca: Fraction, fb: Fraction, cb: Fraction) -> Fraction:
    """Contract at which ``alpha*fa - ca == alpha*fb - cb``."""
    if fa == fb:
        raise EqualRewardsError(f"both sets have reward {fa}; the lines never cross")
    return (ca - cb) / (fa - fb)


def cv_segment(oracle: DemandOracle, inst: ContractInstance, alpha: Fraction, beta: Fraction) -> list[Fraction]:
    """All critical values in the half-open segment ``(alpha, beta]``, sorted.

    A returned value ``g`` is a point where the demand differs from the demand
    just to its left.  Uses an explicit stack, so deep recursion trees on
    instances with many critical values are fine.
    """
    alpha, beta = Fraction(alpha), Fraction(beta)
    if not 0 <= alpha < beta <= 1:
        raise ValueError(f"need 0 <= alpha < beta <= 1, got ({alpha}, {beta}]")
    found: list[Fraction] = []
    stack = [(alpha, beta)]
    while stack:
        a, b = stack.pop()
        sa, sb = oracle(a), oracle(b)
        if sa == sb:
            continue
        gamma = indifference_point(inst.f(sa), inst.c(sa), inst.f(sb), inst.c(sb))
        if not a < gamma <= b:
            raise ContractError(
                f"indifference point {gamma} outside ({a}, {b}]: demand oracle is not a best response"
            )
        if oracle(gamma) == sb:
            found.append(gamma)
        else:
            stack.append((gamma, b))
            stack.append((a, gamma))
    found.sort()
    return found


@dataclass(frozen=True)
class ContractCurve:
    """Breakpoints ``alpha_0 = 0 < alpha_1 < ...`` with their demanded sets."""

    breakpoints: tuple[Breakpoint, ...]

    def __len__(self) -> int:
        return len(self.breakpoints)

    def __iter__(self):
        return iter(self.breakpoints)

    @property
    def alphas(self) -> list[Fraction]:
        return [b.alpha for b in self.breakpoints]

    @property
    def critical_values(self) -> list[Fraction]:
        """Breakpoints after ``alpha_0``."""
        return self.alphas[1:]

    def governing(self, alpha: Fraction) -> Breakpoint:
        """The breakpoint whose demanded set is in force at ``alpha``."""
        i = bisect.bisect_right(self.alphas, alpha) - 1
        if i < 0:
            raise ValueError(f"{alpha} precedes the first breakpoint")
        return self.breakpoints[i]

    def to_json(self) -> list[dict]:
        return [b.to_json() for b in self.breakpoints]


def all_critical_values(oracle: DemandOracle, inst: ContractInstance) -> ContractCurve:
    alphas = [Fraction(0), *cv_segment(oracle, inst, Fraction(0), Fraction(1))]
    return ContractCurve(tuple(Breakpoint.at(inst, a, oracle(a)) for a in alphas))


def segment_curve(oracle: DemandOracle, inst: ContractInstance, lo: Fraction, hi: Fraction) -> ContractCurve:
    """Breakpoints inside ``(lo, hi]`` only (``alpha_0`` is not added)."""
    return ContractCurve(tuple(Breakpoint.at(inst, a, oracle(a)) for a in cv_segment(oracle, inst, lo, hi)))


def best_breakpoint(curve: ContractCurve) -> Breakpoint:
    """Highest principal utility; the earliest breakpoint wins ties."""
    best = curve.breakpoints[0]
    for b in curve.breakpoints[1:]:
        if b.principal_utility > best.principal_utility:
            best = b
    return best


def optimal_contract(oracle: DemandOracle, inst: ContractInstance) -> Breakpoint:
    return best_breakpoint(all_critical_values(oracle, inst))


@dataclass(frozen=True)
class CurvePoint:
    alpha: Fraction
    agent_utility: Fraction
    principal_utility: Fraction


def curve_points(curve: ContractCurve, samples: int) -> list[CurvePoint]:
    """Breakpoints plus ``samples`` evenly spaced contracts over [0, 1]."""
    if samples < 2:
        raise ValueError("need at least two samples")
    grid = {Fraction(i, samples - 1) for i in range(samples)}
    points = []
    for a in sorted(grid | set(curve.alphas)):
        bp = curve.governing(a)
        f, c = bp.reward_value, bp.cost_value
        points.append(CurvePoint(a, a * f - c, (1 - a) * f))
    return points


def utility_curve(oracle: DemandOracle, inst: ContractInstance, samples: int) -> list[CurvePoint]:
    return curve_points(all_critical_values(oracle, inst), samples)


def decimal_string(x: Fraction, digits: int = 12) -> str:
    """Round ``x`` to ``digits`` significant digits without touching floats."""
    with localcontext() as ctx:
        ctx.prec = digits
        d = Decimal(x.numerator) / Decimal(x.denominator)
    return format(d.normalize(), "f") if d else "0"


CSV_COLUMNS = ("alpha", "u_agent", "u_principal", "alpha_exact", "u_agent_exact", "u_principal_exact")


def write_curve_csv(points: Iterable[CurvePoint], out: TextIO, digits: int = 12) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for p in points:
        exact = (p.alpha, p.agent_utility, p.principal_utility)
        w.writerow([decimal_string(x, digits) for x in exact] + [str(format_rational(x)) for x in exact])
