"""Exact numbers, action sets, set-function oracles and the contract model.

Every quantity in the solver is a :class:`fractions.Fraction`.  Floats are
rejected at the boundary so that tie-breaking between demanded sets is always
decided by exact comparison.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable, Iterator, Sequence, Union

from .errors import ClassViolation, InstanceError

Rational = Fraction
RationalLike = Union[int, str, Fraction]

ZERO = Fraction(0)
ONE = Fraction(1)


def as_rational(x: RationalLike) -> Fraction:
    """Coerce ``x`` to a Fraction without ever passing through a float.

    Accepts ints, Fractions and strings such as ``"3/20"`` or ``"0.15"``
    (decimal strings are read exactly).
    """
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"expected int, Fraction or str, got {type(x).__name__}")


def format_rational(x: Fraction) -> Union[int, str]:
    """JSON form: an int when integral, else ``"p/q"`` in lowest terms."""
    if x.denominator == 1:
        return x.numerator
    return f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------- action sets


@dataclass(frozen=True)
class ActionSet:
    """A subset of the ground set ``{0, ..., n-1}`` stored as a bit vector.

    The canonical order is the numeric value of ``bits``; smaller comes first.
    """

    n: int
    bits: int = 0

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("ground-set size must be nonnegative")
        if self.bits < 0 or self.bits >> self.n:
            raise ValueError(f"bits {self.bits:#x} outside ground set of size {self.n}")

    @classmethod
    def empty(cls, n: int) -> ActionSet:
        return cls(n, 0)

    @classmethod
    def full(cls, n: int) -> ActionSet:
        return cls(n, (1 << n) - 1)

    @classmethod
    def of(cls, n: int, indices: Iterable[int]) -> ActionSet:
        bits = 0
        for i in indices:
            if not 0 <= i < n:
                raise ValueError(f"index {i} outside ground set of size {n}")
            bits |= 1 << i
        return cls(n, bits)

    def indices(self) -> list[int]:
        return [i for i in range(self.n) if self.bits >> i & 1]

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices())

    def __len__(self) -> int:
        return bin(self.bits).count("1")

    def __contains__(self, i: object) -> bool:
        return isinstance(i, int) and 0 <= i < self.n and bool(self.bits >> i & 1)

    def _check(self, other: ActionSet) -> None:
        if other.n != self.n:
            raise ValueError(f"ground sets differ: {self.n} vs {other.n}")

    def __or__(self, other: ActionSet) -> ActionSet:
        self._check(other)
        return ActionSet(self.n, self.bits | other.bits)

    def __and__(self, other: ActionSet) -> ActionSet:
        self._check(other)
        return ActionSet(self.n, self.bits & other.bits)

    def __sub__(self, other: ActionSet) -> ActionSet:
        self._check(other)
        return ActionSet(self.n, self.bits & ~other.bits)

    def __le__(self, other: ActionSet) -> bool:
        """Subset test (not the canonical order; use ``bits`` for that)."""
        self._check(other)
        return self.bits & ~other.bits == 0

    def issubset(self, other: ActionSet) -> bool:
        return self <= other

    def add(self, i: int) -> ActionSet:
        return ActionSet.of(self.n, [*self.indices(), i])

    def to_json(self) -> list[int]:
        return self.indices()

    def __repr__(self) -> str:
        return "{" + ", ".join(map(str, self.indices())) + "}"


def all_subsets(n: int) -> Iterator[ActionSet]:
    for bits in range(1 << n):
        yield ActionSet(n, bits)


# ------------------------------------------------------------ set functions


class SetFunctionOracle:
    """Value oracle ``2^{0..n-1} -> Q``.

    Subclasses implement :meth:`value` on the raw bit mask; callers go through
    ``__call__`` which checks the ground set.
    """

    n: int

    def __call__(self, s: ActionSet) -> Fraction:
        if s.n != self.n:
            raise ValueError(f"set over {s.n} elements passed to oracle over {self.n}")
        return self.value(s.bits)

    def value(self, bits: int) -> Fraction:
        raise NotImplementedError

    def to_json(self) -> dict:
        raise TypeError(f"{type(self).__name__} has no JSON form")


@dataclass(frozen=True, eq=False)
class TableFunction(SetFunctionOracle):
    """Explicit table, ``values[bits]`` for every subset."""

    n: int
    values: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.values) != 1 << self.n:
            raise ValueError(f"table needs {1 << self.n} entries, got {len(self.values)}")
        object.__setattr__(self, "values", tuple(as_rational(v) for v in self.values))

    def value(self, bits: int) -> Fraction:
        return self.values[bits]

    def to_json(self) -> dict:
        return {"type": "table", "values": [format_rational(v) for v in self.values]}

    def __eq__(self, other: object) -> bool:
        return isinstance(other, TableFunction) and (self.n, self.values) == (other.n, other.values)

    def __hash__(self) -> int:
        return hash((self.n, self.values))


@dataclass(frozen=True, eq=False)
class AdditiveFunction(SetFunctionOracle):
    weights: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "weights", tuple(as_rational(w) for w in self.weights))

    @property
    def n(self) -> int:  # type: ignore[override]
        return len(self.weights)

    def value(self, bits: int) -> Fraction:
        return sum((w for i, w in enumerate(self.weights) if bits >> i & 1), ZERO)

    def to_json(self) -> dict:
        return {"type": "additive", "weights": [format_rational(w) for w in self.weights]}

    def __eq__(self, other: object) -> bool:
        return isinstance(other, AdditiveFunction) and self.weights == other.weights

    def __hash__(self) -> int:
        return hash(self.weights)


@dataclass(frozen=True, eq=False)
class SquareOfModular(SetFunctionOracle):
    """``f(S) = (sum_{i in S} w_i / sum_i w_i) ** 2`` for positive integer weights.

    A convex increasing function of a nonnegative modular function, hence
    monotone supermodular, with ``f(full) = 1``.
    """

    weights: tuple[int, ...]

    def __post_init__(self) -> None:
        ws = tuple(self.weights)
        if not ws or any(not isinstance(w, int) or isinstance(w, bool) or w <= 0 for w in ws):
            raise ValueError("square-of-modular weights must be positive integers")
        object.__setattr__(self, "weights", ws)

    @property
    def n(self) -> int:  # type: ignore[override]
        return len(self.weights)

    def value(self, bits: int) -> Fraction:
        part = sum(w for i, w in enumerate(self.weights) if bits >> i & 1)
        return Fraction(part, sum(self.weights)) ** 2

    def to_json(self) -> dict:
        return {"type": "square", "weights": list(self.weights)}

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SquareOfModular) and self.weights == other.weights

    def __hash__(self) -> int:
        return hash(self.weights)


@dataclass(frozen=True, eq=False)
class WeightedCoverage(SetFunctionOracle):
    """``c(S)`` = total weight of universe elements covered by the actions in S.

    ``covers[i]`` lists the universe elements action ``i`` covers.  Monotone
    submodular.
    """

    element_weights: tuple[Fraction, ...]
    covers: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "element_weights", tuple(as_rational(w) for w in self.element_weights))
        object.__setattr__(self, "covers", tuple(frozenset(c) for c in self.covers))
        m = len(self.element_weights)
        if any(w < 0 for w in self.element_weights):
            raise ValueError("coverage weights must be nonnegative")
        for c in self.covers:
            if any(not 0 <= e < m for e in c):
                raise ValueError("cover references an unknown universe element")

    @property
    def n(self) -> int:  # type: ignore[override]
        return len(self.covers)

    def value(self, bits: int) -> Fraction:
        covered: set[int] = set()
        for i, c in enumerate(self.covers):
            if bits >> i & 1:
                covered |= c
        return sum((self.element_weights[e] for e in covered), ZERO)

    def to_json(self) -> dict:
        return {
            "type": "coverage",
            "element_weights": [format_rational(w) for w in self.element_weights],
            "covers": [sorted(c) for c in self.covers],
        }

    def __eq__(self, other: object) -> bool:
        return isinstance(other, WeightedCoverage) and (self.element_weights, self.covers) == (
            other.element_weights,
            other.covers,
        )

    def __hash__(self) -> int:
        return hash((self.element_weights, self.covers))


class FunctionOracle(SetFunctionOracle):
    """Wrap an arbitrary pure callable ``ActionSet -> Fraction``."""

    def __init__(self, n: int, fn: Callable[[ActionSet], Fraction]):
        self.n = n
        self._fn = fn

    def value(self, bits: int) -> Fraction:
        return as_rational(self._fn(ActionSet(self.n, bits)))


# ---------------------------------------------------------- class checks


def _marginal_pairs(n: int) -> Iterator[tuple[int, int, int]]:
    """All (S, a, b) with a < b both outside S, as bit masks."""
    for s in range(1 << n):
        free = [i for i in range(n) if not s >> i & 1]
        for a, b in combinations(free, 2):
            yield s, 1 << a, 1 << b


def is_monotone(fn: SetFunctionOracle) -> bool:
    return all(
        fn.value(s) <= fn.value(s | 1 << i)
        for s in range(1 << fn.n)
        for i in range(fn.n)
        if not s >> i & 1
    )


def is_supermodular(fn: SetFunctionOracle) -> bool:
    """Exhaustive check of ``f(a | S) <= f(a | S + b)`` for all S, a, b.

    The pairwise form is equivalent to the marginal inequality for all
    nested pairs S ⊆ T.
    """
    v = fn.value
    return all(v(s | a) - v(s) <= v(s | a | b) - v(s | b) for s, a, b in _marginal_pairs(fn.n))


def is_submodular(fn: SetFunctionOracle) -> bool:
    v = fn.value
    return all(v(s | a) - v(s) >= v(s | a | b) - v(s | b) for s, a, b in _marginal_pairs(fn.n))


def require_complementary(reward: SetFunctionOracle, cost: SetFunctionOracle) -> None:
    """Raise unless reward is monotone supermodular and cost monotone submodular."""
    if not (is_monotone(reward) and is_supermodular(reward)):
        raise ClassViolation("reward is not monotone supermodular")
    if not (is_monotone(cost) and is_submodular(cost)):
        raise ClassViolation("cost is not monotone submodular")


# ------------------------------------------------------------- the model


@dataclass(frozen=True, eq=False)
class ContractInstance:
    """Ground set of ``n`` actions with a reward oracle and a cost oracle.

    Every oracle answer is range checked: ``reward`` must land in [0, 1] and
    ``cost`` must be nonnegative, otherwise :class:`InstanceError`.
    """

    n: int
    reward: SetFunctionOracle
    cost: SetFunctionOracle
    _table: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.reward.n != self.n or self.cost.n != self.n:
            raise ValueError("oracle ground sets do not match the instance")

    def reward_bits(self, bits: int) -> Fraction:
        f = self.reward.value(bits)
        if not ZERO <= f <= ONE:
            raise InstanceError(f"reward {f} of set {ActionSet(self.n, bits)!r} outside [0, 1]")
        return f

    def cost_bits(self, bits: int) -> Fraction:
        c = self.cost.value(bits)
        if c < 0:
            raise InstanceError(f"cost {c} of set {ActionSet(self.n, bits)!r} is negative")
        return c

    def f(self, s: ActionSet) -> Fraction:
        self._own(s)
        return self.reward_bits(s.bits)

    def c(self, s: ActionSet) -> Fraction:
        self._own(s)
        return self.cost_bits(s.bits)

    def _own(self, s: ActionSet) -> None:
        if s.n != self.n:
            raise ValueError(f"set over {s.n} elements passed to instance over {self.n}")

    def table(self) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
        """Rewards and costs of every subset, indexed by bit mask (memoized)."""
        if "fc" not in self._table:
            size = 1 << self.n
            fs = tuple(self.reward_bits(b) for b in range(size))
            cs = tuple(self.cost_bits(b) for b in range(size))
            self._table["fc"] = (fs, cs)
        return self._table["fc"]

    def to_json(self) -> dict:
        return {"kind": "contract", "n": self.n, "reward": self.reward.to_json(), "cost": self.cost.to_json()}

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ContractInstance) and (self.n, self.reward, self.cost) == (
            other.n,
            other.reward,
            other.cost,
        )

    __hash__ = None  # type: ignore[assignment]


def table_instance(rewards: Sequence[RationalLike], costs: Sequence[RationalLike]) -> ContractInstance:
    """Build an explicit instance from two tables indexed by bit mask."""
    size = len(rewards)
    n = size.bit_length() - 1
    if size != 1 << n or len(costs) != size:
        raise ValueError("tables must have length 2**n")
    return ContractInstance(n, TableFunction(n, tuple(rewards)), TableFunction(n, tuple(costs)))


def agent_utility(inst: ContractInstance, alpha: Fraction, s: ActionSet) -> Fraction:
    """``alpha * f(S) - c(S)``."""
    return alpha * inst.f(s) - inst.c(s)


def principal_utility(inst: ContractInstance, alpha: Fraction, s: ActionSet) -> Fraction:
    """``(1 - alpha) * f(S)``."""
    return (1 - alpha) * inst.f(s)


def demand_key(inst: ContractInstance, alpha: Fraction, s: ActionSet) -> tuple[Fraction, Fraction, int]:
    """Sort key under which the demanded set is the maximum.

    Utility first, then reward (ties go to the principal), then the smaller
    bit vector.
    """
    f = inst.f(s)
    return alpha * f - inst.c(s), f, -s.bits


def demand_compare(inst: ContractInstance, alpha: Fraction, s: ActionSet, t: ActionSet) -> int:
    """+1 if the agent prefers ``s``, -1 if it prefers ``t``, 0 if ``s == t``."""
    ks, kt = demand_key(inst, alpha, s), demand_key(inst, alpha, t)
    return (ks > kt) - (ks < kt)


@dataclass(frozen=True)
class Breakpoint:
    alpha: Fraction
    demanded: ActionSet
    reward_value: Fraction
    cost_value: Fraction
    agent_utility: Fraction
    principal_utility: Fraction

    @classmethod
    def at(cls, inst: ContractInstance, alpha: Fraction, s: ActionSet) -> Breakpoint:
        f, c = inst.f(s), inst.c(s)
        return cls(alpha, s, f, c, alpha * f - c, (1 - alpha) * f)

    def to_json(self) -> dict:
        return {
            "alpha": format_rational(self.alpha),
            "demanded": self.demanded.to_json(),
            "reward": format_rational(self.reward_value),
            "cost": format_rational(self.cost_value),
            "agent_utility": format_rational(self.agent_utility),
            "principal_utility": format_rational(self.principal_utility),
        }
