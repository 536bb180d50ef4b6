from __future__ import annotations

from fractions import Fraction as Q

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lincontract.core import (
    ActionSet,
    AdditiveFunction,
    Breakpoint,
    ContractInstance,
    SquareOfModular,
    TableFunction,
    WeightedCoverage,
    agent_utility,
    all_subsets,
    as_rational,
    demand_compare,
    format_rational,
    is_monotone,
    is_submodular,
    is_supermodular,
    principal_utility,
    require_complementary,
    table_instance,
)
from lincontract.errors import ClassViolation, InstanceError

E, A1, A2, BOTH = (ActionSet(2, b) for b in range(4))


# -- rationals ---------------------------------------------------------------


def test_as_rational_rejects_floats():
    with pytest.raises(TypeError):
        as_rational(0.5)
    with pytest.raises(TypeError):
        as_rational(True)
    assert as_rational("3/6") == Q(1, 2)


def test_format_rational():
    assert format_rational(Q(4, 2)) == 2
    assert format_rational(Q(-3, 6)) == "-1/2"


@given(st.integers(), st.integers(min_value=1), st.integers(), st.integers(min_value=1))
def test_rational_sum_matches_cross_multiplication(a, b, c, d):
    s = Q(a, b) + Q(c, d)
    assert s * (b * d) == a * d + c * b
    assert s.denominator > 0
    from math import gcd

    assert gcd(s.numerator, s.denominator) == 1


# -- action sets ---------------------------------------------------------------


def test_action_set_algebra():
    s, t = ActionSet.of(4, [0, 2]), ActionSet.of(4, [2, 3])
    assert (s | t).indices() == [0, 2, 3]
    assert (s & t).indices() == [2]
    assert (s - t).indices() == [0]
    assert 2 in s and 1 not in s
    assert len(s) == 2
    assert ActionSet.empty(4) <= s <= ActionSet.full(4)
    assert s.add(1).to_json() == [0, 1, 2]


def test_action_set_rejects_foreign_ground_set():
    with pytest.raises(ValueError):
        ActionSet.of(3, [0]) | ActionSet.of(4, [0])
    with pytest.raises(ValueError):
        ActionSet(2, 4)


def test_all_subsets_in_canonical_order():
    assert [s.bits for s in all_subsets(3)] == list(range(8))


# -- utilities -----------------------------------------------------------------


def test_agent_utility_examples(two_actions):
    assert agent_utility(two_actions, Q(1, 2), A2) == Q(1, 20)
    assert agent_utility(two_actions, Q(3, 10), A1) == Q(1, 100)
    for a in (Q(0), Q(1, 3), Q(1)):
        assert agent_utility(two_actions, a, E) == 0


def test_principal_utility_examples(two_actions):
    assert principal_utility(two_actions, Q(1, 2), A2) == Q(1, 5)
    assert principal_utility(two_actions, Q(1, 4), A1) == Q(3, 20)
    assert all(principal_utility(two_actions, Q(1), s) == 0 for s in all_subsets(2))


def test_demand_compare_examples(two_actions):
    assert demand_compare(two_actions, Q(1, 4), E, A1) == -1
    assert demand_compare(two_actions, Q(0), E, A1) == 1
    assert demand_compare(two_actions, Q(1, 3), A2, A2) == 0


def test_demand_compare_third_key_prefers_smaller_bits():
    inst = table_instance([0, Q(1, 2), Q(1, 2), 1], [0, Q(1, 10), Q(1, 10), 1])
    assert demand_compare(inst, Q(1, 2), A1, A2) == 1


def test_range_violation_raises():
    inst = table_instance([0, 2, 0, 0], [0, 0, 0, 0])
    with pytest.raises(InstanceError):
        agent_utility(inst, Q(1, 2), A1)
    inst = table_instance([0, 0, 0, 0], [0, -1, 0, 0])
    with pytest.raises(InstanceError):
        inst.c(A1)


small_instances = st.integers(min_value=1, max_value=4).flatmap(
    lambda n: st.tuples(
        st.just(n),
        st.lists(st.fractions(0, 1, max_denominator=20), min_size=(1 << n) - 1, max_size=(1 << n) - 1),
        st.lists(st.fractions(0, 2, max_denominator=20), min_size=(1 << n) - 1, max_size=(1 << n) - 1),
    )
)


def _build(data) -> ContractInstance:
    n, fs, cs = data
    return table_instance([0, *fs], [0, *cs])


@given(small_instances, st.fractions(0, 1, max_denominator=50), st.data())
def test_demand_compare_is_a_total_order(data, alpha, draw):
    inst = _build(data)
    n = inst.n
    sets = [ActionSet(n, draw.draw(st.integers(0, (1 << n) - 1))) for _ in range(3)]
    s, t, u = sets
    assert demand_compare(inst, alpha, s, t) == -demand_compare(inst, alpha, t, s)
    assert (demand_compare(inst, alpha, s, t) == 0) == (s == t)
    if demand_compare(inst, alpha, s, t) > 0 and demand_compare(inst, alpha, t, u) > 0:
        assert demand_compare(inst, alpha, s, u) > 0


@given(small_instances, st.fractions(0, 1, max_denominator=50), st.fractions(0, 1, max_denominator=50), st.data())
def test_agent_utility_is_affine(data, a, b, draw):
    inst = _build(data)
    s = ActionSet(inst.n, draw.draw(st.integers(0, (1 << inst.n) - 1)))
    base = agent_utility(inst, Q(0), s)
    assert agent_utility(inst, a, s) == base + a * inst.f(s)
    assert agent_utility(inst, b, s) - agent_utility(inst, a, s) == (b - a) * inst.f(s)


def test_breakpoint_fields(two_actions):
    b = Breakpoint.at(two_actions, Q(1, 2), A2)
    assert b.agent_utility == b.alpha * b.reward_value - b.cost_value
    assert b.principal_utility == (1 - b.alpha) * b.reward_value
    assert b.to_json() == {
        "alpha": "1/2",
        "demanded": [1],
        "reward": "2/5",
        "cost": "3/20",
        "agent_utility": "1/20",
        "principal_utility": "1/5",
    }


# -- set function families --------------------------------------------------------


def test_square_of_modular_example():
    f = SquareOfModular((1, 2, 3))
    assert f(ActionSet.of(3, [0, 1])) == Q(1, 4)
    assert f(ActionSet.full(3)) - f(ActionSet.of(3, [0, 1])) == Q(3, 4)
    assert f(ActionSet.of(3, [2])) - f(ActionSet.empty(3)) == Q(1, 4)
    assert is_monotone(f) and is_supermodular(f)


def test_coverage_is_submodular_and_monotone():
    cov = WeightedCoverage((Q(1, 4), Q(1, 4), Q(1, 2)), (frozenset({0, 1}), frozenset({1, 2}), frozenset({2})))
    assert cov(ActionSet.of(3, [0, 1])) == 1
    assert is_monotone(cov) and is_submodular(cov)
    assert not is_supermodular(cov)


def test_additive_is_modular():
    f = AdditiveFunction((Q(1, 10), Q(1, 5)))
    assert is_submodular(f) and is_supermodular(f)
    assert f(BOTH) == Q(3, 10)


def test_require_complementary_flags_wrong_class():
    sub = WeightedCoverage((Q(1, 2), Q(1, 2)), (frozenset({0}), frozenset({0, 1})))
    with pytest.raises(ClassViolation):
        require_complementary(sub, AdditiveFunction((Q(0), Q(0))))
    require_complementary(SquareOfModular((1, 1)), sub)


def test_table_function_length_checked():
    with pytest.raises(ValueError):
        TableFunction(2, (Q(0), Q(1)))


def test_instance_equality_and_json(two_actions):
    again = table_instance([0, Q(1, 5), Q(2, 5), Q(3, 5)], [0, Q(1, 20), Q(3, 20), Q(3, 10)])
    assert two_actions == again
    assert two_actions.to_json()["reward"] == {"type": "table", "values": [0, "1/5", "2/5", "3/5"]}
