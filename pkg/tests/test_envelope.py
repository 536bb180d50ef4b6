from __future__ import annotations

import io
import threading
from fractions import Fraction as Q

import pytest

from lincontract import reference as ref
from lincontract.core import ActionSet, principal_utility, table_instance
from lincontract.envelope import (
    CSV_COLUMNS,
    ContractCurve,
    DemandOracle,
    all_critical_values,
    best_breakpoint,
    cv_segment,
    decimal_string,
    indifference_point,
    optimal_contract,
    segment_curve,
    utility_curve,
    write_curve_csv,
)
from lincontract.errors import ContractError, EqualRewardsError
from lincontract.generators import GeneratorSpec, generate
from lincontract.oracles import brute_force_demand


def brute(inst) -> DemandOracle:
    return DemandOracle(lambda a: brute_force_demand(inst, a))


def test_indifference_point_examples():
    assert indifference_point(Q(0), Q(0), Q(1, 5), Q(1, 20)) == Q(1, 4)
    assert indifference_point(Q(0), Q(0), Q(1), Q(1)) == 1
    assert indifference_point(Q(1, 5), Q(1, 20), Q(2, 5), Q(3, 20)) == Q(1, 2)
    with pytest.raises(EqualRewardsError):
        indifference_point(Q(1, 2), Q(0), Q(1, 2), Q(1))


def test_two_actions_critical_values(two_actions):
    assert cv_segment(brute(two_actions), two_actions, Q(0), Q(1)) == [Q(1, 4), Q(1, 2), Q(3, 4)]


def test_two_actions_curve(two_actions):
    curve = all_critical_values(brute(two_actions), two_actions)
    assert curve.alphas == [0, Q(1, 4), Q(1, 2), Q(3, 4)]
    assert [b.demanded.indices() for b in curve] == [[], [0], [1], [0, 1]]


def test_two_actions_optimum(two_actions):
    best = optimal_contract(brute(two_actions), two_actions)
    assert (best.alpha, best.principal_utility) == (Q(1, 2), Q(1, 5))


def test_zero_cost_instance(zero_cost):
    oracle = brute(zero_cost)
    assert cv_segment(oracle, zero_cost, Q(0), Q(1)) == []
    curve = all_critical_values(oracle, zero_cost)
    assert len(curve) == 1 and curve.breakpoints[0].demanded == ActionSet.full(2)
    best = best_breakpoint(curve)
    assert best.alpha == 0 and best.principal_utility == Q(3, 5)


@pytest.mark.parametrize("seed", range(20))
def test_random_n3_matches_envelope(seed):
    inst = generate(GeneratorSpec("explicit-table", seed=seed, n=3))
    fs, cs = inst.table()
    expected = ref.envelope_breakpoints(fs, cs)
    curve = all_critical_values(brute(inst), inst)
    assert [(b.alpha, b.demanded.bits) for b in curve] == expected
    assert curve.critical_values == ref.pairwise_breakpoints(fs, cs)
    top = max(expected, key=lambda p: (principal_utility(inst, p[0], ActionSet(3, p[1])), -p[0]))
    assert optimal_contract(brute(inst), inst).alpha == top[0]


@pytest.mark.parametrize("seed", range(20))
def test_curve_monotone_and_bounded_queries(seed):
    inst = generate(GeneratorSpec("explicit-table", seed=seed, n=4))
    oracle = brute(inst)
    ks = cv_segment(oracle, inst, Q(0), Q(1))
    assert oracle.calls <= 2 * len(ks) + 2
    curve = all_critical_values(brute(inst), inst)
    pairs = list(zip(curve.breakpoints, curve.breakpoints[1:]))
    assert all(a.reward_value < b.reward_value and a.cost_value < b.cost_value for a, b in pairs)
    assert all(a.agent_utility <= b.agent_utility for a, b in pairs)


@pytest.mark.parametrize("seed", range(10))
def test_no_midpoint_beats_breakpoints(seed):
    inst = generate(GeneratorSpec("explicit-table", seed=seed, n=3))
    oracle = brute(inst)
    curve = all_critical_values(oracle, inst)
    best = best_breakpoint(curve).principal_utility
    xs = [*curve.alphas, Q(1)]
    for a, b in zip(xs, xs[1:]):
        for t in range(1, 10):
            m = a + (b - a) * Q(t, 10)
            assert principal_utility(inst, m, oracle(m)) <= best


def test_subsegment_is_half_open(two_actions):
    oracle = brute(two_actions)
    assert cv_segment(oracle, two_actions, Q(1, 4), Q(1, 2)) == [Q(1, 2)]
    assert cv_segment(oracle, two_actions, Q(0), Q(1, 5)) == []
    assert segment_curve(oracle, two_actions, Q(1, 3), Q(1)).alphas == [Q(1, 2), Q(3, 4)]


def test_segment_bounds_checked(two_actions):
    with pytest.raises(ValueError):
        cv_segment(brute(two_actions), two_actions, Q(1, 2), Q(1, 2))
    with pytest.raises(ValueError):
        cv_segment(brute(two_actions), two_actions, Q(0), Q(2))


def test_broken_oracle_detected(two_actions):
    # always answers the empty set except at 1: gamma lands outside the segment
    bad = DemandOracle(lambda a: ActionSet.full(2) if a == 1 else ActionSet.of(2, [1]) if a > Q(9, 10) else ActionSet.empty(2))
    with pytest.raises(ContractError):
        cv_segment(bad, two_actions, Q(0), Q(1))


def test_demand_oracle_memoizes_and_counts():
    seen = []

    def q(a):
        seen.append(a)
        return ActionSet.empty(1)

    o = DemandOracle(q)
    o(Q(1, 2))
    o(Q(2, 4))
    o(Q(1))
    assert o.calls == 2 and len(seen) == 2
    assert o.queried() == [Q(1, 2), Q(1)]
    with pytest.raises(ValueError):
        o(Q(3, 2))
    o.reset()
    assert o.calls == 0


def test_demand_oracle_thread_safe(two_actions):
    o = brute(two_actions)
    alphas = [Q(i, 40) for i in range(41)]
    threads = [threading.Thread(target=lambda: [o(a) for a in alphas]) for _ in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert o.calls == 41


def test_governing(two_actions):
    curve = all_critical_values(brute(two_actions), two_actions)
    assert curve.governing(Q(3, 5)).alpha == Q(1, 2)
    assert curve.governing(Q(1, 2)).alpha == Q(1, 2)
    assert isinstance(curve, ContractCurve)


def test_utility_curve_examples(two_actions):
    pts = utility_curve(brute(two_actions), two_actions, 5)
    assert (Q(1, 2), Q(1, 20), Q(1, 5)) in [(p.alpha, p.agent_utility, p.principal_utility) for p in pts]
    ends = [p.alpha for p in utility_curve(brute(two_actions), two_actions, 2)]
    assert ends[0] == 0 and ends[-1] == 1
    us = [p.agent_utility for p in utility_curve(brute(two_actions), two_actions, 33)]
    assert us == sorted(us)
    with pytest.raises(ValueError):
        utility_curve(brute(two_actions), two_actions, 1)


def test_csv_export(two_actions):
    buf = io.StringIO()
    write_curve_csv(utility_curve(brute(two_actions), two_actions, 3), buf, digits=4)
    rows = buf.getvalue().splitlines()
    assert rows[0] == ",".join(CSV_COLUMNS)
    assert "0.5,0.05,0.2,1/2,1/20,1/5" in rows


def test_decimal_string():
    assert decimal_string(Q(1, 3)) == "0.333333333333"
    assert decimal_string(Q(2, 3), 3) == "0.667"
    assert decimal_string(Q(0)) == "0"
    assert decimal_string(Q(5, 2)) == "2.5"


def test_curve_json(two_actions):
    data = all_critical_values(brute(two_actions), two_actions).to_json()
    assert [d["alpha"] for d in data] == [0, "1/4", "1/2", "3/4"]
