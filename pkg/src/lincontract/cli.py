"""``lincontract`` command line.

Exit codes:

* 0  success
* 1  property violation (``verify``, ``enumerate --check``)
* 2  schema error in an instance file or argument
* 3  oracle and instance do not fit together
* 4  a value left its allowed range (rewards outside [0, 1], contracts
  outside [0, 1], a reduction's validity range)
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

from . import serialize
from .core import ContractInstance, TableFunction, format_rational
from .envelope import (
    best_breakpoint,
    curve_points,
    all_critical_values,
    decimal_string,
    segment_curve,
    write_curve_csv,
)
from .errors import (
    ClassViolation,
    ContractError,
    CostNotOneSidedError,
    EqualRewardsError,
    GroundSetTooLarge,
    InstanceError,
    NoPerfectMatchingError,
    NormalizationError,
    OracleMismatch,
    SchemaError,
)
from .generators import FAMILIES, GeneratorSpec, generate
from .matching import BipartiteInstance
from .oracles import ORACLE_KINDS, build_oracle
from .reductions import (
    ParametricMatchingInstance,
    ParametricPathInstance,
    matching_to_demand,
    one_sided_to_vertex,
    path_to_matching,
)
from .verify import SUITES, run_suite

EXIT_OK, EXIT_VIOLATION, EXIT_SCHEMA, EXIT_MISMATCH, EXIT_RANGE = 0, 1, 2, 3, 4


class RangeViolation(ContractError):
    pass


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}")


def _show(x: Fraction, digits: int = 12) -> str:
    """Exact value, plus an approximate decimal when it is not an integer."""
    exact = str(format_rational(x))
    return exact if x.denominator == 1 else f"{exact} (≈ {decimal_string(x, digits)})"


def _emit(payload, out: str | None = None) -> None:
    text = json.dumps(payload, indent=2, ensure_ascii=False) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_with_oracle(args):
    instance = serialize.load_instance(args.file)
    return build_oracle(instance, args.oracle, check=getattr(args, "check", False))


def _breakpoint_table(curve) -> list[str]:
    rows = [f"{'alpha':>14}  {'demanded':<16} {'u_agent':>14} {'u_principal':>14}"]
    for b in curve:
        rows.append(
            f"{str(format_rational(b.alpha)):>14}  {str(b.demanded.to_json()):<16} "
            f"{str(format_rational(b.agent_utility)):>14} {str(format_rational(b.principal_utility)):>14}"
        )
    return rows


def cmd_solve(args) -> int:
    oracle, inst = _load_with_oracle(args)
    curve = all_critical_values(oracle, inst)
    best = best_breakpoint(curve)
    if args.json:
        _emit({"optimal": best.to_json(), "breakpoints": curve.to_json(), "queries": oracle.calls})
        return EXIT_OK
    print(f"alpha* = {format_rational(best.alpha)}, principal utility = {format_rational(best.principal_utility)}")
    print(f"demanded set: {best.demanded.to_json()}")
    print(f"principal utility ≈ {decimal_string(best.principal_utility)}")
    print(f"agent utility = {_show(best.agent_utility)}")
    print(f"{len(curve) - 1} critical values, {oracle.calls} demand queries")
    print("\n".join(_breakpoint_table(curve)))
    return EXIT_OK


def cmd_enumerate(args) -> int:
    lo, hi = args.segment
    if not 0 <= lo < hi <= 1:
        raise RangeViolation(f"segment ({lo}, {hi}] must satisfy 0 <= lo < hi <= 1")
    oracle, inst = _load_with_oracle(args)
    curve = segment_curve(oracle, inst, lo, hi)
    k, q = len(curve), oracle.calls
    ok = q <= 2 * k + 2
    if args.json:
        _emit({"segment": [format_rational(lo), format_rational(hi)], "breakpoints": curve.to_json(), "queries": q})
    else:
        print(f"{k} critical values in ({format_rational(lo)}, {format_rational(hi)}]")
        for b in curve:
            print(f"  alpha = {_show(b.alpha)} -> {b.demanded.to_json()}")
        print(f"distinct demand queries: {q} (bound 2k+2 = {2 * k + 2})")
    if args.check and not ok:
        print(f"query bound violated: {q} > {2 * k + 2}", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_curve(args) -> int:
    oracle, inst = _load_with_oracle(args)
    points = curve_points(all_critical_values(oracle, inst), args.samples)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            write_curve_csv(points, fh, args.precision)
    else:
        write_curve_csv(points, sys.stdout, args.precision)
    return EXIT_OK


def _as_table(inst: ContractInstance) -> ContractInstance:
    fs, cs = inst.table()
    return ContractInstance(inst.n, TableFunction(inst.n, fs), TableFunction(inst.n, cs))


def cmd_reduce(args) -> int:
    instance = serialize.load_instance(args.file)
    if args.kind == "path-to-matching":
        if not isinstance(instance, ParametricPathInstance):
            raise SchemaError("path-to-matching expects a parametric path instance")
        result = path_to_matching(instance)
    elif args.kind == "matching-to-demand":
        if not isinstance(instance, ParametricMatchingInstance):
            raise SchemaError("matching-to-demand expects a parametric matching instance")
        if args.alpha2 is None:
            raise SchemaError("matching-to-demand needs --alpha2")
        if not instance.lo <= args.alpha2 < instance.hi or args.alpha2 <= 0:
            raise RangeViolation(f"alpha2 = {args.alpha2} must be positive and lie in [{instance.lo}, {instance.hi})")
        result = matching_to_demand(instance, args.alpha2, args.size_scaled)
    else:
        if not isinstance(instance, BipartiteInstance):
            raise SchemaError("one-sided-to-vertex expects a matching instance")
        result = _as_table(one_sided_to_vertex(instance).to_contract_instance())
    _emit(result.to_json(), args.out)
    return EXIT_OK


def cmd_gen(args) -> int:
    try:
        spec = GeneratorSpec(
            family=args.family,
            seed=args.seed,
            n=args.n,
            tasks=args.tasks,
            resources=args.resources,
            edges=args.edges,
            max_den=args.max_den,
            max_weight=args.max_weight,
            F=args.F,
            C=args.C,
            levels=args.levels,
        )
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc
    _emit(generate(spec).to_json(), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    reports = run_suite(args.suite, jobs=args.jobs, count=args.count)
    status = EXIT_OK
    for r in reports:
        mark = "PASS" if r.passed else "FAIL"
        print(f"{mark} {r.name}: {r.checked} instances, {len(r.failures)} violations, {r.seconds:.2f}s")
        for msg in r.failures[:10]:
            print(f"  {msg}")
        if len(r.failures) > 10:
            print(f"  ... {len(r.failures) - 10} more")
        if not r.passed:
            status = EXIT_VIOLATION
    return status


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lincontract", description="Exact optimal linear contracts.")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_oracle(p: argparse.ArgumentParser) -> None:
        p.add_argument("file", help="instance JSON")
        p.add_argument("--oracle", choices=ORACLE_KINDS, default="brute")

    p = sub.add_parser("solve", help="optimal contract and breakpoint table")
    with_oracle(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("enumerate", help="critical values in a segment")
    with_oracle(p)
    p.add_argument("--segment", nargs=2, type=_rational, metavar=("LO", "HI"), default=[Fraction(0), Fraction(1)])
    p.add_argument("--check", action="store_true", help="fail unless queries <= 2k+2")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("curve", help="utility curves as CSV")
    with_oracle(p)
    p.add_argument("--samples", type=int, default=101)
    p.add_argument("--csv", metavar="OUT")
    p.add_argument("--precision", type=int, default=12)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("reduce", help="run one reduction step")
    p.add_argument("kind", choices=("path-to-matching", "matching-to-demand", "one-sided-to-vertex"))
    p.add_argument("file")
    p.add_argument("--alpha2", type=_rational)
    p.add_argument("--size-scaled", action="store_true", help="multiply K by the number of tasks")
    p.add_argument("--out")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("gen", help="generate a seeded instance")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--tasks", type=int, default=3)
    p.add_argument("--resources", type=int, default=3)
    p.add_argument("--edges", type=int, default=5)
    p.add_argument("--max-den", type=int, default=100)
    p.add_argument("--max-weight", type=int, default=10)
    p.add_argument("--F", type=int, default=4)
    p.add_argument("--C", type=int, default=4)
    p.add_argument("--levels", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify", help="run a seeded property suite")
    p.add_argument("suite", choices=tuple(SUITES))
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--count", type=int, help="instances per check (default: suite size)")
    p.set_defaults(func=cmd_verify)
    return parser


_EXIT_CODES = (
    ((SchemaError, NoPerfectMatchingError, CostNotOneSidedError), EXIT_SCHEMA),
    ((InstanceError, NormalizationError, RangeViolation), EXIT_RANGE),
    ((OracleMismatch, GroundSetTooLarge, ClassViolation, EqualRewardsError, ContractError), EXIT_MISMATCH),
    ((ValueError,), EXIT_RANGE),
)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ContractError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return next(code for kinds, code in _EXIT_CODES if isinstance(exc, kinds))


if __name__ == "__main__":
    sys.exit(main())
