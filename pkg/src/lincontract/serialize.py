"""JSON schemas for instances.

Rationals are integers or ``"p/q"`` strings; JSON floats are refused.
Instance kind is recognised from its keys:

* ``{"kind": "contract", "n", "reward", "cost"}`` - set-function instance
* ``{"tasks", "resources", "edges", "normalized"?}`` - matching instance
* ``{"tasks", "resources", "edges", "range"}`` - parametric matching instance
* ``{"vertices", "s", "t", "edges", "range"}`` - parametric path instance
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .core import (
    AdditiveFunction,
    ContractInstance,
    SetFunctionOracle,
    SquareOfModular,
    TableFunction,
    WeightedCoverage,
)
from .errors import SchemaError
from .matching import BipartiteInstance, Edge
from .reductions import ParametricMatchingInstance, ParametricPathInstance, PathEdge


def parse_rational(x: Any) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise SchemaError(f"expected an integer or a 'p/q' string, got {x!r}")
    try:
        return Fraction(x.strip()) if isinstance(x, str) else Fraction(x)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad rational {x!r}") from exc


def _vertex(x: Any):
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise SchemaError(f"vertex names must be strings or integers, got {x!r}")
    return x


def parse_set_function(d: Any, n: int) -> SetFunctionOracle:
    if not isinstance(d, dict) or "type" not in d:
        raise SchemaError("set function must be an object with a 'type'")
    kind = d["type"]
    if kind == "table":
        values = d["values"]
        if not isinstance(values, list) or len(values) != 1 << n:
            raise SchemaError(f"table needs exactly {1 << n} values")
        return TableFunction(n, tuple(parse_rational(v) for v in values))
    if kind == "additive":
        fn = AdditiveFunction(tuple(parse_rational(v) for v in d["weights"]))
    elif kind == "square":
        ws = d["weights"]
        if not all(isinstance(w, int) and not isinstance(w, bool) for w in ws):
            raise SchemaError("square weights must be integers")
        fn = SquareOfModular(tuple(ws))
    elif kind == "coverage":
        fn = WeightedCoverage(
            tuple(parse_rational(v) for v in d["element_weights"]),
            tuple(frozenset(c) for c in d["covers"]),
        )
    else:
        raise SchemaError(f"unknown set function type {kind!r}")
    if fn.n != n:
        raise SchemaError(f"{kind} function has {fn.n} actions, instance has {n}")
    return fn


def _edges(d: dict) -> list[Edge]:
    return [Edge(_vertex(e["v"]), _vertex(e["u"]), parse_rational(e["f"]), parse_rational(e["c"])) for e in d["edges"]]


def _range(d: dict) -> tuple[Fraction, Fraction]:
    r = d["range"]
    if not isinstance(r, list) or len(r) != 2:
        raise SchemaError("range must be a two-element array")
    return parse_rational(r[0]), parse_rational(r[1])


def instance_from_json(d: Any):
    """Build whichever instance ``d`` describes."""
    if not isinstance(d, dict):
        raise SchemaError("instance must be a JSON object")
    try:
        if d.get("kind") == "contract" or ("reward" in d and "cost" in d):
            n = d["n"]
            if isinstance(n, bool) or not isinstance(n, int) or n < 0:
                raise SchemaError("n must be a nonnegative integer")
            return ContractInstance(n, parse_set_function(d["reward"], n), parse_set_function(d["cost"], n))
        if "vertices" in d:
            edges = [
                PathEdge(_vertex(e["from"]), _vertex(e["to"]), parse_rational(e["c"]), parse_rational(e["f"]))
                for e in d["edges"]
            ]
            lo, hi = _range(d)
            verts = [_vertex(v) for v in d["vertices"]]
            return ParametricPathInstance(tuple(verts), _vertex(d["s"]), _vertex(d["t"]), tuple(edges), lo, hi)
        if "tasks" in d:
            tasks = tuple(_vertex(v) for v in d["tasks"])
            resources = tuple(_vertex(u) for u in d["resources"])
            if "range" in d:
                lo, hi = _range(d)
                return ParametricMatchingInstance(tasks, resources, tuple(_edges(d)), lo, hi)
            normalized = d.get("normalized", False)
            if not isinstance(normalized, bool):
                raise SchemaError("normalized must be a boolean")
            return BipartiteInstance(tasks, resources, tuple(_edges(d)), normalized)
    except SchemaError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"malformed instance: {exc}") from exc
    raise SchemaError("unrecognised instance: expected a contract, matching or path object")


def dumps(obj) -> str:
    payload = obj.to_json() if hasattr(obj, "to_json") else obj
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def loads(text: str):
    try:
        return instance_from_json(json.loads(text))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from exc


def load_instance(path: str | Path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    return loads(text)


def save_instance(obj, path: str | Path) -> None:
    Path(path).write_text(dumps(obj), encoding="utf-8")
