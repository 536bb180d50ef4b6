from __future__ import annotations

from fractions import Fraction as Q
from pathlib import Path

import pytest

from lincontract.core import table_instance
from lincontract.matching import BipartiteInstance, Edge
from lincontract.reductions import ParametricPathInstance, PathEdge

INSTANCES = Path(__file__).resolve().parent.parent / "instances"


@pytest.fixture
def two_actions():
    """Two actions; bit 0 is the first action, bit 1 the second."""
    return table_instance([0, Q(1, 5), Q(2, 5), Q(3, 5)], [0, Q(1, 20), Q(3, 20), Q(3, 10)])


@pytest.fixture
def zero_cost():
    return table_instance([0, Q(1, 5), Q(2, 5), Q(3, 5)], [0, 0, 0, 0])


@pytest.fixture
def three_edges_raw():
    """Three-edge graph with rewards 2, 2, 1 (not normalized)."""
    return BipartiteInstance(
        ("v1", "v2"),
        ("u1", "u2"),
        (Edge("v1", "u1", Q(2), Q(1, 10)), Edge("v1", "u2", Q(2), Q(1, 5)), Edge("v2", "u1", Q(1), Q(1, 10))),
    )


@pytest.fixture
def three_edges():
    c = Q(1, 10)
    return BipartiteInstance(
        ("v1", "v2"),
        ("u1", "u2"),
        (Edge("v1", "u1", Q(2, 5), c), Edge("v1", "u2", Q(2, 5), c), Edge("v2", "u1", Q(1, 5), c)),
        normalized=True,
    )


@pytest.fixture
def split_path():
    """Four-vertex path graph; the x2 -> t arc gets cheaper as alpha grows."""
    edges = (
        PathEdge("s", "x1", Q(1), Q(0)),
        PathEdge("x1", "x2", Q(0), Q(0)),
        PathEdge("x2", "x1", Q(0), Q(0)),
        PathEdge("x2", "s", Q(1), Q(0)),
        PathEdge("x1", "t", Q(1), Q(0)),
        PathEdge("x2", "t", Q(3), Q(1)),
    )
    return ParametricPathInstance(("s", "x1", "x2", "t"), "s", "t", edges, Q(0), Q(3))


@pytest.fixture
def fan_path():
    """s -> x_i -> t for four i; shortest route changes at 1/3, 4/7 and 3/4."""
    first = [(Q(1), Q(0)), (Q(6, 5), Q(3, 5)), (Q(8, 5), Q(13, 10)), (Q(11, 5), Q(21, 10))]
    edges = [PathEdge("s", f"x{i + 1}", c, f) for i, (c, f) in enumerate(first)]
    edges += [PathEdge(f"x{i + 1}", "t", Q(0), Q(0)) for i in range(4)]
    verts = ("s", "x1", "x2", "x3", "x4", "t")
    return ParametricPathInstance(verts, "s", "t", tuple(edges), Q(0), Q(1))
