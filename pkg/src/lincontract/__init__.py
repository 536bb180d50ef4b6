"""Exact optimal linear contracts via critical-value enumeration."""

from .core import (
    ActionSet,
    AdditiveFunction,
    Breakpoint,
    ContractInstance,
    SquareOfModular,
    TableFunction,
    WeightedCoverage,
    agent_utility,
    principal_utility,
    table_instance,
)
from .envelope import ContractCurve, DemandOracle, all_critical_values, cv_segment, optimal_contract
from .errors import ContractError
from .generators import GeneratorSpec, generate
from .matching import BipartiteInstance, Edge, Matching
from .oracles import brute_force_demand, build_oracle, matching_demand, supermodular_demand
from .reductions import (
    ParametricMatchingInstance,
    ParametricPathInstance,
    PathEdge,
    matching_to_demand,
    min_perfect_matching,
    one_sided_to_vertex,
    path_to_matching,
    shortest_path_value,
)
from .serialize import load_instance, save_instance

__all__ = [
    "ActionSet",
    "AdditiveFunction",
    "BipartiteInstance",
    "Breakpoint",
    "ContractCurve",
    "ContractError",
    "ContractInstance",
    "DemandOracle",
    "Edge",
    "GeneratorSpec",
    "Matching",
    "ParametricMatchingInstance",
    "ParametricPathInstance",
    "PathEdge",
    "SquareOfModular",
    "TableFunction",
    "WeightedCoverage",
    "agent_utility",
    "all_critical_values",
    "brute_force_demand",
    "build_oracle",
    "cv_segment",
    "generate",
    "load_instance",
    "matching_demand",
    "matching_to_demand",
    "min_perfect_matching",
    "one_sided_to_vertex",
    "optimal_contract",
    "path_to_matching",
    "principal_utility",
    "save_instance",
    "shortest_path_value",
    "supermodular_demand",
    "table_instance",
]
