"""Non-cut subcontinua of finite metric graphs and dendrite approximants."""
from .errors import BudgetError, DomainError, InputError, InsufficientResolution, NcStarError
from .metric_graph import Interior, MetricGraph, Node
from .subcontinuum import (
    Subcontinuum,
    boundary,
    complement_components,
    hausdorff_distance,
    is_noncut,
    remove_component,
)
from .tree_ncstar import build_model, component_count, enumerate_ncstar, match_clause
from .graph_ncstar import connect_chain, decide_properties, local_delta, noncompact_witness
from .oracle import cluster_components, enumerate_grid_subcontinua, sample_ncstar, verify_limit
from .dendrite import build_approximant, nowhere_compact_witness, shrinking_basis

__all__ = [
    "BudgetError", "DomainError", "InputError", "InsufficientResolution", "NcStarError",
    "Interior", "MetricGraph", "Node",
    "Subcontinuum", "boundary", "complement_components", "hausdorff_distance", "is_noncut",
    "remove_component",
    "build_model", "component_count", "enumerate_ncstar", "match_clause",
    "connect_chain", "decide_properties", "local_delta", "noncompact_witness",
    "cluster_components", "enumerate_grid_subcontinua", "sample_ncstar", "verify_limit",
    "build_approximant", "nowhere_compact_witness", "shrinking_basis",
]
