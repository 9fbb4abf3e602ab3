"""Nested community sequences in weighted graphs.

Pipeline: load a graph, re-weight its edges from a personalized
random-walk distribution, order vertices by iterative minimum-weighted-
degree peeling, then cut the order into k nested communities of strictly
decreasing density by pooling plus dynamic programming.
"""

from .graph_core import (
    Graph,
    GraphFormatError,
    VertexSet,
    avg_degree_density,
    cross_density,
    cross_pair_count,
    cross_weight,
    induced_density,
    load_edge_list,
    load_edge_list_path,
)
from .weighting import (
    PageRankVector,
    WeightingScheme,
    apply_weighting,
    personalized_pagerank,
)
from .ordering import (
    VertexOrder,
    degree_order,
    densest_prefix,
    hops_levels,
    pagerank_order,
    sort_vertices,
)
from .segmentation import (
    Block,
    CommunitySequence,
    DensityMonotonicityError,
    GroupPoint,
    InfeasibleKError,
    build_group_sequence,
    discover,
    pav_pool,
    score_sequence,
    segment_dp,
)
from .cli import (
    ComparisonReport,
    RunConfig,
    compare_baselines,
    export_dot,
    export_tsv,
    run_pipeline,
)

__all__ = [
    "Graph", "GraphFormatError", "VertexSet",
    "avg_degree_density", "cross_density", "cross_pair_count",
    "cross_weight", "induced_density", "load_edge_list",
    "load_edge_list_path",
    "PageRankVector", "WeightingScheme", "apply_weighting",
    "personalized_pagerank",
    "VertexOrder", "degree_order", "densest_prefix", "hops_levels",
    "pagerank_order", "sort_vertices",
    "Block", "CommunitySequence", "DensityMonotonicityError",
    "GroupPoint", "InfeasibleKError", "build_group_sequence", "discover",
    "pav_pool", "score_sequence", "segment_dp",
    "ComparisonReport", "RunConfig", "compare_baselines", "export_dot",
    "export_tsv", "run_pipeline",
]

__version__ = "0.1.0"
