"""Correlation-distance networks of cross-border positions.

Pipeline: claims/liabilities panel -> net positions -> correlation distances
-> single-linkage tree and MST -> threshold graph, redundancy and residuality.
"""
from crossnet._backend import BACKEND
from crossnet.cluster import (
    DendrogramColoring,
    Linkage,
    Merge,
    Mst,
    color_dendrogram,
    export_dot,
    export_newick,
    mst,
    single_link,
    threshold_L,
)
from crossnet.ingest import (
    Panel,
    PositionMatrix,
    Role,
    RoleAssignment,
    average_position,
    classify_roles,
    compute_positions,
    format_panel,
    parse_panel,
    rank_by_magnitude,
    read_panel,
    slice_periods,
)
from crossnet.metric import DistanceMatrix, correlation, distance, distance_matrix, normalize
from crossnet.topology import (
    BooleanGraph,
    ProjectedGraph,
    ResidualitySeries,
    TopologySummary,
    boolean_graph,
    booleanize,
    project,
    redundancy,
    residuality,
    rolling_residuality,
    summarize,
)

__version__ = "0.1.0"
