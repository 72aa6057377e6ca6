"""Berge-K4-free triple systems: detection, trace multigraphs and exact extremal search."""

from .core import (
    K3,
    K4,
    ParseError,
    Partition3,
    PatternGraph,
    TripleSystem,
    balanced_3partite,
    codegree,
    degree,
    diff,
    f,
    max_degree,
    min_degree,
    observation2_table,
    parse,
    serialize,
    uncovered_graph,
)
from .detect import (
    AnchoredTriangle,
    BergeEmbedding,
    DetectMode,
    expansion_of,
    find_berge,
    find_berge_triangle_anchored,
    find_k43_minus_e,
    find_tight_path,
    is_berge_free,
    verify_embedding,
)
from .canonical import canonical_form
from .search import (
    BergeMinusExpansion,
    BergePattern,
    ExplicitPatterns,
    GraphClique,
    SearchConfig,
    SearchResult,
    certify_extremal,
    graph_max_edges,
    max_edges,
)
from .trace import TraceMultigraph, bound_report, toomany, trace

__version__ = "0.1.0"
