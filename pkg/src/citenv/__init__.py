"""citenv: reconstruct, decompose and map a journal's local citation
environment from citation data."""

from .dedup import (
    DoublePair,
    EditionCounts,
    apply_correction,
    corrected_counts,
    detect_double_citations,
    overrepresentation_pct,
    share_table,
)
from .environment import (
    CitationMatrix,
    ImpactShare,
    build_matrix,
    citation_threshold,
    impact_shares,
    rank_correlation,
    select_environment,
    within_journal_share,
)
from .errors import CitenvError
from .factor import (
    CitedPatternFactorAnalysis,
    CorrelationMatrix,
    FactorAssignment,
    FactorSolution,
    assign_factors,
    correlation_matrix,
    eigen_symmetric,
    principal_components,
    varimax,
)
from .ingest import (
    CitationLink,
    JournalMeta,
    RefRecord,
    normalize_journal_name,
    parse_link_table,
    parse_metadata,
    parse_reference_records,
)
from .layout import (
    KamadaKawaiLayout,
    LayoutParams,
    LayoutResult,
    graph_distances,
    kamada_kawai,
    layout_energy,
)
from .network import SimilarityGraph, build_graph, cosine_matrix
from .export import NodeGlyph, make_glyphs, parse_pajek, render_svg, write_pajek, write_reports

__version__ = "0.1.0"

__all__ = [
    "CitationLink",
    "CitationMatrix",
    "CitedPatternFactorAnalysis",
    "CitenvError",
    "CorrelationMatrix",
    "DoublePair",
    "EditionCounts",
    "FactorAssignment",
    "FactorSolution",
    "ImpactShare",
    "JournalMeta",
    "KamadaKawaiLayout",
    "LayoutParams",
    "LayoutResult",
    "NodeGlyph",
    "RefRecord",
    "SimilarityGraph",
    "apply_correction",
    "assign_factors",
    "build_graph",
    "build_matrix",
    "citation_threshold",
    "corrected_counts",
    "correlation_matrix",
    "cosine_matrix",
    "detect_double_citations",
    "eigen_symmetric",
    "graph_distances",
    "impact_shares",
    "kamada_kawai",
    "layout_energy",
    "make_glyphs",
    "normalize_journal_name",
    "overrepresentation_pct",
    "parse_link_table",
    "parse_metadata",
    "parse_pajek",
    "parse_reference_records",
    "principal_components",
    "rank_correlation",
    "render_svg",
    "select_environment",
    "share_table",
    "varimax",
    "within_journal_share",
    "write_pajek",
    "write_reports",
]
