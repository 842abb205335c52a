"""Journal citation ecology: environments, factor structure, bridging centrality."""

__version__ = "0.1.0"

from .aggregates import MacroAggregate, macro_aggregate
from .centrality import CentralityReport, betweenness
from .corpus import (
    CitationCorpus,
    CitationRecord,
    Direction,
    Environment,
    JournalRef,
    extract_environment,
    parse_citations,
)
from .estimators import BetweennessCentrality, CitationFactorAnalysis, CosineSimilarity, Varimax
from .factors import (
    FactorAssignment,
    FactorModel,
    classify_by_max_loading,
    pearson_matrix,
    principal_components,
    varimax,
)
from .matrixops import CitationMatrix, ProfileOrientation, build_matrix, drop_isolates
from .pipeline import RunConfig, run_pipeline
from .similarity import SimilarityGraph, SimilarityMatrix, build_graph, cosine_matrix

__all__ = [
    "BetweennessCentrality",
    "CentralityReport",
    "CitationCorpus",
    "CitationFactorAnalysis",
    "CitationMatrix",
    "CitationRecord",
    "CosineSimilarity",
    "Direction",
    "Environment",
    "FactorAssignment",
    "FactorModel",
    "JournalRef",
    "MacroAggregate",
    "ProfileOrientation",
    "RunConfig",
    "SimilarityGraph",
    "SimilarityMatrix",
    "Varimax",
    "betweenness",
    "build_graph",
    "build_matrix",
    "classify_by_max_loading",
    "cosine_matrix",
    "drop_isolates",
    "extract_environment",
    "macro_aggregate",
    "parse_citations",
    "pearson_matrix",
    "principal_components",
    "run_pipeline",
    "varimax",
]
