"""End-to-end analysis of one focal journal in one corpus."""

from __future__ import annotations

import dataclasses
import datetime
import json
from dataclasses import dataclass, field
from decimal import Decimal
from pathlib import Path
from typing import Any, Mapping

from . import __version__
from .aggregates import MacroAggregate, format_aggregate, macro_aggregate
from .centrality import CentralityReport, betweenness, format_centrality
from .corpus import (
    DEFAULT_MIN_COUNT,
    CitationCorpus,
    Direction,
    Environment,
    extract_environment,
    format_environment,
    load_corpus,
)
from .factors import (
    DEFAULT_MAX_SWEEPS,
    DEFAULT_N_FACTORS,
    DEFAULT_TOLERANCE,
    FactorAssignment,
    FactorModel,
    classify_by_max_loading,
    format_factor_report,
    pearson_matrix,
    principal_components,
    varimax,
)
from .matrixops import (
    CitationMatrix,
    ProfileOrientation,
    build_matrix,
    drop_isolates,
    format_citation_matrix,
)
from .report import DEFAULT_MIN_IMPACT_FACTOR, emit_report, write_pajek
from .similarity import (
    DEFAULT_THRESHOLD,
    SimilarityGraph,
    SimilarityMatrix,
    build_graph,
    cosine_matrix,
    format_graph,
    format_similarity,
)

OUTPUT_FILES = {
    "environment": "environment.csv",
    "matrix": "matrix.csv",
    "factors": "factors.csv",
    "cosine": "cosine.csv",
    "graph": "graph.json",
    "centrality": "centrality.csv",
    "aggregate": "aggregate.csv",
    "network": "network.net",
    "partition": "partition.clu",
    "report": "report.json",
}


@dataclass(frozen=True)
class RunConfig:
    corpus: str
    focal: str
    metadata: str | None = None
    label: str = ""
    direction: Direction = Direction.IMPORT
    min_count: int = DEFAULT_MIN_COUNT
    k: int | str = DEFAULT_N_FACTORS
    threshold: float = DEFAULT_THRESHOLD
    orientation: ProfileOrientation = ProfileOrientation.COLUMN
    zero_diagonal: bool = False
    signed: bool = False
    kaiser_normalize: bool = True
    tolerance: float = DEFAULT_TOLERANCE
    max_sweeps: int = DEFAULT_MAX_SWEEPS
    min_impact_factor: Decimal | None = DEFAULT_MIN_IMPACT_FACTOR
    factor_labels: Mapping[int, str] = field(default_factory=dict)
    output_dir: str | None = None
    timestamp: bool = False

    def __post_init__(self):
        object.__setattr__(self, "direction", Direction.parse(self.direction))
        object.__setattr__(self, "orientation", ProfileOrientation.parse(self.orientation))
        if self.k != "auto":
            object.__setattr__(self, "k", int(self.k))
        if self.min_impact_factor is not None:
            object.__setattr__(self, "min_impact_factor", Decimal(str(self.min_impact_factor)))
        object.__setattr__(self, "factor_labels", {int(k): str(v) for k, v in dict(self.factor_labels).items()})

    def echo(self) -> dict[str, Any]:
        """Configuration as plain data. Paths are reduced to file names."""
        out = {}
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            if f.name in ("corpus", "metadata") and v is not None:
                v = Path(v).name
            elif f.name == "output_dir":
                continue
            elif isinstance(v, (Direction, ProfileOrientation)):
                v = v.value
            elif isinstance(v, Decimal):
                v = str(v)
            out[f.name] = v
        return out


@dataclass(frozen=True)
class PipelineResult:
    config: RunConfig
    corpus: CitationCorpus
    environment: Environment
    full_matrix: CitationMatrix
    matrix: CitationMatrix
    unrotated: FactorModel
    model: FactorModel
    assignment: FactorAssignment
    similarity: SimilarityMatrix
    graph: SimilarityGraph
    centrality: CentralityReport
    aggregate: MacroAggregate
    network: str
    partition: str

    @property
    def dropped(self) -> tuple[str, ...]:
        kept = set(self.matrix.journals)
        return tuple(j for j in self.full_matrix.journals if j not in kept)

    def report(self) -> dict[str, Any]:
        cfg = self.config
        corpus = self.corpus
        n_labeled = sum(1 for line in self.network.splitlines()[1 : len(self.graph) + 1] if not line.endswith('""'))
        doc = {
            "tool": {"name": "citecology", "version": __version__},
            "corpus": {
                "label": corpus.label,
                "journals": len(corpus.journals),
                "records": len(corpus.records),
            },
            "focal": self.environment.focal,
            "direction": cfg.direction.value,
            "config": cfg.echo(),
            "environment": {
                "size": len(self.full_matrix),
                "size_after_isolate_drop": len(self.matrix),
                "dropped": list(self.dropped),
                "focal_linked_citations": sum(self.environment.counts[1:]),
            },
            "conventions": {
                "profile_axes": "restricted to environment members",
                "profile_orientation": cfg.orientation.value,
                "diagonal": "zeroed" if cfg.zero_diagonal else "self-citations retained",
                "extraction": "principal components of the Pearson correlation matrix",
                "k_selection": "kaiser eigenvalue > 1" if cfg.k == "auto" else "fixed",
                "rotation": "varimax" + (" with Kaiser row normalization" if cfg.kaiser_normalize else ""),
                "classification": "signed loading" if cfg.signed else "absolute loading",
                "edge_rule": f"cosine > {cfg.threshold!r}",
                "betweenness": "hop-count shortest paths, normalized by (n-1)(n-2)/2",
                "aggregate_excludes_focal": True,
            },
            "factors": {
                "k": self.model.k,
                "extraction_eigenvalues": self.unrotated.eigenvalues.tolist(),
                "eigenvalues": self.model.eigenvalues.tolist(),
                "variance_proportions": self.model.variance_proportions.tolist(),
                "varimax_sweeps": self.model.sweeps,
                "journals": [
                    {
                        "journal": j,
                        "factor": self.assignment[j],
                        "loadings": self.model.loadings[i].tolist(),
                        "communality": float(self.model.communalities[i]),
                    }
                    for i, j in enumerate(self.model.journals)
                ],
            },
            "aggregate": {
                "total": self.aggregate.total,
                "entries": [
                    {"factor": e.factor, "label": e.label, "members": list(e.members), "citations": e.count}
                    for e in self.aggregate.entries
                ],
            },
            "graph": {
                "nodes": len(self.graph),
                "edges": len(self.graph.edges),
                "labeled_nodes": n_labeled,
                "components": self.centrality.components,
            },
            "centrality": [
                {"journal": e.journal, "raw": e.raw, "normalized": e.normalized}
                for e in self.centrality.entries
            ],
        }
        if cfg.timestamp:
            doc["generated_at"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
        return doc

    def files(self) -> dict[str, str]:
        """Every output document keyed by its file name."""
        return {
            OUTPUT_FILES["environment"]: format_environment(self.environment),
            OUTPUT_FILES["matrix"]: format_citation_matrix(self.matrix),
            OUTPUT_FILES["factors"]: format_factor_report(self.model, self.assignment),
            OUTPUT_FILES["cosine"]: format_similarity(self.similarity),
            OUTPUT_FILES["graph"]: format_graph(self.graph),
            OUTPUT_FILES["centrality"]: format_centrality(self.centrality),
            OUTPUT_FILES["aggregate"]: format_aggregate(self.aggregate),
            OUTPUT_FILES["network"]: self.network,
            OUTPUT_FILES["partition"]: self.partition,
            OUTPUT_FILES["report"]: emit_report(self.report()),
        }

    def write(self, output_dir) -> dict[str, Path]:
        out = Path(output_dir)
        out.mkdir(parents=True, exist_ok=True)
        written = {}
        for name, text in self.files().items():
            path = out / name
            path.write_text(text, encoding="utf-8", newline="\n")
            written[name] = path
        return written


class StageError(Exception):
    """Wraps a stage failure with the name of the stage."""

    def __init__(self, stage: str, cause: Exception):
        self.stage = stage
        self.cause = cause
        super().__init__(f"{stage}: {cause}")


def run_analysis(corpus: CitationCorpus, config: RunConfig) -> PipelineResult:
    cfg = config
    stage = "environment"
    try:
        env = extract_environment(corpus, cfg.focal, cfg.direction, cfg.min_count)
        stage = "matrix"
        full = build_matrix(corpus, env, zero_diagonal=cfg.zero_diagonal)
        matrix = drop_isolates(full, cfg.orientation, env.focal)
        stage = "factors"
        corr = pearson_matrix(matrix, cfg.orientation)
        unrotated = principal_components(corr, cfg.k)
        model = varimax(unrotated, cfg.kaiser_normalize, cfg.tolerance, cfg.max_sweeps)
        assignment = classify_by_max_loading(model, cfg.signed)
        stage = "cosine"
        sim = cosine_matrix(matrix, cfg.orientation)
        stage = "graph"
        graph = build_graph(sim, cfg.threshold)
        stage = "centrality"
        central = betweenness(graph)
        stage = "aggregate"
        agg = macro_aggregate(
            matrix, assignment, env.focal, cfg.direction, cfg.factor_labels, corpus.label, model.k
        )
        stage = "export"
        net, clu = write_pajek(graph, assignment, corpus.journals, cfg.min_impact_factor, focal=env.focal)
    except StageError:
        raise
    except Exception as exc:
        raise StageError(stage, exc) from exc
    return PipelineResult(
        cfg, corpus, env, full, matrix, unrotated, model, assignment, sim, graph, central, agg, net, clu
    )


def run_pipeline(config: RunConfig) -> PipelineResult:
    """Parse the corpus, run every stage and, if configured, write all outputs."""
    try:
        corpus = load_corpus(config.corpus, config.metadata, config.label)
    except Exception as exc:
        raise StageError("parse", exc) from exc
    result = run_analysis(corpus, config)
    if config.output_dir is not None:
        result.write(config.output_dir)
    return result


def load_config_file(path) -> dict[str, Any]:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError(f"{path}: config file must hold a JSON object")
    return {k.replace("-", "_"): v for k, v in data.items()}
