"""Cosine similarity between citation profiles and the thresholded graph."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, TextIO

import numpy as np

from .exceptions import ParseError, UndefinedCosineError
from .matrixops import CitationMatrix, ProfileOrientation, format_matrix, parse_matrix

#: Edges need a cosine strictly greater than this value.
DEFAULT_THRESHOLD = 0.2


@dataclass(frozen=True, eq=False)
class SimilarityMatrix:
    journals: tuple[str, ...]
    cells: np.ndarray

    def __post_init__(self):
        cells = np.array(self.cells, dtype=float, copy=True)
        p = len(self.journals)
        if cells.shape != (p, p):
            raise ValueError(f"cells must be {p}x{p}, got {cells.shape}")
        cells.setflags(write=False)
        object.__setattr__(self, "journals", tuple(self.journals))
        object.__setattr__(self, "cells", cells)

    def __eq__(self, other):
        if not isinstance(other, SimilarityMatrix):
            return NotImplemented
        return self.journals == other.journals and np.array_equal(self.cells, other.cells)


def cosine_profiles(X) -> np.ndarray:
    """Cosine between the rows of ``X``; raises on all-zero rows via the caller."""
    X = np.asarray(X, dtype=float)
    norms = np.sqrt((X * X).sum(axis=1))
    Z = X / norms[:, None]
    S = Z @ Z.T
    S = (S + S.T) / 2.0
    np.fill_diagonal(S, 1.0)
    return S


def cosine_matrix(matrix: CitationMatrix, orientation: ProfileOrientation | str) -> SimilarityMatrix:
    """Cosine similarity between every pair of journal profiles.

    For count data every entry lies in [0, 1]; entries are clipped there to
    absorb round-off.
    """
    X = np.asarray(matrix.profiles(orientation), dtype=float)
    for j, row in zip(matrix.journals, X):
        if not row.any():
            raise UndefinedCosineError(j)
    S = cosine_profiles(X)
    if (X >= 0).all():
        S = np.clip(S, 0.0, 1.0)
    return SimilarityMatrix(matrix.journals, S)


@dataclass(frozen=True)
class SimilarityGraph:
    """Undirected graph over journals; ``edges`` holds ``(i, j, weight)`` with ``i < j``.

    Node indices refer to positions in ``nodes``. Isolated journals stay in
    ``nodes``.
    """

    nodes: tuple[str, ...]
    edges: tuple[tuple[int, int, float], ...]
    threshold: float

    def __post_init__(self):
        nodes = tuple(self.nodes)
        edges = tuple(sorted((int(i), int(j), float(w)) for i, j, w in self.edges))
        n = len(nodes)
        seen = set()
        for i, j, _ in edges:
            if not 0 <= i < j < n:
                raise ValueError(f"edge ({i}, {j}) must satisfy 0 <= i < j < {n}")
            if (i, j) in seen:
                raise ValueError(f"duplicate edge ({i}, {j})")
            seen.add((i, j))
        if len(set(nodes)) != n:
            raise ValueError("node ids must be unique")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "threshold", float(self.threshold))

    def __len__(self):
        return len(self.nodes)

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in self.nodes]
        for i, j, _ in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return adj

    @classmethod
    def from_edges(cls, nodes: Iterable[str], edges: Iterable[tuple[str, str, float]], threshold: float = 0.0):
        """Build from id-labelled edges; endpoints are normalized so ``i < j``."""
        nodes = tuple(nodes)
        pos = {n: i for i, n in enumerate(nodes)}
        out = []
        for a, b, w in edges:
            i, j = pos[a], pos[b]
            out.append((min(i, j), max(i, j), w))
        return cls(nodes, tuple(out), threshold)


def build_graph(sim: SimilarityMatrix, threshold: float = DEFAULT_THRESHOLD) -> SimilarityGraph:
    """Keep an edge between two journals iff their cosine is strictly above ``threshold``."""
    if not 0.0 <= threshold < 1.0:
        raise ValueError(f"threshold must lie in [0, 1), got {threshold}")
    S = sim.cells
    iu, ju = np.triu_indices(len(sim.journals), k=1)
    keep = S[iu, ju] > threshold
    edges = tuple((int(i), int(j), float(S[i, j])) for i, j in zip(iu[keep], ju[keep]))
    return SimilarityGraph(sim.journals, edges, threshold)


def format_similarity(sim: SimilarityMatrix) -> str:
    return format_matrix(sim.journals, sim.cells, fmt=repr)


def parse_similarity(source: TextIO, name: str = "<cosine>") -> SimilarityMatrix:
    journals, cells = parse_matrix(source, float, name)
    return SimilarityMatrix(journals, cells)


def format_graph(graph: SimilarityGraph) -> str:
    """JSON document with full-precision weights (the Pajek export rounds them)."""
    doc = {
        "threshold": graph.threshold,
        "nodes": list(graph.nodes),
        "edges": [[graph.nodes[i], graph.nodes[j], w] for i, j, w in graph.edges],
    }
    return json.dumps(doc, indent=1) + "\n"


def parse_graph(source: TextIO, name: str = "<graph>") -> SimilarityGraph:
    try:
        doc = json.load(source)
        return SimilarityGraph.from_edges(doc["nodes"], (tuple(e) for e in doc["edges"]), doc["threshold"])
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"invalid graph document: {exc}", source=name) from None
