"""Betweenness centrality on the thresholded similarity graph.

Path length is hop count; edge weights only decide which edges exist.
Accumulation follows Brandes' single-source dependency scheme, one BFS per
source in node order, so results are reproducible bit for bit.
"""

from __future__ import annotations

import csv
import io
from collections import deque
from dataclasses import dataclass

from .exceptions import DegenerateGraphError
from .similarity import SimilarityGraph


@dataclass(frozen=True)
class CentralityEntry:
    journal: str
    raw: float
    normalized: float

    @property
    def percent(self) -> float:
        return self.normalized * 100.0


@dataclass(frozen=True)
class CentralityReport:
    """Entries sorted by descending normalized betweenness, ties by id."""

    entries: tuple[CentralityEntry, ...]
    n: int
    components: int

    def __getitem__(self, journal: str) -> CentralityEntry:
        for e in self.entries:
            if e.journal == journal:
                return e
        raise KeyError(journal)

    def as_dict(self, normalized: bool = True) -> dict[str, float]:
        return {e.journal: (e.normalized if normalized else e.raw) for e in self.entries}


def _single_source(adj: list[list[int]], s: int, out: list[float]) -> None:
    n = len(adj)
    sigma = [0] * n
    dist = [-1] * n
    preds: list[list[int]] = [[] for _ in range(n)]
    sigma[s] = 1
    dist[s] = 0
    order = []
    queue = deque([s])
    while queue:
        v = queue.popleft()
        order.append(v)
        for w in adj[v]:
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                queue.append(w)
            if dist[w] == dist[v] + 1:
                sigma[w] += sigma[v]
                preds[w].append(v)
    delta = [0.0] * n
    for w in reversed(order):
        for v in preds[w]:
            delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
        if w != s:
            out[w] += delta[w]


def raw_betweenness(adj: list[list[int]]) -> list[float]:
    """Unnormalized betweenness over unordered pairs of an undirected graph."""
    acc = [0.0] * len(adj)
    for s in range(len(adj)):
        _single_source(adj, s, acc)
    # every unordered pair was counted once from each endpoint
    return [v / 2.0 for v in acc]


def count_components(adj: list[list[int]]) -> int:
    seen = [False] * len(adj)
    comps = 0
    for s in range(len(adj)):
        if seen[s]:
            continue
        comps += 1
        seen[s] = True
        stack = [s]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
    return comps


def betweenness(graph: SimilarityGraph) -> CentralityReport:
    """Freeman betweenness of every node, normalized by ``(n-1)(n-2)/2``."""
    n = len(graph)
    if n < 3:
        raise DegenerateGraphError(f"betweenness needs at least 3 nodes, got {n}")
    adj = graph.adjacency()
    raw = raw_betweenness(adj)
    denom = (n - 1) * (n - 2) / 2.0
    entries = [CentralityEntry(j, r, r / denom) for j, r in zip(graph.nodes, raw)]
    entries.sort(key=lambda e: (-e.normalized, e.journal))
    return CentralityReport(tuple(entries), n, count_components(adj))


def format_centrality(report: CentralityReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["journal", "raw", "normalized", "percent"])
    for e in report.entries:
        writer.writerow([e.journal, repr(e.raw), repr(e.normalized), f"{e.percent:.1f}"])
    return buf.getvalue()
