"""Serialization of analysis results: Pajek files and the run report."""

from __future__ import annotations

import json
import re
import shlex
from dataclasses import dataclass
from decimal import Decimal
from typing import Any, Mapping

from .corpus import JournalRef
from .exceptions import IncompleteAssignmentError, ParseError
from .factors import FactorAssignment
from .similarity import SimilarityGraph

#: Figures number only journals with an impact factor above this value.
DEFAULT_MIN_IMPACT_FACTOR = Decimal("1.4")
FOCAL_PARTITION = 0


def format_weight(w: float) -> str:
    return f"{w:.6g}"


def _quote(label: str) -> str:
    return '"' + label.replace('"', "'") + '"'


def vertex_label(ref: JournalRef | None, journal: str, min_impact_factor: Decimal | None) -> str:
    """Display label of a vertex; blank when the journal is under the impact cutoff."""
    if min_impact_factor is not None:
        impact = ref.impact_factor if ref is not None else None
        if impact is None or impact <= min_impact_factor:
            return ""
    return ref.label if ref is not None else journal


def write_pajek(
    graph: SimilarityGraph,
    assignment: FactorAssignment,
    labels: Mapping[str, JournalRef] | None = None,
    min_impact_factor: Decimal | float | None = None,
    focal: str | None = None,
) -> tuple[str, str]:
    """Render a ``.net`` network and a matching ``.clu`` partition.

    Vertices are 1-indexed in graph order and edges are written ``i j w``
    with ``i < j``. The focal journal, when named, goes in partition 0.
    """
    missing = [j for j in graph.nodes if j != focal and j not in assignment]
    if missing:
        raise IncompleteAssignmentError(missing)
    labels = labels or {}
    cutoff = None if min_impact_factor is None else Decimal(str(min_impact_factor))
    net = [f"*Vertices {len(graph)}"]
    for i, j in enumerate(graph.nodes, start=1):
        net.append(f"{i} {_quote(vertex_label(labels.get(j), j, cutoff))}")
    net.append("*Edges")
    for i, j, w in graph.edges:
        net.append(f"{i + 1} {j + 1} {format_weight(w)}")
    clu = [f"*Vertices {len(graph)}"]
    for j in graph.nodes:
        clu.append(str(FOCAL_PARTITION if j == focal else assignment[j]))
    return "\n".join(net) + "\n", "\n".join(clu) + "\n"


@dataclass(frozen=True)
class PajekNetwork:
    labels: tuple[str, ...]
    edges: tuple[tuple[int, int, float], ...]


def read_pajek_network(text: str, name: str = "<net>") -> PajekNetwork:
    """Parse the subset of the ``.net`` format produced by :func:`write_pajek`.

    Returned edges use 0-based vertex indices with ``i < j``.
    """
    lines = text.splitlines()
    if not lines:
        raise ParseError("empty network file", line=1, source=name)
    m = re.fullmatch(r"\*vertices\s+(\d+)", lines[0].strip(), flags=re.IGNORECASE)
    if m is None:
        raise ParseError("expected '*Vertices N'", line=1, source=name)
    n = int(m.group(1))
    labels = []
    lineno = 1
    for lineno in range(2, n + 2):
        if lineno > len(lines):
            raise ParseError(f"expected {n} vertex lines", line=lineno, source=name)
        parts = shlex.split(lines[lineno - 1])
        if len(parts) < 1 or parts[0] != str(lineno - 1):
            raise ParseError(f"expected vertex {lineno - 1}", line=lineno, source=name)
        labels.append(parts[1] if len(parts) > 1 else "")
    rest = lines[n + 1 :]
    if not rest or rest[0].strip().lower() not in ("*edges", "*arcs"):
        raise ParseError("expected '*Edges'", line=n + 2, source=name)
    edges = []
    for offset, line in enumerate(rest[1:], start=n + 3):
        if not line.strip():
            continue
        parts = line.split()
        try:
            i, j = int(parts[0]) - 1, int(parts[1]) - 1
            w = float(parts[2]) if len(parts) > 2 else 1.0
        except (ValueError, IndexError):
            raise ParseError(f"malformed edge line {line!r}", line=offset, source=name) from None
        if not (0 <= i < n and 0 <= j < n):
            raise ParseError(f"edge endpoint out of range in {line!r}", line=offset, source=name)
        edges.append((min(i, j), max(i, j), w))
    return PajekNetwork(tuple(labels), tuple(sorted(edges)))


def read_pajek_partition(text: str, name: str = "<clu>") -> tuple[int, ...]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ParseError("empty partition file", line=1, source=name)
    m = re.fullmatch(r"\*vertices\s+(\d+)", lines[0].strip(), flags=re.IGNORECASE)
    if m is None:
        raise ParseError("expected '*Vertices N'", line=1, source=name)
    try:
        values = tuple(int(v) for v in lines[1:])
    except ValueError as exc:
        raise ParseError(str(exc), source=name) from None
    if len(values) != int(m.group(1)):
        raise ParseError(f"expected {m.group(1)} partition values, got {len(values)}", source=name)
    return values


def _canonical(obj: Any) -> Any:
    if isinstance(obj, Decimal):
        return str(obj)
    if isinstance(obj, float):
        return obj
    if isinstance(obj, Mapping):
        return {str(k): _canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_canonical(v) for v in obj]
    if hasattr(obj, "item"):
        return obj.item()
    return obj


def emit_report(report: Mapping[str, Any]) -> str:
    """Deterministic JSON rendering: sorted keys, shortest round-trip floats."""
    return json.dumps(_canonical(report), indent=2, sort_keys=True, ensure_ascii=False, allow_nan=False) + "\n"
