"""Macro-journals: citation flows between the focal journal and each factor's members."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Mapping

from .corpus import Direction
from .exceptions import IncompleteAssignmentError
from .factors import FactorAssignment
from .matrixops import CitationMatrix


@dataclass(frozen=True)
class MacroEntry:
    factor: int
    members: tuple[str, ...]
    count: int
    label: str = ""


@dataclass(frozen=True)
class MacroAggregate:
    direction: Direction
    focal: str
    entries: tuple[MacroEntry, ...]
    corpus_label: str = ""

    @property
    def total(self) -> int:
        return sum(e.count for e in self.entries)

    def counts(self) -> dict[int, int]:
        return {e.factor: e.count for e in self.entries}


def macro_aggregate(
    matrix: CitationMatrix,
    assignment: FactorAssignment,
    focal: str,
    direction: Direction | str,
    labels: Mapping[int, str] | None = None,
    corpus_label: str = "",
    n_factors: int | None = None,
) -> MacroAggregate:
    """Sum the focal journal's citations to (import) or from (export) each factor.

    The focal journal never belongs to a category, so self-citations are
    left out. Factors with no members still get a zero entry when
    ``n_factors`` covers them.
    """
    direction = Direction.parse(direction)
    f = matrix.index(focal)
    missing = [j for j in matrix.journals if j != focal and j not in assignment]
    if missing:
        raise IncompleteAssignmentError(missing)
    labels = labels or {}
    top = max([assignment[j] for j in matrix.journals if j != focal] + [n_factors or 0])
    members: dict[int, list[str]] = {k: [] for k in range(1, top + 1)}
    counts = dict.fromkeys(members, 0)
    for i, j in enumerate(matrix.journals):
        if i == f:
            continue
        k = assignment[j]
        members.setdefault(k, []).append(j)
        flow = matrix.cells[f, i] if direction is Direction.IMPORT else matrix.cells[i, f]
        counts[k] = counts.get(k, 0) + int(flow)
    entries = tuple(
        MacroEntry(k, tuple(members[k]), counts[k], labels.get(k, "")) for k in sorted(members)
    )
    return MacroAggregate(direction, focal, entries, corpus_label)


def format_aggregate(agg: MacroAggregate) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["direction", "factor", "label", "members", "citations"])
    for e in agg.entries:
        writer.writerow([agg.direction.value, e.factor, e.label, len(e.members), e.count])
    return buf.getvalue()
