"""Square, asymmetric journal-by-journal citation matrices."""

from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass
from typing import Sequence, TextIO

import numpy as np

from .corpus import CitationCorpus, Environment
from .exceptions import DegenerateMatrixError, MissingJournalError, ParseError

MIN_ANALYSIS_SIZE = 3


class ProfileOrientation(str, enum.Enum):
    """Which reading of the matrix serves as a journal's profile.

    ``ROW``: the citations a journal gives (row ``i``).
    ``COLUMN``: the citations a journal receives (column ``i``).
    """

    ROW = "row"
    COLUMN = "column"

    @classmethod
    def parse(cls, value: "ProfileOrientation | str") -> "ProfileOrientation":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"orientation must be 'row' or 'column', got {value!r}") from None


def _frozen(a, dtype=None):
    arr = np.array(a, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class CitationMatrix:
    """``cells[i, j]`` counts citations from ``journals[i]`` to ``journals[j]``."""

    journals: tuple[str, ...]
    cells: np.ndarray

    def __post_init__(self):
        cells = _frozen(self.cells, dtype=np.int64)
        journals = tuple(self.journals)
        n = len(journals)
        if cells.shape != (n, n):
            raise ValueError(f"cells must be {n}x{n}, got {cells.shape}")
        if (cells < 0).any():
            raise ValueError("citation counts must be nonnegative")
        if len(set(journals)) != n:
            raise ValueError("journal ids must be unique")
        object.__setattr__(self, "journals", journals)
        object.__setattr__(self, "cells", cells)

    def __len__(self):
        return len(self.journals)

    def __eq__(self, other):
        if not isinstance(other, CitationMatrix):
            return NotImplemented
        return self.journals == other.journals and np.array_equal(self.cells, other.cells)

    def index(self, journal: str) -> int:
        try:
            return self.journals.index(journal)
        except ValueError:
            raise MissingJournalError(journal) from None

    def profiles(self, orientation: ProfileOrientation | str) -> np.ndarray:
        """One profile per journal, stacked as rows."""
        if ProfileOrientation.parse(orientation) is ProfileOrientation.ROW:
            return self.cells
        return self.cells.T

    def transpose(self) -> "CitationMatrix":
        return CitationMatrix(self.journals, self.cells.T)

    def subset(self, keep: Sequence[int]) -> "CitationMatrix":
        keep = list(keep)
        return CitationMatrix(tuple(self.journals[i] for i in keep), self.cells[np.ix_(keep, keep)])


def build_matrix(corpus: CitationCorpus, env: Environment, zero_diagonal: bool = False) -> CitationMatrix:
    """Transcribe corpus counts among environment members into a square matrix.

    Absent pairs are 0. The diagonal holds self-citations unless
    ``zero_diagonal`` is set.
    """
    for m in env.members:
        if m not in corpus:
            raise MissingJournalError(m)
    pos = {j: i for i, j in enumerate(env.members)}
    cells = np.zeros((len(pos), len(pos)), dtype=np.int64)
    for (citing, cited), c in corpus.counts.items():
        i, j = pos.get(citing), pos.get(cited)
        if i is not None and j is not None:
            cells[i, j] = c
    if zero_diagonal:
        np.fill_diagonal(cells, 0)
    return CitationMatrix(env.members, cells)


def isolated_journals(matrix: CitationMatrix, orientation: ProfileOrientation | str, focal: str) -> list[str]:
    """Non-focal journals whose profile is all zero once the focal's cells are ignored."""
    f = matrix.index(focal)
    prof = np.array(matrix.profiles(orientation))
    prof[:, f] = 0
    return [j for i, j in enumerate(matrix.journals) if i != f and not prof[i].any()]


def drop_isolates(
    matrix: CitationMatrix,
    orientation: ProfileOrientation | str,
    focal: str,
) -> CitationMatrix:
    """Remove journals connected to the environment only through the focal.

    Under column profiles this drops journals not cited by any journal other
    than the focal; under row profiles, journals citing nothing but the focal.
    Removal repeats until no such journal remains, so the result is a fixed
    point and the operation is idempotent.
    """
    current = matrix
    while True:
        gone = set(isolated_journals(current, orientation, focal))
        if not gone:
            break
        current = current.subset([i for i, j in enumerate(current.journals) if j not in gone])
    if len(current) < MIN_ANALYSIS_SIZE:
        raise DegenerateMatrixError(
            f"dropping isolates leaves {len(current)} journal(s); at least {MIN_ANALYSIS_SIZE} are required"
        )
    return current


def format_matrix(journals: Sequence[str], cells: np.ndarray, fmt=str) -> str:
    """CSV with journal ids on the first row and first column."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["", *journals])
    for j, row in zip(journals, cells):
        writer.writerow([j, *(fmt(v) for v in row.tolist())])
    return buf.getvalue()


def parse_matrix(source: TextIO, dtype=int, name: str = "<matrix>") -> tuple[tuple[str, ...], np.ndarray]:
    reader = csv.reader(source)
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("empty matrix file", line=1, source=name) from None
    journals = tuple(header[1:])
    if header[:1] != [""] or not journals:
        raise ParseError("first row must be an empty corner cell followed by journal ids", line=1, source=name)
    rows = []
    for row in reader:
        if not row:
            continue
        line = reader.line_num
        if len(row) != len(journals) + 1:
            raise ParseError(f"expected {len(journals) + 1} fields, got {len(row)}", line=line, source=name)
        if len(rows) >= len(journals) or row[0] != journals[len(rows)]:
            raise ParseError(f"row label {row[0]!r} does not match column order", line=line, source=name)
        try:
            rows.append([dtype(v) for v in row[1:]])
        except ValueError as exc:
            raise ParseError(str(exc), line=line, source=name) from None
    if len(rows) != len(journals):
        raise ParseError(f"expected {len(journals)} rows, got {len(rows)}", source=name)
    return journals, np.array(rows, dtype=float if dtype is float else np.int64)


def format_citation_matrix(matrix: CitationMatrix) -> str:
    return format_matrix(matrix.journals, matrix.cells)


def parse_citation_matrix(source: TextIO, name: str = "<matrix>") -> CitationMatrix:
    journals, cells = parse_matrix(source, int, name)
    try:
        return CitationMatrix(journals, cells)
    except ValueError as exc:
        raise ParseError(str(exc), source=name) from None
