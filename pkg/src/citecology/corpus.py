"""Citation corpora and focal-journal environments.

A corpus is one time slice of aggregated journal-to-journal citation counts.
An environment is the set of journals a focal journal cites (import) or is
cited by (export) at least ``min_count`` times.
"""

from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from types import MappingProxyType
from typing import Iterable, Mapping, TextIO

from .exceptions import (
    DegenerateEnvironmentError,
    DuplicateRecordError,
    MissingJournalError,
    ParseError,
)

CITATION_HEADER = ("citing", "cited", "count")
METADATA_HEADER = ("id", "name", "impact_factor")

#: Single citations are lumped into "All others" by the data provider,
#: so two is the smallest count that can be observed per journal pair.
DEFAULT_MIN_COUNT = 2


class Direction(str, enum.Enum):
    IMPORT = "import"
    EXPORT = "export"

    @classmethod
    def parse(cls, value: "Direction | str") -> "Direction":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"direction must be 'import' or 'export', got {value!r}") from None


@dataclass(frozen=True)
class JournalRef:
    id: str
    name: str = ""
    impact_factor: Decimal | None = None

    def __post_init__(self):
        if not self.id:
            raise ValueError("journal id must be nonempty")
        if self.impact_factor is not None and self.impact_factor < 0:
            raise ValueError(f"impact factor of {self.id!r} is negative")

    @property
    def label(self) -> str:
        return self.name or self.id


@dataclass(frozen=True)
class CitationRecord:
    citing: str
    cited: str
    count: int

    def __post_init__(self):
        if self.count < 1:
            raise ValueError(f"citation count must be >= 1, got {self.count}")


@dataclass(frozen=True)
class CitationCorpus:
    """Immutable registry of journals plus directed, weighted citation records.

    Journals and records keep insertion order; ``counts`` maps
    ``(citing, cited)`` to the citation count.
    """

    label: str
    journals: Mapping[str, JournalRef]
    records: tuple[CitationRecord, ...]
    counts: Mapping[tuple[str, str], int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        journals = MappingProxyType(dict(self.journals))
        counts = {}
        for rec in self.records:
            for end in (rec.citing, rec.cited):
                if end not in journals:
                    raise MissingJournalError(end)
            key = (rec.citing, rec.cited)
            if key in counts:
                raise DuplicateRecordError(f"duplicate record {rec.citing!r} -> {rec.cited!r}")
            counts[key] = rec.count
        object.__setattr__(self, "journals", journals)
        object.__setattr__(self, "records", tuple(self.records))
        object.__setattr__(self, "counts", MappingProxyType(counts))

    @classmethod
    def from_records(
        cls,
        records: Iterable[tuple[str, str, int] | CitationRecord],
        label: str = "",
        metadata: Iterable[JournalRef] = (),
    ) -> "CitationCorpus":
        journals: dict[str, JournalRef] = {}
        recs = []
        for r in records:
            rec = r if isinstance(r, CitationRecord) else CitationRecord(*r)
            recs.append(rec)
            for end in (rec.citing, rec.cited):
                journals.setdefault(end, JournalRef(end))
        for ref in metadata:
            journals[ref.id] = ref
        return cls(label, journals, tuple(recs))

    def count(self, citing: str, cited: str) -> int:
        return self.counts.get((citing, cited), 0)

    def __contains__(self, journal: str) -> bool:
        return journal in self.journals

    def __eq__(self, other):
        if not isinstance(other, CitationCorpus):
            return NotImplemented
        return (
            self.label == other.label
            and dict(self.journals) == dict(other.journals)
            and set(self.records) == set(other.records)
        )

    def __hash__(self):
        return hash((self.label, frozenset(self.journals), frozenset(self.records)))


def _read_rows(source: TextIO, header: tuple[str, ...], name: str):
    reader = csv.reader(source)
    try:
        first = next(reader)
    except StopIteration:
        raise ParseError(f"empty input; expected header {','.join(header)}", line=1, source=name)
    if tuple(c.strip() for c in first) != header:
        raise ParseError(f"expected header {','.join(header)}, got {','.join(first)}", line=1, source=name)
    for row in reader:
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        yield reader.line_num, row


def parse_metadata(source: TextIO, name: str = "<metadata>") -> list[JournalRef]:
    """Parse an ``id,name,impact_factor`` table; impact factor may be empty."""
    refs = []
    seen = set()
    for line, row in _read_rows(source, METADATA_HEADER, name):
        if len(row) != 3:
            raise ParseError(f"expected 3 fields, got {len(row)}", line=line, source=name)
        jid, jname, raw_if = (c.strip() for c in row)
        if not jid:
            raise ParseError("empty journal id", line=line, source=name)
        if jid in seen:
            raise DuplicateRecordError(f"duplicate journal {jid!r}", line=line, source=name)
        seen.add(jid)
        impact = None
        if raw_if:
            try:
                impact = Decimal(raw_if)
            except InvalidOperation:
                raise ParseError(f"impact factor {raw_if!r} is not a number", line=line, source=name) from None
            if not impact.is_finite() or impact < 0:
                raise ParseError(f"impact factor {raw_if!r} must be a nonnegative number", line=line, source=name)
        refs.append(JournalRef(jid, jname, impact))
    return refs


def parse_citations(
    source: TextIO,
    metadata: TextIO | None = None,
    label: str = "",
    name: str = "<citations>",
) -> CitationCorpus:
    """Parse a ``citing,cited,count`` edge list into a :class:`CitationCorpus`.

    Journals are registered from record endpoints in order of first
    appearance. Metadata rows, when given, fill in names and impact factors
    and may register journals that have no records.

    Raises
    ------
    ParseError
        Wrong arity, empty ids, non-integer or non-positive counts.
    DuplicateRecordError
        A ``(citing, cited)`` pair appears twice. Pairs are never summed.
    """
    journals: dict[str, JournalRef] = {}
    records = []
    seen: dict[tuple[str, str], int] = {}
    for line, row in _read_rows(source, CITATION_HEADER, name):
        if len(row) != 3:
            raise ParseError(f"expected 3 fields, got {len(row)}", line=line, source=name)
        citing, cited, raw = (c.strip() for c in row)
        if not citing or not cited:
            raise ParseError("empty journal id", line=line, source=name)
        try:
            count = int(raw)
        except ValueError:
            raise ParseError(f"count {raw!r} is not an integer", line=line, source=name) from None
        if count < 1:
            raise ParseError(f"count must be >= 1, got {count}", line=line, source=name)
        key = (citing, cited)
        if key in seen:
            raise DuplicateRecordError(
                f"duplicate record {citing!r} -> {cited!r} (first seen on line {seen[key]})",
                line=line,
                source=name,
            )
        seen[key] = line
        records.append(CitationRecord(citing, cited, count))
        for end in (citing, cited):
            journals.setdefault(end, JournalRef(end))
    if metadata is not None:
        for ref in parse_metadata(metadata):
            journals[ref.id] = ref
    return CitationCorpus(label, journals, tuple(records))


def load_corpus(path, metadata_path=None, label=None) -> CitationCorpus:
    with open(path, encoding="utf-8", newline="") as fh:
        if metadata_path is None:
            return parse_citations(fh, label=label or "", name=str(path))
        with open(metadata_path, encoding="utf-8", newline="") as mh:
            return parse_citations(fh, mh, label=label or "", name=str(path))


def format_citations(corpus: CitationCorpus) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CITATION_HEADER)
    for rec in corpus.records:
        writer.writerow((rec.citing, rec.cited, rec.count))
    return buf.getvalue()


def format_metadata(corpus: CitationCorpus) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(METADATA_HEADER)
    for ref in corpus.journals.values():
        writer.writerow((ref.id, ref.name, "" if ref.impact_factor is None else str(ref.impact_factor)))
    return buf.getvalue()


@dataclass(frozen=True)
class Environment:
    """Focal journal plus the journals linked to it above a count threshold.

    ``members[0]`` is always the focal journal; the rest are ordered by
    descending qualifying count, ties broken by id. ``counts[i]`` is the
    qualifying count of ``members[i]`` (the focal's own self-citation count
    for position 0).
    """

    focal: str
    direction: Direction
    min_count: int
    members: tuple[str, ...]
    counts: tuple[int, ...]

    def __post_init__(self):
        if not self.members or self.members[0] != self.focal:
            raise ValueError("the focal journal must be the first member")
        if len(set(self.members)) != len(self.members):
            raise ValueError("environment members must be unique")
        if len(self.counts) != len(self.members):
            raise ValueError("one qualifying count per member is required")

    def __len__(self):
        return len(self.members)


def qualifying_count(corpus: CitationCorpus, focal: str, other: str, direction: Direction) -> int:
    if direction is Direction.IMPORT:
        return corpus.count(focal, other)
    return corpus.count(other, focal)


def extract_environment(
    corpus: CitationCorpus,
    focal: str,
    direction: Direction | str = Direction.IMPORT,
    min_count: int = DEFAULT_MIN_COUNT,
) -> Environment:
    """Select the import or export environment of ``focal``.

    Import members are journals the focal cites at least ``min_count`` times;
    export members are journals citing the focal at least ``min_count`` times.
    """
    direction = Direction.parse(direction)
    if focal not in corpus:
        raise MissingJournalError(focal)
    if min_count < 1:
        raise ValueError(f"min_count must be >= 1, got {min_count}")
    scored = []
    for jid in corpus.journals:
        if jid == focal:
            continue
        c = qualifying_count(corpus, focal, jid, direction)
        if c >= min_count:
            scored.append((-c, jid))
    if not scored:
        raise DegenerateEnvironmentError(
            f"no journal meets min_count={min_count} in the {direction.value} environment of {focal!r}"
        )
    scored.sort()
    members = (focal,) + tuple(j for _, j in scored)
    counts = (corpus.count(focal, focal),) + tuple(-c for c, _ in scored)
    return Environment(focal, direction, min_count, members, counts)


def format_environment(env: Environment) -> str:
    """CSV rendering: a ``# key=value`` preamble then ``journal,count`` rows."""
    lines = [
        f"# focal={env.focal}",
        f"# direction={env.direction.value}",
        f"# min_count={env.min_count}",
        "journal,count",
    ]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for jid, c in zip(env.members, env.counts):
        writer.writerow((jid, c))
    return "\n".join(lines) + "\n" + buf.getvalue()


def parse_environment(source: TextIO, name: str = "<environment>") -> Environment:
    meta = {}
    rows = []
    header_seen = False
    for lineno, raw in enumerate(source, start=1):
        line = raw.rstrip("\r\n")
        if not header_seen:
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition("=")
                meta[key.strip()] = value.strip()
                continue
            if line.strip() != "journal,count":
                raise ParseError("expected header journal,count", line=lineno, source=name)
            header_seen = True
            continue
        if not line.strip():
            continue
        row = next(csv.reader([line]))
        if len(row) != 2:
            raise ParseError(f"expected 2 fields, got {len(row)}", line=lineno, source=name)
        try:
            rows.append((row[0], int(row[1])))
        except ValueError:
            raise ParseError(f"count {row[1]!r} is not an integer", line=lineno, source=name) from None
    missing = {"focal", "direction", "min_count"} - meta.keys()
    if missing or not rows:
        raise ParseError(f"incomplete environment file (missing {sorted(missing) or 'rows'})", source=name)
    try:
        return Environment(
            focal=meta["focal"],
            direction=Direction.parse(meta["direction"]),
            min_count=int(meta["min_count"]),
            members=tuple(j for j, _ in rows),
            counts=tuple(c for _, c in rows),
        )
    except ValueError as exc:
        raise ParseError(str(exc), source=name) from None
