"""Exception hierarchy.

Data problems (bad files, unknown journals, degenerate inputs) derive from
:class:`DataError`; numerical breakdowns derive from :class:`NumericalError`.
The CLI maps the two families onto distinct exit codes.
"""


class CitEcologyError(Exception):
    """Base class for every error raised by this package."""


class DataError(CitEcologyError):
    pass


class NumericalError(CitEcologyError):
    pass


class ParseError(DataError):
    def __init__(self, message, line=None, source=None):
        self.line = line
        self.source = source
        where = []
        if source is not None:
            where.append(str(source))
        if line is not None:
            where.append(f"line {line}")
        prefix = f"{':'.join(where)}: " if where else ""
        super().__init__(prefix + message)


class DuplicateRecordError(ParseError):
    pass


class MissingJournalError(DataError):
    def __init__(self, journal):
        self.journal = journal
        super().__init__(f"unknown journal {journal!r}")


class DegenerateEnvironmentError(DataError):
    pass


class DegenerateMatrixError(DataError):
    pass


class DegenerateGraphError(DataError):
    pass


class IncompleteAssignmentError(DataError):
    def __init__(self, missing):
        self.missing = list(missing)
        shown = ", ".join(repr(m) for m in self.missing[:5])
        more = "" if len(self.missing) <= 5 else f" (+{len(self.missing) - 5} more)"
        super().__init__(f"no factor assignment for {shown}{more}")


class UndefinedCorrelationError(NumericalError):
    def __init__(self, journal):
        self.journal = journal
        super().__init__(f"profile of {journal!r} has zero variance; correlation undefined")


class UndefinedCosineError(NumericalError):
    def __init__(self, journal):
        self.journal = journal
        super().__init__(f"profile of {journal!r} is all zero; cosine undefined")
