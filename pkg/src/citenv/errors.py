"""Exception hierarchy shared by all citenv modules."""

from __future__ import annotations


class CitenvError(Exception):
    """Base class for all citenv errors."""


class EmptyNameError(CitenvError):
    """A journal name was blank after trimming."""


class ParseError(CitenvError):
    """A malformed row in an input file.

    Carries the 1-based line number of the offending row.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NegativeCountError(ParseError):
    """A citation count below zero."""


class DuplicateSeqError(ParseError):
    """The same (doc_id, seq) appeared twice in one reference file."""


class DuplicateJournalError(ParseError):
    """The same journal appeared twice in a metadata file."""


class UnsortedInputError(CitenvError):
    """Reference records were not ordered by (doc_id, seq)."""


class DomainError(CitenvError):
    """An argument outside the mathematical domain of an operation."""


class SeedNotCitedError(CitenvError):
    """No link in the table points at the requested seed journal."""


class EmptyMatrixError(CitenvError):
    """A citation matrix with grand total zero."""


class ZeroColumnError(CitenvError):
    """A cited column sums to zero."""


class LengthMismatchError(CitenvError):
    """Paired series of different lengths."""


class DegenerateInputError(CitenvError):
    """A constant series has no rank order."""


class ZeroVarianceError(CitenvError):
    """A cited column has zero variance; correlation is undefined."""

    def __init__(self, journal: str):
        self.journal = journal
        super().__init__(f"column for {journal!r} has zero variance")


class NotSymmetricError(CitenvError):
    """A matrix violated the required symmetry tolerance."""


class NoComponentsRetainedError(CitenvError):
    """No eigenvalue exceeded 1, so the retention rule keeps nothing."""


class ZeroVectorError(CitenvError):
    """A cited column is all zeros; cosine is undefined."""

    def __init__(self, journal: str):
        self.journal = journal
        super().__init__(f"column for {journal!r} is a zero vector")


class MissingStageError(CitenvError):
    """A report was requested before its producing stage ran."""

    def __init__(self, stage: str):
        self.stage = stage
        super().__init__(f"missing output of stage {stage!r}")
