"""Local citation environment: the 1% rule, the citing-by-cited count
matrix and its share statistics."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import IO, Iterable, Sequence

import numpy as np

from .errors import (
    DegenerateInputError,
    DomainError,
    EmptyMatrixError,
    LengthMismatchError,
    ParseError,
    SeedNotCitedError,
    ZeroColumnError,
)
from .ingest import CitationLink, JournalId, normalize_journal_name
from .validation import as_count_matrix, check_unique_journals


@dataclass
class CitationMatrix:
    """Square count grid over an ordered journal set.

    Rows are the citing dimension, columns the cited dimension; the journal
    order is part of the value and is preserved by serialization.
    """

    journals: tuple[JournalId, ...]
    counts: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        self.journals = check_unique_journals(self.journals)
        self.counts = as_count_matrix(self.counts)
        if self.counts.shape[0] != len(self.journals):
            raise ValueError(
                f"{len(self.journals)} journals but counts shape {self.counts.shape}"
            )

    @property
    def n(self) -> int:
        return len(self.journals)

    def index(self, journal: JournalId) -> int:
        return self.journals.index(journal)

    def column_sums(self) -> np.ndarray:
        return self.counts.sum(axis=0)

    def grand_total(self) -> int:
        return int(self.counts.sum())


@dataclass(frozen=True)
class ImpactShare:
    """Percent of all matrix citations a journal received, with and without
    its within-journal (diagonal) citations."""

    journal: JournalId
    share_total: float
    share_excl_self: float


def citation_threshold(total_cites: int, self_cites: int) -> int:
    """The 1% inclusion threshold: floor((total - self) / 100)."""
    if self_cites > total_cites:
        raise DomainError(f"self_cites {self_cites} exceeds total_cites {total_cites}")
    if total_cites < 0 or self_cites < 0:
        raise DomainError("citation totals must be non-negative")
    return (total_cites - self_cites) // 100


def select_environment(
    links: Iterable[CitationLink], seed: JournalId, threshold: int
) -> list[JournalId]:
    """Journals citing the seed strictly more than `threshold` times.

    The seed itself qualifies through its within-journal citations. Sorted
    by count descending, then name.
    """
    if threshold < 0:
        raise DomainError(f"threshold must be >= 0, got {threshold}")
    counts: dict[str, int] = {}
    targeted = False
    for link in links:
        if link.cited == seed:
            targeted = True
            counts[link.citing] = counts.get(link.citing, 0) + link.count
    if not targeted:
        raise SeedNotCitedError(f"no link cites {seed!r}")
    chosen = [(j, n) for j, n in counts.items() if n > threshold]
    chosen.sort(key=lambda item: (-item[1], item[0]))
    return [j for j, _ in chosen]


def build_matrix(links: Iterable[CitationLink], journal_set: Sequence[JournalId]) -> CitationMatrix:
    """Assemble the citing-by-cited count matrix restricted to a journal set.

    Links whose endpoints both fall inside the set are placed (and summed);
    everything else is ignored, and absent pairs stay zero.
    """
    journals = check_unique_journals(journal_set, "journal_set")
    if not journals:
        raise ValueError("journal_set must not be empty")
    pos = {j: i for i, j in enumerate(journals)}
    counts = np.zeros((len(journals), len(journals)), dtype=np.int64)
    for link in links:
        i = pos.get(link.citing)
        j = pos.get(link.cited)
        if i is not None and j is not None:
            counts[i, j] += link.count
    return CitationMatrix(journals, counts)


def impact_shares(m: CitationMatrix) -> list[ImpactShare]:
    """Column share of the grand total, with and without the diagonal."""
    total = m.grand_total()
    if total == 0:
        raise EmptyMatrixError("matrix grand total is zero")
    col = m.column_sums()
    diag = np.diag(m.counts)
    return [
        ImpactShare(j, float(col[k]) / total * 100.0, float(col[k] - diag[k]) / total * 100.0)
        for k, j in enumerate(m.journals)
    ]


def within_journal_share(m: CitationMatrix, journal: JournalId) -> float:
    """Percent of a journal's received citations coming from itself."""
    k = m.index(journal)
    col = int(m.column_sums()[k])
    if col == 0:
        raise ZeroColumnError(f"column for {journal!r} sums to zero")
    return float(m.counts[k, k]) / col * 100.0


def _midranks(values: np.ndarray) -> np.ndarray:
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values), dtype=float)
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and values[order[j + 1]] == values[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def rank_correlation(x: Sequence[float], y: Sequence[float]) -> float:
    """Spearman rank correlation: mid-ranks for ties, then Pearson on the
    rank vectors. Invariant under strictly monotone transforms."""
    xs = np.asarray(x, dtype=float)
    ys = np.asarray(y, dtype=float)
    if xs.shape != ys.shape or xs.ndim != 1:
        raise LengthMismatchError(f"series shapes differ: {xs.shape} vs {ys.shape}")
    if len(xs) < 2:
        raise LengthMismatchError("need at least two observations")
    rx = _midranks(xs) - (len(xs) + 1) / 2.0
    ry = _midranks(ys) - (len(ys) + 1) / 2.0
    denom = float(np.sqrt(np.dot(rx, rx) * np.dot(ry, ry)))
    if denom == 0.0:
        raise DegenerateInputError("a constant series has no rank correlation")
    return float(np.dot(rx, ry) / denom)


# --- serialization -----------------------------------------------------------

MATRIX_CORNER = "journal"


def matrix_csv(m: CitationMatrix) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([MATRIX_CORNER, *m.journals])
    for i, journal in enumerate(m.journals):
        writer.writerow([journal, *(int(v) for v in m.counts[i])])
    return buf.getvalue()


def parse_matrix_csv(stream: str | IO[str]) -> CitationMatrix:
    reader = csv.reader(io.StringIO(stream) if isinstance(stream, str) else stream)
    header = next(reader, None)
    if not header or header[0] != MATRIX_CORNER:
        raise ParseError(f"bad matrix header, expected leading {MATRIX_CORNER!r}", line=1)
    journals = tuple(header[1:])
    rows = []
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(journals) + 1:
            raise ParseError(f"expected {len(journals) + 1} fields, got {len(row)}", line=lineno)
        if row[0] != journals[len(rows)]:
            raise ParseError(
                f"row label {row[0]!r} does not match column order {journals[len(rows)]!r}",
                line=lineno,
            )
        try:
            rows.append([int(v) for v in row[1:]])
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno) from exc
    if len(rows) != len(journals):
        raise ParseError(f"expected {len(journals)} rows, got {len(rows)}")
    return CitationMatrix(journals, np.array(rows, dtype=np.int64))


def shares_csv(shares: Sequence[ImpactShare]) -> str:
    out = ["journal,share_total,share_excl_self"]
    for s in shares:
        out.append(f"{s.journal},{s.share_total:.4f},{s.share_excl_self:.4f}")
    return "\n".join(out) + "\n"


def parse_shares_csv(stream: str | IO[str]) -> list[ImpactShare]:
    reader = csv.reader(io.StringIO(stream) if isinstance(stream, str) else stream)
    header = next(reader, None)
    if header != ["journal", "share_total", "share_excl_self"]:
        raise ParseError(f"bad shares header: {header!r}", line=1)
    return [ImpactShare(row[0], float(row[1]), float(row[2])) for row in reader if row]


def environment_csv(journals: Sequence[JournalId], counts_to_seed: dict[str, int]) -> str:
    out = ["journal,cites_to_seed"]
    for j in journals:
        out.append(f"{j},{counts_to_seed[j]}")
    return "\n".join(out) + "\n"


def parse_environment_csv(stream: str | IO[str]) -> list[tuple[JournalId, int]]:
    reader = csv.reader(io.StringIO(stream) if isinstance(stream, str) else stream)
    header = next(reader, None)
    if header != ["journal", "cites_to_seed"]:
        raise ParseError(f"bad environment header: {header!r}", line=1)
    return [(normalize_journal_name(row[0]), int(row[1])) for row in reader if row]
