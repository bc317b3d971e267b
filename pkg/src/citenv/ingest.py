"""Parsers and writers for the three tabular input formats.

Formats (all UTF-8, LF line endings):

* link table      -- CSV ``citing,cited,count``; duplicate pairs are summed.
* reference records -- TSV ``citing_journal doc_id seq cited_raw cited_author
  cited_year``; a literal ``?`` marks a missing author or year and flags the
  record as incomplete.
* journal metadata -- CSV ``journal,publisher,categories,articles`` with
  ``;``-separated category tags.

Journal names are canonicalized on the way in; parsing is pure, so results
can be shared freely across threads.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass
from typing import IO, Iterable

from .errors import (
    DuplicateJournalError,
    DuplicateSeqError,
    EmptyNameError,
    NegativeCountError,
    ParseError,
)

JournalId = str

LINK_FIELDS = ("citing", "cited", "count")
REF_FIELDS = ("citing_journal", "doc_id", "seq", "cited_raw", "cited_author", "cited_year")
META_FIELDS = ("journal", "publisher", "categories", "articles")

MISSING_FIELD = "?"

_PUNCT_TO_SPACE = str.maketrans({c: " " for c in ".,;:'\"()[]{}"})
_WS = re.compile(r"\s+")


def normalize_journal_name(raw: str) -> JournalId:
    """Canonicalize a journal name: uppercase, punctuation and runs of
    whitespace collapsed to single spaces.

    Idempotent and deterministic. Raises EmptyNameError when nothing
    remains after trimming.
    """
    text = _WS.sub(" ", raw.translate(_PUNCT_TO_SPACE)).strip().upper()
    if not text:
        raise EmptyNameError(f"blank journal name: {raw!r}")
    return text


@dataclass(frozen=True)
class JournalMeta:
    """Descriptive record for one journal: publisher, subject categories and
    the number of articles it published in 2004."""

    id: JournalId
    publisher: str
    categories: frozenset[str]
    articles_2004: int


@dataclass(frozen=True)
class CitationLink:
    """Aggregated count of citations from one journal to another."""

    citing: JournalId
    cited: JournalId
    count: int


@dataclass(frozen=True)
class RefRecord:
    """One cited reference inside one citing document.

    ``seq`` is the 1-based position in the document's reference list;
    ``complete`` is False when the source file marked the author or the
    publication year as missing.
    """

    citing_journal: JournalId
    doc_id: str
    seq: int
    cited_raw: str
    cited_author: str
    cited_year: int | None
    complete: bool


def _lines(stream: str | IO[str]) -> Iterable[str]:
    if isinstance(stream, str):
        return io.StringIO(stream)
    return stream


def _check_header(row: list[str] | None, expected: tuple[str, ...], what: str) -> None:
    if row is None:
        raise ParseError(f"empty {what} input, expected header {','.join(expected)}", line=1)
    got = tuple(cell.strip() for cell in row)
    if got != expected:
        raise ParseError(f"bad {what} header {got!r}, expected {expected!r}", line=1)


def parse_link_table(stream: str | IO[str]) -> list[CitationLink]:
    """Parse a journal-journal link table.

    Rows with the same (citing, cited) pair are merged by summing counts;
    the first appearance fixes the output position.
    """
    reader = csv.reader(_lines(stream))
    _check_header(next(reader, None), LINK_FIELDS, "link table")
    totals: dict[tuple[str, str], int] = {}
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != 3:
            raise ParseError(f"expected 3 fields, got {len(row)}", line=lineno)
        try:
            citing = normalize_journal_name(row[0])
            cited = normalize_journal_name(row[1])
        except EmptyNameError as exc:
            raise ParseError(str(exc), line=lineno) from exc
        try:
            count = int(row[2])
        except ValueError as exc:
            raise ParseError(f"count is not an integer: {row[2]!r}", line=lineno) from exc
        if count < 0:
            raise NegativeCountError(f"negative count {count}", line=lineno)
        key = (citing, cited)
        totals[key] = totals.get(key, 0) + count
    return [CitationLink(citing, cited, n) for (citing, cited), n in totals.items()]


def write_link_table(links: Iterable[CitationLink]) -> str:
    out = [",".join(LINK_FIELDS)]
    for link in links:
        out.append(f"{link.citing},{link.cited},{link.count}")
    return "\n".join(out) + "\n"


def parse_reference_records(stream: str | IO[str]) -> list[RefRecord]:
    """Parse per-document reference records, in file order.

    Incomplete records (author or year given as ``?``) are kept but
    flagged, so callers can exclude them from counting. A repeated
    (doc_id, seq) raises DuplicateSeqError.
    """
    reader = csv.reader(_lines(stream), delimiter="\t")
    _check_header(next(reader, None), REF_FIELDS, "reference record")
    records: list[RefRecord] = []
    seen: set[tuple[str, int]] = set()
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != 6:
            raise ParseError(f"expected 6 fields, got {len(row)}", line=lineno)
        citing_raw, doc_id, seq_raw, cited_raw, author_raw, year_raw = (c.strip() for c in row)
        try:
            citing = normalize_journal_name(citing_raw)
        except EmptyNameError as exc:
            raise ParseError(str(exc), line=lineno) from exc
        if not doc_id:
            raise ParseError("empty doc_id", line=lineno)
        try:
            seq = int(seq_raw)
        except ValueError as exc:
            raise ParseError(f"seq is not an integer: {seq_raw!r}", line=lineno) from exc
        if seq < 1:
            raise ParseError(f"seq must be >= 1, got {seq}", line=lineno)
        if (doc_id, seq) in seen:
            raise DuplicateSeqError(f"duplicate (doc_id, seq) = ({doc_id!r}, {seq})", line=lineno)
        seen.add((doc_id, seq))
        author = "" if author_raw == MISSING_FIELD else author_raw
        year: int | None
        if year_raw == MISSING_FIELD:
            year = None
        else:
            try:
                year = int(year_raw)
            except ValueError as exc:
                raise ParseError(f"year is not an integer: {year_raw!r}", line=lineno) from exc
        complete = bool(author) and year is not None
        records.append(RefRecord(citing, doc_id, seq, cited_raw, author, year, complete))
    return records


def write_reference_records(records: Iterable[RefRecord]) -> str:
    out = ["\t".join(REF_FIELDS)]
    for r in records:
        author = r.cited_author if r.cited_author else MISSING_FIELD
        year = str(r.cited_year) if r.cited_year is not None else MISSING_FIELD
        out.append("\t".join((r.citing_journal, r.doc_id, str(r.seq), r.cited_raw, author, year)))
    return "\n".join(out) + "\n"


def parse_metadata(stream: str | IO[str]) -> dict[JournalId, JournalMeta]:
    """Parse journal metadata into a mapping keyed by canonical name."""
    reader = csv.reader(_lines(stream))
    _check_header(next(reader, None), META_FIELDS, "metadata")
    metas: dict[JournalId, JournalMeta] = {}
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != 4:
            raise ParseError(f"expected 4 fields, got {len(row)}", line=lineno)
        try:
            journal = normalize_journal_name(row[0])
        except EmptyNameError as exc:
            raise ParseError(str(exc), line=lineno) from exc
        if journal in metas:
            raise DuplicateJournalError(f"duplicate journal {journal!r}", line=lineno)
        categories = frozenset(c.strip() for c in row[2].split(";") if c.strip())
        if not categories:
            raise ParseError("categories must not be empty", line=lineno)
        try:
            articles = int(row[3])
        except ValueError as exc:
            raise ParseError(f"articles is not an integer: {row[3]!r}", line=lineno) from exc
        if articles < 0:
            raise ParseError(f"articles must be >= 0, got {articles}", line=lineno)
        metas[journal] = JournalMeta(journal, row[1].strip(), categories, articles)
    return metas


def write_metadata(metas: dict[JournalId, JournalMeta] | Iterable[JournalMeta]) -> str:
    items = metas.values() if isinstance(metas, dict) else metas
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(META_FIELDS)
    for m in items:
        writer.writerow([m.id, m.publisher, ";".join(sorted(m.categories)), m.articles_2004])
    return buf.getvalue()
