"""Detection and correction of dual-edition double-citations.

A document that cites the same work once per edition of a dual-edition
journal produces two consecutive reference records: one to the international
and one to the German edition, sharing author and publication year. Each
such adjacent pair is one double-citation; the corrected count keeps a
single citation for the pair (the international edition's record survives).
"""

from __future__ import annotations

import io
import csv
import math
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DomainError, EmptyNameError, UnsortedInputError
from .ingest import CitationLink, JournalId, RefRecord, normalize_journal_name

_WS = re.compile(r"\s+")

TABLE_FIELDS = (
    "journal",
    "intl",
    "intl_pct",
    "german",
    "german_pct",
    "sum",
    "sum_pct",
    "corrected",
    "corrected_pct",
)
TOTAL_LABEL = "TOTAL"


@dataclass(frozen=True)
class DoublePair:
    """Positions of one double-citation inside one document."""

    doc_id: str
    seq_intl: int
    seq_german: int


@dataclass(frozen=True)
class EditionCounts:
    """Per-citing-journal citation counts for the two editions.

    ``sum_with_doubles`` is intl + german; ``corrected`` removes one
    citation per detected double-citation attributed to this journal.
    """

    journal: JournalId
    intl: int
    german: int
    sum_with_doubles: int
    corrected: int

    @property
    def doubles(self) -> int:
        return self.sum_with_doubles - self.corrected


def _author_key(author: str) -> str:
    return _WS.sub(" ", author).strip().upper()


def _edition(record: RefRecord, intl: JournalId, german: JournalId) -> str | None:
    try:
        name = normalize_journal_name(record.cited_raw)
    except EmptyNameError:
        return None
    if name == intl:
        return "intl"
    if name == german:
        return "german"
    return None


def _complete_in_document_order(records: Sequence[RefRecord]) -> list[RefRecord]:
    """Validate per-document ordering and drop incomplete records.

    Documents must be contiguous and internally ordered by seq; document
    blocks themselves may appear in any order.
    """
    finished: set[str] = set()
    current: str | None = None
    last_seq = 0
    out: list[RefRecord] = []
    for r in records:
        if r.doc_id != current:
            if current is not None:
                finished.add(current)
            if r.doc_id in finished:
                raise UnsortedInputError(f"records of document {r.doc_id!r} are not contiguous")
            current = r.doc_id
            last_seq = 0
        if r.seq <= last_seq:
            raise UnsortedInputError(
                f"document {r.doc_id!r}: seq {r.seq} after {last_seq} violates ordering"
            )
        last_seq = r.seq
        if r.complete:
            out.append(r)
    return out


def detect_double_citations(
    records: Sequence[RefRecord], intl_name: JournalId, german_name: JournalId
) -> list[DoublePair]:
    """Find all double-citations by a greedy left-to-right scan.

    Two records pair when they sit at consecutive positions of the same
    document, cite the two different editions (either order), and agree on
    author and year. Each record joins at most one pair; overlapping
    candidates resolve greedily left-to-right, which attains the maximum
    number of non-overlapping adjacent pairs.
    """
    complete = _complete_in_document_order(records)
    pairs: list[DoublePair] = []
    i = 0
    while i + 1 < len(complete):
        a, b = complete[i], complete[i + 1]
        if a.doc_id == b.doc_id and b.seq - a.seq == 1:
            ea, eb = _edition(a, intl_name, german_name), _edition(b, intl_name, german_name)
            if (
                ea is not None
                and eb is not None
                and ea != eb
                and _author_key(a.cited_author) == _author_key(b.cited_author)
                and a.cited_year == b.cited_year
            ):
                intl_rec, german_rec = (a, b) if ea == "intl" else (b, a)
                pairs.append(DoublePair(a.doc_id, intl_rec.seq, german_rec.seq))
                i += 2
                continue
        i += 1
    return pairs


def corrected_counts(
    records: Sequence[RefRecord],
    pairs: Sequence[DoublePair],
    intl_name: JournalId,
    german_name: JournalId,
) -> list[EditionCounts]:
    """Aggregate edition counts per citing journal and apply the correction.

    Returns one row per citing journal that cited either edition, sorted by
    corrected count descending, then name. Incomplete records never count.
    """
    intl: dict[str, int] = {}
    german: dict[str, int] = {}
    doc_journal: dict[str, str] = {}
    for r in records:
        doc_journal.setdefault(r.doc_id, r.citing_journal)
        if not r.complete:
            continue
        ed = _edition(r, intl_name, german_name)
        if ed == "intl":
            intl[r.citing_journal] = intl.get(r.citing_journal, 0) + 1
        elif ed == "german":
            german[r.citing_journal] = german.get(r.citing_journal, 0) + 1
    doubles: dict[str, int] = {}
    for p in pairs:
        journal = doc_journal[p.doc_id]
        doubles[journal] = doubles.get(journal, 0) + 1
    rows = []
    for journal in sorted(set(intl) | set(german)):
        i = intl.get(journal, 0)
        g = german.get(journal, 0)
        rows.append(EditionCounts(journal, i, g, i + g, i + g - doubles.get(journal, 0)))
    rows.sort(key=lambda r: (-r.corrected, r.journal))
    return rows


def overrepresentation_pct(doubles: int, total_with_doubles: int) -> float:
    """How much double-citations inflate a journal's count, in percent:
    doubles / (total - doubles) * 100."""
    if doubles < 0 or doubles >= total_with_doubles:
        raise DomainError(
            f"need 0 <= doubles < total, got doubles={doubles}, total={total_with_doubles}"
        )
    return doubles / (total_with_doubles - doubles) * 100.0


@dataclass(frozen=True)
class EditionShareRow:
    """Integer percentage of each count column against its column total."""

    journal: JournalId
    intl_pct: int
    german_pct: int
    sum_pct: int
    corrected_pct: int


def _pct(value: int, total: int) -> int:
    # round-half-up; a zero column total yields zero percent
    return int(math.floor(value / total * 100.0 + 0.5)) if total else 0


def share_table(counts: Sequence[EditionCounts]) -> list[EditionShareRow]:
    """Percentage share of each journal in every count column."""
    if not counts:
        raise ValueError("share_table needs at least one row")
    t_intl = sum(c.intl for c in counts)
    t_german = sum(c.german for c in counts)
    t_sum = sum(c.sum_with_doubles for c in counts)
    t_corr = sum(c.corrected for c in counts)
    return [
        EditionShareRow(
            c.journal,
            _pct(c.intl, t_intl),
            _pct(c.german, t_german),
            _pct(c.sum_with_doubles, t_sum),
            _pct(c.corrected, t_corr),
        )
        for c in counts
    ]


def edition_report_csv(counts: Sequence[EditionCounts]) -> str:
    """CSV report of counts and shares, with a TOTAL row appended.

    An empty count list yields the bare header.
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(TABLE_FIELDS)
    if not counts:
        return buf.getvalue()
    shares = {s.journal: s for s in share_table(counts)}
    for c in counts:
        s = shares[c.journal]
        writer.writerow(
            [c.journal, c.intl, s.intl_pct, c.german, s.german_pct,
             c.sum_with_doubles, s.sum_pct, c.corrected, s.corrected_pct]
        )
    writer.writerow(
        [TOTAL_LABEL,
         sum(c.intl for c in counts), 100,
         sum(c.german for c in counts), 100,
         sum(c.sum_with_doubles for c in counts), 100,
         sum(c.corrected for c in counts), 100]
    )
    return buf.getvalue()


def apply_correction(
    links: Iterable[CitationLink],
    counts: Sequence[EditionCounts],
    intl_name: JournalId,
    german_name: JournalId,
) -> list[CitationLink]:
    """Rewrite a link table so both edition columns merge into the
    international one at the corrected count.

    Citing journals without an EditionCounts row keep their raw links.
    """
    corrected = {c.journal: c.corrected for c in counts}
    out: list[CitationLink] = []
    for link in links:
        if link.cited == german_name and link.citing in corrected:
            continue
        if link.cited == intl_name and link.citing in corrected:
            out.append(CitationLink(link.citing, intl_name, corrected[link.citing]))
        else:
            out.append(link)
    return out
