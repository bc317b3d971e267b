from __future__ import annotations

import pytest
from hypothesis import settings

from citenv import datasets as ds
from citenv import dedup, environment as env

settings.register_profile("fast", max_examples=40, deadline=None)
settings.load_profile("fast")


@pytest.fixture(scope="session")
def angew_records():
    return ds.make_reference_records()


@pytest.fixture(scope="session")
def edition_data(angew_records):
    pairs = dedup.detect_double_citations(angew_records, ds.INTL_EDITION, ds.GERMAN_EDITION)
    counts = dedup.corrected_counts(angew_records, pairs, ds.INTL_EDITION, ds.GERMAN_EDITION)
    return pairs, counts


@pytest.fixture(scope="session")
def angew_links():
    return ds.make_link_table()


@pytest.fixture(scope="session")
def corrected_matrix(angew_links, edition_data):
    """The demo environment matrix as the pipeline computes it."""
    _, counts = edition_data
    threshold = env.citation_threshold(ds.ANGEW_TOTAL_CITES, ds.ANGEW_SELF_CITES)
    selected = env.select_environment(angew_links, ds.INTL_EDITION, threshold)
    links = dedup.apply_correction(angew_links, counts, ds.INTL_EDITION, ds.GERMAN_EDITION)
    return env.build_matrix(links, selected)


@pytest.fixture(scope="session")
def four_block():
    return ds.make_four_block_matrix()


@pytest.fixture(scope="session")
def demo_links_dir(tmp_path_factory):
    """Directory holding the demo link table and metadata for CLI runs."""
    from citenv.ingest import write_link_table, write_metadata

    path = tmp_path_factory.mktemp("demo")
    (path / "links.csv").write_text(
        write_link_table(ds.make_link_table()), encoding="utf-8", newline=""
    )
    (path / "meta.csv").write_text(
        write_metadata(ds.JOURNAL_METADATA), encoding="utf-8", newline=""
    )
    return path


MINI_SEED = "ALPHA J INTL"
MINI_GERMAN = "ALPHA J"
MINI_TOTAL, MINI_SELF = 3000, 500  # threshold 25

# citing journal -> (intl, german, doubles)
MINI_EDITIONS = {
    "BETA REV": (40, 10, 5),
    "GAMMA LETT": (30, 5, 2),
    MINI_SEED: (20, 15, 10),
    "DELTA ACTA": (25, 0, 0),
}


def _mini_records():
    from citenv.ingest import RefRecord

    records = []
    author = 0

    def add(journal, doc, seq, cited, shared_author=None, year=1995, complete=True):
        nonlocal author
        if shared_author is None:
            author += 1
            shared_author = f"AUTHOR {author:04d}"
        records.append(
            RefRecord(journal, doc, seq, cited, shared_author if complete else "",
                      year if complete else None, complete)
        )
        return shared_author

    for journal, (intl, german, doubles) in MINI_EDITIONS.items():
        slug = journal.replace(" ", "_")
        for k in range(doubles):
            doc = f"{slug}-P{k}"
            shared = add(journal, doc, 1, MINI_GERMAN)
            add(journal, doc, 2, MINI_SEED, shared)
        for k in range(german - doubles):
            add(journal, f"{slug}-G{k}", 1, MINI_GERMAN)
        for k in range(intl - doubles):
            add(journal, f"{slug}-I{k}", 1, MINI_SEED)
    add("BETA REV", "BETA_REV-X0", 1, "IN PRESS ALPHA J", complete=False)
    return records


def _mini_links():
    from citenv.ingest import CitationLink

    seed_counts = {"BETA REV": 40, "GAMMA LETT": 30, MINI_SEED: 28, "DELTA ACTA": 26}
    german_counts = {"BETA REV": 10, "GAMMA LETT": 5, MINI_SEED: 15}
    order = ["BETA REV", "GAMMA LETT", MINI_SEED, "DELTA ACTA"]
    cross = {
        "BETA REV": [50, 45, 5, 6],
        "GAMMA LETT": [40, 38, 4, 5],
        "DELTA ACTA": [6, 5, 30, 28],
    }
    links = []
    for citing, count in seed_counts.items():
        links.append(CitationLink(citing, MINI_SEED, count))
    for citing, count in german_counts.items():
        links.append(CitationLink(citing, MINI_GERMAN, count))
    for cited, column in cross.items():
        for citing, count in zip(order, column):
            links.append(CitationLink(citing, cited, count))
    links.append(CitationLink("EPSILON Z", MINI_SEED, 10))
    links.append(CitationLink("ZETA Q", MINI_SEED, 25))
    return links


@pytest.fixture(scope="session")
def mini_inputs(tmp_path_factory):
    """A tiny dual-edition environment for fast end-to-end CLI runs."""
    from citenv.ingest import (
        JournalMeta,
        write_link_table,
        write_metadata,
        write_reference_records,
    )

    path = tmp_path_factory.mktemp("mini")
    (path / "links.csv").write_text(write_link_table(_mini_links()), encoding="utf-8", newline="")
    (path / "refs.tsv").write_text(
        write_reference_records(_mini_records()), encoding="utf-8", newline=""
    )
    metas = {
        "BETA REV": JournalMeta("BETA REV", "P1", frozenset({"multidisciplinary chemistry"}), 100),
        "GAMMA LETT": JournalMeta("GAMMA LETT", "P1", frozenset({"organic chemistry"}), 80),
        MINI_SEED: JournalMeta(MINI_SEED, "P2", frozenset({"multidisciplinary chemistry"}), 60),
        "DELTA ACTA": JournalMeta("DELTA ACTA", "P2", frozenset({"inorganic/nuclear chemistry"}), 40),
    }
    (path / "meta.csv").write_text(write_metadata(metas), encoding="utf-8", newline="")
    return {
        "dir": path,
        "args": [
            "--links", str(path / "links.csv"),
            "--refs", str(path / "refs.tsv"),
            "--meta", str(path / "meta.csv"),
            "--seed", MINI_SEED,
            "--intl", MINI_SEED,
            "--german", MINI_GERMAN,
            "--total", str(MINI_TOTAL),
            "--self", str(MINI_SELF),
        ],
    }
