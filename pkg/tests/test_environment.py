from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import stats

from citenv import datasets as ds
from citenv.environment import (
    CitationMatrix,
    build_matrix,
    citation_threshold,
    environment_csv,
    impact_shares,
    matrix_csv,
    parse_environment_csv,
    parse_matrix_csv,
    parse_shares_csv,
    rank_correlation,
    select_environment,
    shares_csv,
    within_journal_share,
)
from citenv.errors import (
    DegenerateInputError,
    DomainError,
    EmptyMatrixError,
    LengthMismatchError,
    SeedNotCitedError,
    ZeroColumnError,
)
from citenv.ingest import CitationLink


class TestThreshold:
    def test_bundled_totals(self):
        assert citation_threshold(76904, 7512) == 693

    def test_small(self):
        assert citation_threshold(100, 0) == 1

    def test_zero_numerator(self):
        assert citation_threshold(7512, 7512) == 0

    def test_floor(self):
        assert citation_threshold(199, 0) == 1

    def test_self_above_total_rejected(self):
        with pytest.raises(DomainError):
            citation_threshold(100, 101)


class TestSelect:
    def test_demo_environment_is_22(self, angew_links):
        selected = select_environment(angew_links, ds.INTL_EDITION, 693)
        assert len(selected) == 22
        assert set(selected) == set(ds.EDITION_CITATIONS)

    def test_sorted_by_count_then_name(self, angew_links):
        selected = select_environment(angew_links, ds.INTL_EDITION, 693)
        assert selected[0] == "J AM CHEM SOC"
        assert selected[1] == ds.INTL_EDITION

    def test_comparison_environment_is_21(self):
        links, total, self_cites = ds.make_jacs_link_table()
        selected = select_environment(links, ds.JACS_SEED, citation_threshold(total, self_cites))
        assert len(selected) == 21
        assert set(selected) == set(ds.JACS_ENVIRONMENT)

    def test_threshold_above_all_counts(self):
        links = [CitationLink("A", "S", 5)]
        assert select_environment(links, "S", 10) == []

    def test_strictly_greater(self):
        links = [CitationLink("A", "S", 10), CitationLink("B", "S", 11)]
        assert select_environment(links, "S", 10) == ["B"]

    def test_seed_not_cited(self):
        with pytest.raises(SeedNotCitedError):
            select_environment([CitationLink("A", "B", 5)], "S", 0)

    @given(st.lists(st.integers(min_value=0, max_value=100), min_size=1, max_size=20))
    def test_monotone_in_threshold(self, counts):
        links = [CitationLink(f"J{i}", "S", c) for i, c in enumerate(counts)]
        previous = None
        for threshold in range(0, 102, 10):
            selected = set(select_environment(links, "S", threshold))
            if previous is not None:
                assert selected.issubset(previous)
            previous = selected


class TestBuildMatrix:
    def test_direct_placement(self):
        links = [CitationLink("A", "B", 5), CitationLink("B", "A", 3), CitationLink("A", "A", 2)]
        m = build_matrix(links, ["A", "B"])
        assert m.counts.tolist() == [[2, 5], [3, 0]]

    def test_empty_links(self):
        m = build_matrix([], ["A", "B"])
        assert m.counts.tolist() == [[0, 0], [0, 0]]

    def test_outside_links_ignored(self):
        links = [CitationLink("A", "X", 9), CitationLink("X", "B", 9), CitationLink("A", "B", 1)]
        m = build_matrix(links, ["A", "B"])
        assert m.grand_total() == 1

    def test_duplicate_journals_rejected(self):
        with pytest.raises(ValueError):
            build_matrix([], ["A", "A"])

    def test_corrected_demo_column(self, corrected_matrix):
        seed = corrected_matrix.index(ds.INTL_EDITION)
        column = corrected_matrix.counts[:, seed]
        for i, journal in enumerate(corrected_matrix.journals):
            assert column[i] == ds.EDITION_CITATIONS[journal][2]
        assert column.sum() == 34152

    def test_matches_reference_fixture(self, corrected_matrix):
        ref = ds.make_citation_matrix()
        assert corrected_matrix.journals == ref.journals
        assert np.array_equal(corrected_matrix.counts, ref.counts)

    @given(
        st.lists(
            st.tuples(
                st.integers(min_value=0, max_value=5),
                st.integers(min_value=0, max_value=5),
                st.integers(min_value=0, max_value=50),
            ),
            max_size=25,
        )
    )
    def test_grand_total_matches_bruteforce(self, raw):
        journals = [f"J{i}" for i in range(6)]
        links = [CitationLink(journals[a], journals[b], c) for a, b, c in raw]
        m = build_matrix(links, journals)
        assert m.grand_total() == sum(c for _, _, c in raw)


class TestShares:
    def test_legend_fixture_exact(self):
        m = ds.make_share_matrix()
        for share in impact_shares(m):
            want_total, want_excl = ds.CITATION_SHARES[share.journal]
            assert share.share_total == pytest.approx(want_total, abs=1e-9)
            assert share.share_excl_self == pytest.approx(want_excl, abs=1e-9)

    def test_identity_matrix(self):
        m = CitationMatrix(("A", "B"), np.array([[1, 0], [0, 1]]))
        shares = impact_shares(m)
        assert all(s.share_total == 50.0 and s.share_excl_self == 0.0 for s in shares)

    def test_shares_sum_to_100(self, corrected_matrix):
        total = sum(s.share_total for s in impact_shares(corrected_matrix))
        assert total == pytest.approx(100.0, abs=1e-9)

    def test_empty_matrix_rejected(self):
        with pytest.raises(EmptyMatrixError):
            impact_shares(CitationMatrix(("A",), np.array([[0]])))


class TestWithinJournalShare:
    def test_demo_seed_share(self, corrected_matrix):
        share = within_journal_share(corrected_matrix, ds.INTL_EDITION)
        assert share == pytest.approx(11.69, abs=0.05)
        assert round(share) == 12

    def test_diagonal_only(self):
        m = CitationMatrix(("A", "B"), np.array([[4, 0], [0, 0]]))
        assert within_journal_share(m, "A") == 100.0

    def test_zero_diagonal(self):
        m = CitationMatrix(("A", "B"), np.array([[0, 7], [5, 0]]))
        assert within_journal_share(m, "A") == 0.0

    def test_zero_column_rejected(self):
        m = CitationMatrix(("A", "B"), np.array([[0, 1], [0, 1]]))
        with pytest.raises(ZeroColumnError):
            within_journal_share(m, "A")


class TestRankCorrelation:
    def test_bundled_series(self):
        journals = sorted(ds.CITATION_SHARES)
        articles = [ds.JOURNAL_METADATA[j].articles_2004 for j in journals]
        shares = [ds.CITATION_SHARES[j][0] for j in journals]
        assert rank_correlation(articles, shares) == pytest.approx(0.7625, abs=1e-4)

    def test_identical_series(self):
        assert rank_correlation([1, 5, 3], [1, 5, 3]) == 1.0

    def test_reversed_series(self):
        assert rank_correlation([1, 2, 3], [3, 2, 1]) == -1.0

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatchError):
            rank_correlation([1, 2], [1, 2, 3])

    def test_constant_series(self):
        with pytest.raises(DegenerateInputError):
            rank_correlation([1, 1, 1], [1, 2, 3])

    @given(
        st.lists(
            st.tuples(st.integers(0, 50), st.integers(0, 50)), min_size=3, max_size=30
        )
    )
    def test_against_scipy(self, pairs):
        x = [a for a, _ in pairs]
        y = [b for _, b in pairs]
        if len(set(x)) < 2 or len(set(y)) < 2:
            return
        want = stats.spearmanr(x, y).statistic
        assert rank_correlation(x, y) == pytest.approx(want, abs=1e-12)

    @given(st.lists(st.integers(0, 100), min_size=3, max_size=25))
    def test_invariant_under_monotone_transform(self, xs):
        ys = list(range(len(xs)))
        if len(set(xs)) < 2:
            return
        base = rank_correlation(xs, ys)
        stretched = rank_correlation([x**3 + 2 * x for x in xs], ys)
        assert stretched == pytest.approx(base, abs=1e-12)


class TestSerialization:
    def test_matrix_round_trip(self, corrected_matrix):
        parsed = parse_matrix_csv(matrix_csv(corrected_matrix))
        assert parsed.journals == corrected_matrix.journals
        assert np.array_equal(parsed.counts, corrected_matrix.counts)

    def test_shares_round_trip(self):
        m = ds.make_share_matrix()
        shares = impact_shares(m)
        parsed = parse_shares_csv(shares_csv(shares))
        assert [s.journal for s in parsed] == [s.journal for s in shares]
        assert all(
            p.share_total == pytest.approx(s.share_total, abs=5e-5) for p, s in zip(parsed, shares)
        )

    def test_environment_round_trip(self):
        text = environment_csv(["B", "A"], {"A": 5, "B": 9})
        assert parse_environment_csv(text) == [("B", 9), ("A", 5)]
