from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from citenv import datasets as ds
from citenv.environment import CitationMatrix, ImpactShare, impact_shares
from citenv.errors import ZeroVectorError
from citenv.network import (
    build_graph,
    connected_components,
    cosine_matrix,
    edges_csv,
    nodes_csv,
    parse_graph_csv,
)


def _matrix(cols):
    counts = np.array(cols, dtype=np.int64).T
    return CitationMatrix(tuple(f"J{i}" for i in range(counts.shape[0])), counts)


def _shares(n):
    return [ImpactShare(f"J{i}", 100.0 / n, 50.0 / n) for i in range(n)]


class TestCosine:
    def test_proportional_columns(self):
        m = _matrix([[1, 2, 0], [2, 4, 0], [0, 0, 5]])
        s = cosine_matrix(m)
        assert s[0, 1] == pytest.approx(1.0)

    def test_orthogonal_columns(self):
        m = _matrix([[1, 0], [0, 1]])
        assert cosine_matrix(m)[0, 1] == pytest.approx(0.0)

    def test_hand_value(self):
        m = _matrix([[1, 2, 3], [3, 2, 1], [1, 1, 1]])
        assert cosine_matrix(m)[0, 1] == pytest.approx(10 / 14)

    def test_unit_diagonal(self):
        m, _ = ds.make_four_block_matrix()
        s = cosine_matrix(m)
        assert np.allclose(np.diag(s), 1.0)

    def test_zero_column_rejected(self):
        m = _matrix([[0, 0], [1, 2]])
        with pytest.raises(ZeroVectorError) as exc:
            cosine_matrix(m)
        assert exc.value.journal == "J0"

    def test_diagonal_flag_can_zero_a_column(self):
        m = _matrix([[1, 0], [0, 1]])
        with pytest.raises(ZeroVectorError):
            cosine_matrix(m, include_diagonal=False)


class TestBuildGraph:
    def test_complete_triangle(self):
        s = np.full((3, 3), 0.9)
        np.fill_diagonal(s, 1.0)
        g = build_graph(s, _shares(3))
        assert len(g.edges) == 3
        assert all(e.source < e.target for e in g.edges)

    def test_below_cutoff_suppressed(self):
        s = np.array([[1.0, 0.19], [0.19, 1.0]])
        g = build_graph(s, _shares(2), cutoff=0.2)
        assert g.edges == []

    def test_kept_at_cutoff(self):
        s = np.array([[1.0, 0.2], [0.2, 1.0]])
        g = build_graph(s, _shares(2), cutoff=0.2)
        assert len(g.edges) == 1

    def test_two_clusters_split(self):
        s = np.full((4, 4), 0.05)
        s[0, 1] = s[1, 0] = s[2, 3] = s[3, 2] = 0.8
        np.fill_diagonal(s, 1.0)
        g = build_graph(s, _shares(4), cutoff=0.2)
        assert len(connected_components(g)) == 2

    def test_isolated_nodes_retained(self):
        s = np.eye(3)
        g = build_graph(s, _shares(3), cutoff=0.2)
        assert g.n == 3
        assert g.edges == []
        assert len(connected_components(g)) == 3

    def test_node_attributes_copied(self):
        shares = [ImpactShare("A", 23.9, 19.0), ImpactShare("B", 8.1, 6.3)]
        g = build_graph(np.eye(2), shares, groups={"A": "multidisciplinary"})
        assert g.nodes[0].share_total == 23.9
        assert g.nodes[0].group == "multidisciplinary"
        assert g.nodes[1].group is None

    def test_cutoff_validation(self):
        with pytest.raises(ValueError):
            build_graph(np.eye(2), _shares(2), cutoff=1.0)

    @given(st.integers(0, 2**31 - 1))
    def test_raising_cutoff_never_adds_edges(self, seed):
        rng = np.random.default_rng(seed)
        n = 6
        half = rng.uniform(0, 1, size=(n, n))
        s = (half + half.T) / 2
        np.fill_diagonal(s, 1.0)
        shares = _shares(n)
        previous = None
        for cutoff in (0.0, 0.25, 0.5, 0.75):
            edges = {(e.source, e.target) for e in build_graph(s, shares, cutoff=cutoff).edges}
            if previous is not None:
                assert edges.issubset(previous)
            previous = edges


class TestGraphCsv:
    def test_round_trip(self):
        m, _ = ds.make_four_block_matrix()
        shares = impact_shares(m)
        g = build_graph(cosine_matrix(m), shares, cutoff=0.2)
        parsed = parse_graph_csv(nodes_csv(g), edges_csv(g))
        assert [n.journal for n in parsed.nodes] == [n.journal for n in g.nodes]
        assert [(e.source, e.target) for e in parsed.edges] == [
            (e.source, e.target) for e in g.edges
        ]
        assert all(
            abs(p.weight - e.weight) <= 5e-5 for p, e in zip(parsed.edges, g.edges)
        )
