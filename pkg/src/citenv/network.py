"""Cosine-similarity graph over cited patterns, with an edge cutoff and
per-node share attributes."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import IO, Mapping, Sequence

import numpy as np

from .environment import CitationMatrix, ImpactShare
from .errors import ParseError, ZeroVectorError
from .ingest import JournalId


@dataclass(frozen=True)
class GraphNode:
    journal: JournalId
    share_total: float
    share_excl_self: float
    group: str | None = None


@dataclass(frozen=True)
class GraphEdge:
    """Undirected weighted edge between node indices, source < target."""

    source: int
    target: int
    weight: float


@dataclass
class SimilarityGraph:
    nodes: list[GraphNode]
    edges: list[GraphEdge] = field(default_factory=list)

    @property
    def n(self) -> int:
        return len(self.nodes)

    def journal_index(self, journal: JournalId) -> int:
        for i, node in enumerate(self.nodes):
            if node.journal == journal:
                return i
        raise KeyError(journal)

    def neighbors(self, i: int) -> list[int]:
        out = []
        for e in self.edges:
            if e.source == i:
                out.append(e.target)
            elif e.target == i:
                out.append(e.source)
        return out


def cosine_matrix(m: CitationMatrix, include_diagonal: bool = True) -> np.ndarray:
    """Pairwise cosine of the cited columns; the diagonal is exactly 1.

    With ``include_diagonal`` off, within-journal counts are zeroed first.
    An all-zero column raises ZeroVectorError.
    """
    x = m.counts.astype(float)
    if not include_diagonal:
        x = x.copy()
        np.fill_diagonal(x, 0.0)
    norms = np.sqrt((x**2).sum(axis=0))
    for k, journal in enumerate(m.journals):
        if norms[k] == 0.0:
            raise ZeroVectorError(journal)
    s = (x / norms).T @ (x / norms)
    s = np.clip((s + s.T) / 2.0, -1.0, 1.0)
    np.fill_diagonal(s, 1.0)
    return s


def build_graph(
    s: np.ndarray,
    shares: Sequence[ImpactShare],
    cutoff: float = 0.2,
    groups: Mapping[JournalId, str] | None = None,
) -> SimilarityGraph:
    """Graph with an edge wherever the cosine reaches the cutoff.

    Values below the cutoff are suppressed (kept when equal); self-loops
    never appear, and isolated nodes are retained.
    """
    if not 0.0 <= cutoff < 1.0:
        raise ValueError(f"cutoff must lie in [0, 1), got {cutoff}")
    s = np.asarray(s, dtype=float)
    if s.shape != (len(shares), len(shares)):
        raise ValueError(f"cosine grid {s.shape} does not match {len(shares)} shares")
    groups = groups or {}
    nodes = [
        GraphNode(sh.journal, sh.share_total, sh.share_excl_self, groups.get(sh.journal))
        for sh in shares
    ]
    edges = [
        GraphEdge(i, j, float(s[i, j]))
        for i in range(len(nodes))
        for j in range(i + 1, len(nodes))
        if s[i, j] >= cutoff
    ]
    return SimilarityGraph(nodes, edges)


def connected_components(g: SimilarityGraph) -> list[list[int]]:
    """Node indices grouped by component, each sorted, in first-seen order."""
    seen = [False] * g.n
    adjacency: list[list[int]] = [[] for _ in range(g.n)]
    for e in g.edges:
        adjacency[e.source].append(e.target)
        adjacency[e.target].append(e.source)
    components = []
    for start in range(g.n):
        if seen[start]:
            continue
        stack = [start]
        seen[start] = True
        comp = []
        while stack:
            u = stack.pop()
            comp.append(u)
            for v in adjacency[u]:
                if not seen[v]:
                    seen[v] = True
                    stack.append(v)
        components.append(sorted(comp))
    return components


def edges_csv(g: SimilarityGraph) -> str:
    out = ["source,target,cosine"]
    for e in g.edges:
        out.append(f"{g.nodes[e.source].journal},{g.nodes[e.target].journal},{e.weight:.4f}")
    return "\n".join(out) + "\n"


def nodes_csv(g: SimilarityGraph) -> str:
    out = ["journal,share_total,share_excl_self,group"]
    for node in g.nodes:
        group = node.group or ""
        out.append(f"{node.journal},{node.share_total:.4f},{node.share_excl_self:.4f},{group}")
    return "\n".join(out) + "\n"


def parse_graph_csv(nodes_stream: str | IO[str], edges_stream: str | IO[str]) -> SimilarityGraph:
    """Rebuild a graph from its nodes.csv / edges.csv pair."""
    nreader = csv.reader(io.StringIO(nodes_stream) if isinstance(nodes_stream, str) else nodes_stream)
    header = next(nreader, None)
    if header != ["journal", "share_total", "share_excl_self", "group"]:
        raise ParseError(f"bad nodes header: {header!r}", line=1)
    nodes = [
        GraphNode(row[0], float(row[1]), float(row[2]), row[3] or None)
        for row in nreader
        if row
    ]
    index = {node.journal: i for i, node in enumerate(nodes)}
    ereader = csv.reader(io.StringIO(edges_stream) if isinstance(edges_stream, str) else edges_stream)
    header = next(ereader, None)
    if header != ["source", "target", "cosine"]:
        raise ParseError(f"bad edges header: {header!r}", line=1)
    edges = []
    for row in ereader:
        if not row:
            continue
        i, j = index[row[0]], index[row[1]]
        if i > j:
            i, j = j, i
        edges.append(GraphEdge(i, j, float(row[2])))
    return SimilarityGraph(nodes, edges)
