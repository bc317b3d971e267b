"""Serializers: Pajek ``.net`` files, SVG drawings with the ellipse node
encoding, and the bundle of CSV reports.

Node glyphs encode shares geometrically: the vertical radius scales with a
journal's total received-citation share, the horizontal radius with the
share excluding within-journal citations, so strongly self-citing journals
render as vertically stretched ellipses. The encoding lives entirely in
``make_glyphs`` and can be swapped by one flag.
"""

from __future__ import annotations

import shlex
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence
from xml.sax.saxutils import escape

import numpy as np

from .dedup import EditionCounts, edition_report_csv
from .environment import ImpactShare, matrix_csv, shares_csv, CitationMatrix
from .errors import MissingStageError, ParseError
from .factor import FactorAssignment, FactorSolution, loadings_csv
from .ingest import JournalId, JournalMeta
from .layout import LayoutResult
from .network import GraphEdge, GraphNode, SimilarityGraph, edges_csv, nodes_csv

MIN_RADIUS = 3.0
RADIUS_SCALE = 1.5

GROUP_COLORS = {
    "multidisciplinary": "#d62728",  # red
    "organic": "#2ca02c",            # green
    "inorganic": "#1f77b4",          # blue
}
DEFAULT_COLOR = "#9e9e9e"            # grey for unassigned


@dataclass(frozen=True)
class NodeGlyph:
    """One drawable node: canvas center, ellipse radii and fill color."""

    journal: JournalId
    cx: float
    cy: float
    rx: float
    ry: float
    color: str


def category_group(meta: JournalMeta) -> str | None:
    """Coarse display group from subject category tags.

    Multidisciplinary wins over inorganic/nuclear (which absorbs
    organometallic), which wins over organic; anything else is ungrouped.
    """
    tags = " ".join(sorted(meta.categories)).lower()
    if "multidisciplinary" in tags:
        return "multidisciplinary"
    if "inorganic" in tags or "nuclear" in tags or "organometallic" in tags:
        return "inorganic"
    if "organic" in tags:
        return "organic"
    return None


def normalize_positions(positions: np.ndarray) -> np.ndarray:
    """Map raw layout coordinates into the unit square.

    The layout is centered at (0.5, 0.5) and its longer bounding-box side
    spans [0.25, 0.75], leaving an even margin; degenerate spans collapse
    to the center line.
    """
    pos = np.asarray(positions, dtype=float)
    if pos.size == 0:
        return pos.reshape(0, 2)
    lo = pos.min(axis=0)
    hi = pos.max(axis=0)
    span = float(max(hi[0] - lo[0], hi[1] - lo[1]))
    center = (lo + hi) / 2.0
    if span == 0.0:
        return np.full_like(pos, 0.5)
    return 0.5 + (pos - center) / (2.0 * span)


def write_pajek(g: SimilarityGraph, layout: LayoutResult) -> str:
    """Pajek ``.net`` text: 1-based vertices with quoted labels and unit
    coordinates, then one ``i j weight`` line per edge (i < j)."""
    order = {j: i for i, j in enumerate(layout.journals)}
    missing = [node.journal for node in g.nodes if node.journal not in order]
    if missing:
        raise ValueError(f"layout lacks positions for {missing}")
    unit = normalize_positions(layout.positions)
    lines = [f"*Vertices {g.n}"]
    for i, node in enumerate(g.nodes, start=1):
        x, y = unit[order[node.journal]]
        lines.append(f'{i} "{node.journal}" {x:.4f} {y:.4f}')
    lines.append("*Edges")
    for e in sorted(g.edges, key=lambda e: (e.source, e.target)):
        lines.append(f"{e.source + 1} {e.target + 1} {e.weight:.4f}")
    return "\n".join(lines) + "\n"


def parse_pajek(text: str) -> tuple[SimilarityGraph, LayoutResult]:
    """Read back a ``.net`` file written by :func:`write_pajek`.

    Share attributes are not stored in the format, so nodes come back with
    zero shares; weights carry 4 decimals.
    """
    lines = [ln for ln in text.split("\n") if ln.strip()]
    if not lines or not lines[0].lower().startswith("*vertices"):
        raise ParseError("expected leading *Vertices section", line=1)
    try:
        n = int(lines[0].split()[1])
    except (IndexError, ValueError) as exc:
        raise ParseError(f"bad vertex count in {lines[0]!r}", line=1) from exc
    nodes: list[GraphNode] = []
    coords = []
    for lineno in range(1, 1 + n):
        parts = shlex.split(lines[lineno])
        if len(parts) < 4:
            raise ParseError(f"bad vertex line {lines[lineno]!r}", line=lineno + 1)
        nodes.append(GraphNode(parts[1], 0.0, 0.0))
        coords.append((float(parts[2]), float(parts[3])))
    if lines[1 + n].lower() != "*edges":
        raise ParseError(f"expected *Edges, got {lines[1 + n]!r}", line=n + 2)
    edges = []
    for lineno in range(2 + n, len(lines)):
        parts = lines[lineno].split()
        if len(parts) != 3:
            raise ParseError(f"bad edge line {lines[lineno]!r}", line=lineno + 1)
        i, j, w = int(parts[0]) - 1, int(parts[1]) - 1, float(parts[2])
        if i > j:
            i, j = j, i
        edges.append(GraphEdge(i, j, w))
    graph = SimilarityGraph(nodes, edges)
    layout = LayoutResult(
        tuple(node.journal for node in nodes),
        np.array(coords, dtype=float).reshape(len(coords), 2),
    )
    return graph, layout


def make_glyphs(
    g: SimilarityGraph,
    layout: LayoutResult,
    width: float = 800.0,
    height: float = 800.0,
    margin: float = 80.0,
    min_radius: float = MIN_RADIUS,
    radius_scale: float = RADIUS_SCALE,
    swap_axes: bool = False,
) -> list[NodeGlyph]:
    """Canvas glyphs for every node.

    ``swap_axes`` inverts the share-to-axis mapping (total share on the
    horizontal radius instead of the vertical one).
    """
    order = {j: i for i, j in enumerate(layout.journals)}
    unit = normalize_positions(layout.positions)
    glyphs = []
    for node in g.nodes:
        x, y = unit[order[node.journal]]
        ry = min_radius + radius_scale * node.share_total
        rx = min_radius + radius_scale * node.share_excl_self
        if swap_axes:
            rx, ry = ry, rx
        color = GROUP_COLORS.get(node.group or "", DEFAULT_COLOR)
        glyphs.append(
            NodeGlyph(
                node.journal,
                margin + x * (width - 2 * margin),
                margin + y * (height - 2 * margin),
                rx,
                ry,
                color,
            )
        )
    return glyphs


def edge_width(weight: float, cutoff: float) -> float:
    """Stroke width growing linearly from 1 at the cutoff to 4 at cosine 1."""
    if cutoff >= 1.0:
        return 1.0
    w = 1.0 + 3.0 * (weight - cutoff) / (1.0 - cutoff)
    return min(max(w, 1.0), 4.0)


def render_svg(
    glyphs: Sequence[NodeGlyph],
    edges: Sequence[GraphEdge] = (),
    width: float = 800.0,
    height: float = 800.0,
    cutoff: float = 0.2,
    font_size: float = 11.0,
) -> str:
    """SVG 1.1 document: one line per edge, one ellipse and label per node."""
    if not glyphs:
        raise ValueError("render_svg needs at least one glyph")
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width:.0f}" height="{height:.0f}" '
        f'viewBox="0 0 {width:.0f} {height:.0f}">',
        f'<rect width="{width:.0f}" height="{height:.0f}" fill="white"/>',
    ]
    for e in edges:
        a, b = glyphs[e.source], glyphs[e.target]
        parts.append(
            f'<line x1="{a.cx:.2f}" y1="{a.cy:.2f}" x2="{b.cx:.2f}" y2="{b.cy:.2f}" '
            f'stroke="#777777" stroke-width="{edge_width(e.weight, cutoff):.2f}"/>'
        )
    for glyph in glyphs:
        parts.append(
            f'<ellipse cx="{glyph.cx:.2f}" cy="{glyph.cy:.2f}" '
            f'rx="{glyph.rx:.2f}" ry="{glyph.ry:.2f}" '
            f'fill="{glyph.color}" fill-opacity="0.85" stroke="#333333"/>'
        )
    for glyph in glyphs:
        parts.append(
            f'<text x="{glyph.cx:.2f}" y="{(glyph.cy + glyph.ry + font_size):.2f}" '
            f'text-anchor="middle" font-family="Helvetica,Arial,sans-serif" '
            f'font-size="{font_size:.0f}">{escape(glyph.journal)}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


@dataclass
class PipelineOutputs:
    """Everything the compute stages produce, for the report writer."""

    edition_counts: list[EditionCounts] | None = None
    matrix: CitationMatrix | None = None
    shares: list[ImpactShare] | None = None
    solution: FactorSolution | None = None
    assignments: list[FactorAssignment] | None = None
    graph: SimilarityGraph | None = None
    layout: LayoutResult | None = None


REPORT_FILES = (
    "table2.csv",
    "table3.csv",
    "shares.csv",
    "edges.csv",
    "nodes.csv",
    "positions.csv",
)


def write_reports(outputs: PipelineOutputs, out_dir: Path | str) -> list[Path]:
    """Write the full report bundle into a directory.

    Raises MissingStageError naming the first stage whose output is absent.
    Matrix serialization rides along when a matrix is present.
    """
    from .layout import positions_csv  # local import keeps module load light

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if outputs.edition_counts is None:
        raise MissingStageError("dedup")
    if outputs.shares is None:
        raise MissingStageError("environment")
    if outputs.solution is None or outputs.assignments is None:
        raise MissingStageError("factor")
    if outputs.graph is None:
        raise MissingStageError("network")
    if outputs.layout is None:
        raise MissingStageError("layout")
    written = []

    def _emit(name: str, text: str) -> None:
        path = out / name
        path.write_text(text, encoding="utf-8", newline="")
        written.append(path)

    _emit("table2.csv", edition_report_csv(outputs.edition_counts))
    _emit("table3.csv", loadings_csv(outputs.solution, outputs.assignments))
    _emit("shares.csv", shares_csv(outputs.shares))
    _emit("edges.csv", edges_csv(outputs.graph))
    _emit("nodes.csv", nodes_csv(outputs.graph))
    _emit("positions.csv", positions_csv(outputs.layout))
    if outputs.matrix is not None:
        _emit("matrix.csv", matrix_csv(outputs.matrix))
    return written
