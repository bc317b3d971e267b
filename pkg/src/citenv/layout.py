"""Force-directed 2-D placement by spring-energy minimization.

Every node pair gets an ideal display distance proportional to its
graph-theoretic distance and a spring whose strength falls off with the
square of that distance; the layout minimizes

    E = sum_{i<j} k_ij * (|p_i - p_j| - l_ij)^2 / 2

with l_ij = edge_length * d_ij and k_ij = spring_constant / d_ij^2. The
optimizer repeatedly picks the node with the largest gradient norm and
moves it by damped 2x2 Newton steps, so the energy is non-increasing
across accepted steps.
"""

from __future__ import annotations

import csv
import heapq
import io
import math
from dataclasses import dataclass, field
from typing import IO, Sequence

import numpy as np
from sklearn.base import BaseEstimator

from .errors import ParseError
from .ingest import JournalId
from .network import SimilarityGraph
from .validation import check_distance_matrix

DISTANCE_MODES = ("hops", "cosine")


@dataclass(frozen=True)
class LayoutParams:
    """Knobs of the spring model and its optimizer.

    ``eps`` is the gradient-norm threshold (drawing units) below which a
    node counts as settled; ``seed`` controls the initial circle jitter.
    """

    edge_length: float = 1.0
    spring_constant: float = 1.0
    eps: float = 1e-4
    max_outer: int = 5000
    seed: int = 0

    def __post_init__(self) -> None:
        if self.edge_length <= 0 or self.spring_constant <= 0 or self.eps <= 0:
            raise ValueError("edge_length, spring_constant and eps must be positive")


@dataclass
class LayoutResult:
    journals: tuple[JournalId, ...]
    positions: np.ndarray = field(repr=False)
    final_energy: float = 0.0
    converged: bool = True
    iterations: int = 0
    energy_trace: list[float] = field(default_factory=list, repr=False)


def graph_distances(g: SimilarityGraph, mode: str = "hops") -> np.ndarray:
    """All-pairs distances on the thresholded graph.

    ``hops`` counts edges (breadth-first). ``cosine`` is experimental: it
    runs Dijkstra with edge weight (1 - cosine). Pairs in different
    components get the maximum finite distance plus one, which keeps
    isolated nodes at the periphery instead of at infinity.
    """
    if mode not in DISTANCE_MODES:
        raise ValueError(f"mode must be one of {DISTANCE_MODES}, got {mode!r}")
    n = g.n
    d = np.full((n, n), np.inf)
    np.fill_diagonal(d, 0.0)
    adjacency: list[list[tuple[int, float]]] = [[] for _ in range(n)]
    for e in g.edges:
        w = 1.0 if mode == "hops" else 1.0 - e.weight
        adjacency[e.source].append((e.target, w))
        adjacency[e.target].append((e.source, w))
    for s in range(n):
        if mode == "hops":
            frontier = [s]
            depth = 0
            while frontier:
                depth += 1
                nxt = []
                for u in frontier:
                    for v, _ in adjacency[u]:
                        if not np.isfinite(d[s, v]) and v != s:
                            d[s, v] = depth
                            nxt.append(v)
                frontier = nxt
        else:
            heap = [(0.0, s)]
            done = [False] * n
            while heap:
                dist, u = heapq.heappop(heap)
                if done[u]:
                    continue
                done[u] = True
                for v, w in adjacency[u]:
                    cand = dist + w
                    if cand < d[s, v]:
                        d[s, v] = cand
                        heapq.heappush(heap, (cand, v))
    finite = d[np.isfinite(d)]
    fallback = (float(finite.max()) if finite.size else 0.0) + 1.0
    d[~np.isfinite(d)] = fallback
    return d


def layout_energy(positions: np.ndarray, d: np.ndarray, p: LayoutParams) -> float:
    """Spring energy of a placement, summed over unordered pairs."""
    pos = np.asarray(positions, dtype=float)
    n = d.shape[0]
    if pos.shape != (n, 2):
        raise ValueError(f"positions shape {pos.shape} does not match {n} nodes")
    if n < 2:
        return 0.0
    diff = pos[:, None, :] - pos[None, :, :]
    dist = np.sqrt((diff**2).sum(axis=2))
    iu = np.triu_indices(n, k=1)
    strength = p.spring_constant / d[iu] ** 2
    stretch = dist[iu] - p.edge_length * d[iu]
    return float((strength * stretch**2).sum() / 2.0)


def _node_gradient(pos: np.ndarray, m: int, kmat: np.ndarray, lmat: np.ndarray) -> np.ndarray:
    dx = pos[m, 0] - pos[:, 0]
    dy = pos[m, 1] - pos[:, 1]
    dist = np.hypot(dx, dy)
    dist[m] = 1.0
    dist = np.maximum(dist, 1e-12)
    coef = kmat[m] * (1.0 - lmat[m] / dist)
    coef[m] = 0.0
    return np.array([float(coef @ dx), float(coef @ dy)])


def _node_hessian(pos: np.ndarray, m: int, kmat: np.ndarray, lmat: np.ndarray) -> np.ndarray:
    dx = pos[m, 0] - pos[:, 0]
    dy = pos[m, 1] - pos[:, 1]
    dist = np.hypot(dx, dy)
    dist[m] = 1.0
    dist = np.maximum(dist, 1e-12)
    cubed = dist**3
    k = kmat[m].copy()
    k[m] = 0.0
    hxx = float((k * (1.0 - lmat[m] * dy * dy / cubed)).sum())
    hyy = float((k * (1.0 - lmat[m] * dx * dx / cubed)).sum())
    hxy = float((k * (lmat[m] * dx * dy / cubed)).sum())
    return np.array([[hxx, hxy], [hxy, hyy]])


def _node_energy(pos: np.ndarray, m: int, kmat: np.ndarray, lmat: np.ndarray) -> float:
    """Energy of the springs attached to node m (= the only terms a move of
    node m can change)."""
    dx = pos[m, 0] - pos[:, 0]
    dy = pos[m, 1] - pos[:, 1]
    dist = np.hypot(dx, dy)
    stretch = dist - lmat[m]
    stretch[m] = 0.0
    return float((kmat[m] * stretch**2).sum() / 2.0)


def _descend_node(
    pos: np.ndarray, m: int, p: LayoutParams, kmat: np.ndarray, lmat: np.ndarray
) -> None:
    """Newton-iterate node m until its gradient norm drops below eps.

    Each step is halved (up to 20 times) until the energy decreases; if the
    2x2 system is singular or the Newton direction fails, a damped gradient
    step is tried instead. Moving one node only changes its own spring
    terms, so descent is tested on those.
    """
    energy = _node_energy(pos, m, kmat, lmat)
    for _ in range(200):
        grad = _node_gradient(pos, m, kmat, lmat)
        if float(np.hypot(*grad)) < p.eps:
            break
        hess = _node_hessian(pos, m, kmat, lmat)
        det = hess[0, 0] * hess[1, 1] - hess[0, 1] * hess[1, 0]
        if abs(det) > 1e-12:
            step = -np.array(
                [
                    (hess[1, 1] * grad[0] - hess[0, 1] * grad[1]) / det,
                    (hess[0, 0] * grad[1] - hess[1, 0] * grad[0]) / det,
                ]
            )
        else:
            step = -grad
        old = pos[m].copy()
        accepted = False
        for candidate in (step, -grad * (p.edge_length / max(float(np.hypot(*grad)), 1e-12))):
            trial = candidate
            for _halving in range(21):
                pos[m] = old + trial
                new_energy = _node_energy(pos, m, kmat, lmat)
                if new_energy < energy:
                    energy = new_energy
                    accepted = True
                    break
                trial = trial / 2.0
            if accepted:
                break
            pos[m] = old
        if not accepted:
            break


def kamada_kawai(
    d: np.ndarray,
    p: LayoutParams | None = None,
    journals: Sequence[JournalId] | None = None,
) -> LayoutResult:
    """Minimize the spring energy over 2-D positions.

    Nodes start on a circle with seeded jitter. Outer iterations pick the
    node with the largest gradient norm; convergence means every node's
    gradient norm fell below ``eps``.
    """
    p = p or LayoutParams()
    d = check_distance_matrix(d)
    n = d.shape[0]
    names = tuple(journals) if journals is not None else tuple(f"N{i}" for i in range(n))
    if len(names) != n:
        raise ValueError(f"{len(names)} journal names for {n} nodes")
    rng = np.random.default_rng(p.seed)
    angles = 2.0 * math.pi * np.arange(n) / max(n, 1)
    radius = p.edge_length * (float(d.max()) if n > 1 else 1.0) / 2.0
    pos = np.stack([radius * np.cos(angles), radius * np.sin(angles)], axis=1)
    pos += rng.normal(scale=0.01 * p.edge_length, size=pos.shape)
    if n < 2:
        return LayoutResult(names, pos, 0.0, True, 0)
    kmat = p.spring_constant / np.maximum(d, 1e-12) ** 2
    np.fill_diagonal(kmat, 0.0)
    lmat = p.edge_length * d
    trace = [layout_energy(pos, d, p)]
    converged = False
    iterations = 0
    while True:
        norms = [float(np.hypot(*_node_gradient(pos, m, kmat, lmat))) for m in range(n)]
        worst = int(np.argmax(norms))
        if norms[worst] < p.eps:
            converged = True
            break
        if iterations >= p.max_outer:
            break
        iterations += 1
        _descend_node(pos, worst, p, kmat, lmat)
        trace.append(layout_energy(pos, d, p))
        if trace[-1] >= trace[-2] and float(np.hypot(*_node_gradient(pos, worst, kmat, lmat))) >= p.eps:
            break  # stuck: no descent possible from here
    if converged:
        # contract check: nothing still moves at the reported optimum
        assert all(
            float(np.hypot(*_node_gradient(pos, m, kmat, lmat))) < p.eps for m in range(n)
        )
    return LayoutResult(names, pos, trace[-1], converged, iterations, trace)


def layout_gradient_norms(positions: np.ndarray, d: np.ndarray, p: LayoutParams) -> np.ndarray:
    """Per-node gradient norms of the spring energy at a placement."""
    d = check_distance_matrix(d)
    pos = np.asarray(positions, dtype=float)
    kmat = p.spring_constant / np.maximum(d, 1e-12) ** 2
    np.fill_diagonal(kmat, 0.0)
    lmat = p.edge_length * d
    return np.array(
        [float(np.hypot(*_node_gradient(pos, m, kmat, lmat))) for m in range(d.shape[0])]
    )


class KamadaKawaiLayout(BaseEstimator):
    """Sklearn-style estimator wrapping the spring layout.

    ``fit`` accepts a SimilarityGraph (distances are derived per
    ``distance_mode``) or, with ``dissimilarity='precomputed'``, a distance
    matrix. The embedding lands in ``embedding_``.
    """

    def __init__(
        self,
        edge_length: float = 1.0,
        spring_constant: float = 1.0,
        eps: float = 1e-4,
        max_outer: int = 1000,
        seed: int = 0,
        distance_mode: str = "hops",
        dissimilarity: str = "graph",
    ):
        self.edge_length = edge_length
        self.spring_constant = spring_constant
        self.eps = eps
        self.max_outer = max_outer
        self.seed = seed
        self.distance_mode = distance_mode
        self.dissimilarity = dissimilarity

    def _params(self) -> LayoutParams:
        return LayoutParams(
            edge_length=self.edge_length,
            spring_constant=self.spring_constant,
            eps=self.eps,
            max_outer=self.max_outer,
            seed=self.seed,
        )

    def fit(self, X, y=None):
        if isinstance(X, SimilarityGraph):
            d = graph_distances(X, mode=self.distance_mode)
            journals: Sequence[JournalId] | None = [node.journal for node in X.nodes]
        elif self.dissimilarity == "precomputed":
            d = np.asarray(X, dtype=float)
            journals = None
        else:
            raise ValueError(
                "fit expects a SimilarityGraph unless dissimilarity='precomputed'"
            )
        result = kamada_kawai(d, self._params(), journals)
        self.result_ = result
        self.embedding_ = result.positions
        self.energy_ = result.final_energy
        self.converged_ = result.converged
        self.n_iter_ = result.iterations
        return self

    def fit_transform(self, X, y=None):
        return self.fit(X, y).embedding_


def positions_csv(res: LayoutResult) -> str:
    out = ["journal,x,y"]
    for journal, (x, y) in zip(res.journals, res.positions):
        out.append(f"{journal},{x:.6f},{y:.6f}")
    return "\n".join(out) + "\n"


def parse_positions_csv(stream: str | IO[str]) -> LayoutResult:
    reader = csv.reader(io.StringIO(stream) if isinstance(stream, str) else stream)
    header = next(reader, None)
    if header != ["journal", "x", "y"]:
        raise ParseError(f"bad positions header: {header!r}", line=1)
    journals = []
    coords = []
    for row in reader:
        if not row:
            continue
        journals.append(row[0])
        coords.append((float(row[1]), float(row[2])))
    return LayoutResult(tuple(journals), np.array(coords, dtype=float).reshape(len(coords), 2))
