"""Decomposition of cited-pattern columns: Pearson correlations, principal
components with eigenvalue-above-1 retention, varimax rotation and
cutoff-based factor assignment.

The eigensolver is a cyclic Jacobi sweep: at the sizes this package works
with (a few dozen journals) it is simple, accurate and dependency-free.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .environment import CitationMatrix
from .errors import NoComponentsRetainedError, ZeroVarianceError
from .ingest import JournalId
from .validation import as_float_matrix, check_symmetric, check_unique_journals

KAISER_EIGENVALUE = 1.0
DEFAULT_LOADING_CUTOFF = 0.4
DEFAULT_VARIMAX_TOL = 1e-10
DEFAULT_VARIMAX_SWEEPS = 100


@dataclass
class CorrelationMatrix:
    """Pearson correlations between cited-pattern columns."""

    journals: tuple[JournalId, ...]
    r: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        self.journals = check_unique_journals(self.journals)
        self.r = check_symmetric(self.r, tol=1e-12, name="correlation matrix")
        n = len(self.journals)
        if self.r.shape != (n, n):
            raise ValueError(f"{n} journals but r has shape {self.r.shape}")


@dataclass
class FactorSolution:
    """Loadings of each journal on the retained components.

    ``rotation`` maps the unrotated loadings onto these (loadings_unrotated
    @ rotation == loadings); it is the identity until varimax runs.
    """

    journals: tuple[JournalId, ...]
    loadings: np.ndarray = field(repr=False)
    eigenvalues: np.ndarray = field(repr=False)
    explained_variance: np.ndarray = field(repr=False)
    rotation: np.ndarray = field(repr=False)
    converged: bool = True
    sweeps: int = 0

    @property
    def n_factors(self) -> int:
        return self.loadings.shape[1]

    @property
    def explained_total(self) -> float:
        return float(self.explained_variance.sum())

    def communalities(self) -> np.ndarray:
        return (self.loadings**2).sum(axis=1)


@dataclass(frozen=True)
class FactorAssignment:
    """1-based factor indices where a journal loads above the cutoff."""

    journal: JournalId
    factors: frozenset[int]


def correlation_matrix(m: CitationMatrix, include_diagonal: bool = True) -> CorrelationMatrix:
    """Correlate the cited columns of a citation matrix.

    With ``include_diagonal`` off, within-journal counts are zeroed before
    correlating. A constant column raises ZeroVarianceError.
    """
    x = m.counts.astype(float)
    if not include_diagonal:
        x = x.copy()
        np.fill_diagonal(x, 0.0)
    centered = x - x.mean(axis=0, keepdims=True)
    ss = (centered**2).sum(axis=0)
    for k, journal in enumerate(m.journals):
        if ss[k] == 0.0:
            raise ZeroVarianceError(journal)
    norm = centered / np.sqrt(ss)
    r = norm.T @ norm
    np.fill_diagonal(r, 1.0)
    r = np.clip((r + r.T) / 2.0, -1.0, 1.0)
    return CorrelationMatrix(m.journals, r)


def eigen_symmetric(
    a: np.ndarray, tol: float = 1e-12, max_sweeps: int = 60
) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues and orthonormal eigenvectors of a symmetric matrix by
    cyclic Jacobi rotations.

    Returns (eigenvalues descending, eigenvectors as columns). Symmetry is
    required to 1e-9.
    """
    a = check_symmetric(a, tol=1e-9, name="matrix").copy()
    n = a.shape[0]
    v = np.eye(n)
    scale = float(np.max(np.abs(a))) if n else 0.0
    off_mask = ~np.eye(n, dtype=bool)
    for _ in range(max_sweeps):
        off = math.sqrt(float((a[off_mask] ** 2).sum())) if n > 1 else 0.0
        if off <= tol * max(scale, 1.0):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                diff = a[q, q] - a[p, p]
                if abs(apq) < 1e-36 * abs(diff):
                    t = apq / diff  # tiny pivot: the rotation angle limit
                else:
                    theta = diff / (2.0 * apq)
                    t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(1.0, theta))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                col_p, col_q = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p, row_q = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                col_p, col_q = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * col_p - s * col_q
                v[:, q] = s * col_p + c * col_q
    w = np.diag(a).copy()
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]


def _fix_column_signs(loadings: np.ndarray, rotation: np.ndarray | None = None) -> None:
    # convention: the largest-magnitude entry of every column is positive
    for c in range(loadings.shape[1]):
        k = int(np.argmax(np.abs(loadings[:, c])))
        if loadings[k, c] < 0:
            loadings[:, c] = -loadings[:, c]
            if rotation is not None:
                rotation[:, c] = -rotation[:, c]


def principal_components(r: CorrelationMatrix) -> FactorSolution:
    """Unrotated principal components, keeping eigenvalues strictly above 1.

    Loading column j is eigenvector_j * sqrt(eigenvalue_j); the explained
    variance fractions are eigenvalue_j / n.
    """
    w, v = eigen_symmetric(r.r)
    keep = w > KAISER_EIGENVALUE
    k = int(keep.sum())
    if k == 0:
        raise NoComponentsRetainedError("no eigenvalue exceeds 1")
    eigenvalues = w[:k]
    loadings = v[:, :k] * np.sqrt(eigenvalues)
    _fix_column_signs(loadings)
    return FactorSolution(
        journals=r.journals,
        loadings=loadings,
        eigenvalues=eigenvalues,
        explained_variance=eigenvalues / len(r.journals),
        rotation=np.eye(k),
    )


def varimax_criterion(loadings: np.ndarray) -> float:
    """Sum over factors of the variance of squared loadings."""
    n = loadings.shape[0]
    sq = loadings**2
    return float((sq**2).sum() / n - ((sq.sum(axis=0) / n) ** 2).sum())


@dataclass
class RotationResult:
    loadings: np.ndarray
    rotation: np.ndarray
    converged: bool
    sweeps: int
    criterion_history: list[float]


def varimax_rotation(
    loadings: np.ndarray,
    kaiser_normalize: bool = True,
    max_sweeps: int = DEFAULT_VARIMAX_SWEEPS,
    tol: float = DEFAULT_VARIMAX_TOL,
) -> RotationResult:
    """Rotate loading columns by pairwise planar angles that maximize the
    varimax criterion.

    With ``kaiser_normalize``, rows are scaled to unit length before the
    sweeps and restored afterwards. The criterion never decreases from one
    sweep to the next; convergence means the per-sweep gain fell below
    ``tol``. If the sweep limit is hit first, the best rotation so far is
    returned with ``converged=False``.
    """
    L = as_float_matrix(loadings, "loadings").copy()
    n, k = L.shape
    rotation = np.eye(k)
    if k < 2:
        return RotationResult(L, rotation, True, 0, [varimax_criterion(L)])
    row_norms = np.sqrt((L**2).sum(axis=1))
    scale = np.where(row_norms > 0, row_norms, 1.0)
    b = L / scale[:, None] if kaiser_normalize else L
    history = [varimax_criterion(b)]
    converged = False
    sweeps = 0
    for sweeps in range(1, max_sweeps + 1):
        for p in range(k - 1):
            for q in range(p + 1, k):
                x, y = b[:, p], b[:, q]
                u = x * x - y * y
                w = 2.0 * x * y
                num = 2.0 * float(u @ w) - 2.0 * u.sum() * w.sum() / n
                den = float(u @ u - w @ w) - (u.sum() ** 2 - w.sum() ** 2) / n
                phi = 0.25 * math.atan2(num, den)
                if abs(phi) < 1e-14:
                    continue
                c, s = math.cos(phi), math.sin(phi)
                b[:, p], b[:, q] = c * x + s * y, -s * x + c * y
                rp, rq = rotation[:, p].copy(), rotation[:, q].copy()
                rotation[:, p] = c * rp + s * rq
                rotation[:, q] = -s * rp + c * rq
        history.append(varimax_criterion(b))
        # each planar rotation maximizes its pair's contribution, so the
        # criterion cannot drop by more than rounding noise
        assert history[-1] >= history[-2] - 1e-12
        if history[-1] - history[-2] < tol:
            converged = True
            break
    rotated = b * scale[:, None] if kaiser_normalize else b.copy()
    _fix_column_signs(rotated, rotation)
    return RotationResult(rotated, rotation, converged, sweeps, history)


def varimax(
    solution: FactorSolution,
    kaiser_normalize: bool = True,
    max_sweeps: int = DEFAULT_VARIMAX_SWEEPS,
    tol: float = DEFAULT_VARIMAX_TOL,
) -> FactorSolution:
    """Varimax-rotated copy of a factor solution.

    Communalities and explained variance are preserved; only the basis of
    the factor space changes.
    """
    result = varimax_rotation(solution.loadings, kaiser_normalize, max_sweeps, tol)
    return FactorSolution(
        journals=solution.journals,
        loadings=result.loadings,
        eigenvalues=solution.eigenvalues.copy(),
        explained_variance=solution.explained_variance.copy(),
        rotation=solution.rotation @ result.rotation,
        converged=result.converged,
        sweeps=result.sweeps,
    )


def assign_factors(
    solution: FactorSolution | np.ndarray,
    journals: Sequence[JournalId] | None = None,
    cutoff: float = DEFAULT_LOADING_CUTOFF,
) -> list[FactorAssignment]:
    """Factor membership per journal: indices with loading strictly above
    +cutoff. Negative loadings never qualify; an empty set is legal."""
    if not 0.0 < cutoff < 1.0:
        raise ValueError(f"cutoff must lie in (0, 1), got {cutoff}")
    if isinstance(solution, FactorSolution):
        loadings = solution.loadings
        journals = solution.journals
    else:
        loadings = as_float_matrix(solution, "loadings")
        if journals is None:
            raise ValueError("journals are required when passing bare loadings")
    out = []
    for i, journal in enumerate(journals):
        hits = frozenset(int(c) + 1 for c in np.flatnonzero(loadings[i] > cutoff))
        out.append(FactorAssignment(journal, hits))
    return out


def loadings_csv(
    solution: FactorSolution,
    assignments: Sequence[FactorAssignment] | None = None,
    decimal_comma: bool = False,
) -> str:
    """CSV with one row per journal: loadings to 3 decimals plus the
    assigned factor indices joined by ``+``.

    ``decimal_comma`` formats values with a comma decimal separator (the
    fields are then quoted); off by default.
    """
    if assignments is None:
        assignments = assign_factors(solution)
    by_journal = {a.journal: a for a in assignments}
    k = solution.n_factors
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["journal", *(f"f{c + 1}" for c in range(k)), "assigned_factors"])
    for i, journal in enumerate(solution.journals):
        tags = "+".join(str(f) for f in sorted(by_journal[journal].factors))
        values = [f"{v:.3f}" for v in solution.loadings[i]]
        if decimal_comma:
            values = [v.replace(".", ",") for v in values]
        writer.writerow([journal, *values, tags])
    return buf.getvalue()


class CitedPatternFactorAnalysis(BaseEstimator, TransformerMixin):
    """Sklearn-style estimator for the whole decomposition chain.

    ``fit`` takes a square citing-by-cited count matrix (or a
    CitationMatrix) and runs correlation -> principal components with
    eigenvalue-above-1 retention -> varimax. ``transform`` returns
    least-squares factor scores for the rows of a count matrix over the
    fitted journals.
    """

    def __init__(
        self,
        rotate: bool = True,
        kaiser_normalize: bool = True,
        loading_cutoff: float = DEFAULT_LOADING_CUTOFF,
        include_diagonal: bool = True,
        max_sweeps: int = DEFAULT_VARIMAX_SWEEPS,
        tol: float = DEFAULT_VARIMAX_TOL,
    ):
        self.rotate = rotate
        self.kaiser_normalize = kaiser_normalize
        self.loading_cutoff = loading_cutoff
        self.include_diagonal = include_diagonal
        self.max_sweeps = max_sweeps
        self.tol = tol

    def _as_matrix(self, X) -> CitationMatrix:
        if isinstance(X, CitationMatrix):
            return X
        counts = np.asarray(X)
        journals = tuple(f"J{i:02d}" for i in range(counts.shape[0]))
        return CitationMatrix(journals, counts)

    def fit(self, X, y=None):
        m = self._as_matrix(X)
        corr = correlation_matrix(m, include_diagonal=self.include_diagonal)
        solution = principal_components(corr)
        if self.rotate and solution.n_factors > 1:
            solution = varimax(
                solution,
                kaiser_normalize=self.kaiser_normalize,
                max_sweeps=self.max_sweeps,
                tol=self.tol,
            )
        self.journals_ = m.journals
        self.correlation_ = corr
        self.solution_ = solution
        self.loadings_ = solution.loadings
        self.eigenvalues_ = solution.eigenvalues
        self.explained_variance_ratio_ = solution.explained_variance
        self.rotation_ = solution.rotation
        self.n_components_ = solution.n_factors
        self.assignments_ = assign_factors(solution, cutoff=self.loading_cutoff)
        return self

    def transform(self, X):
        if not hasattr(self, "solution_"):
            raise ValueError("CitedPatternFactorAnalysis is not fitted")
        x = as_float_matrix(np.asarray(X, dtype=float), "X")
        if x.shape[1] != len(self.journals_):
            raise ValueError(
                f"X has {x.shape[1]} columns, the estimator was fitted on {len(self.journals_)}"
            )
        std = x.std(axis=0, ddof=0)
        std = np.where(std > 0, std, 1.0)
        z = (x - x.mean(axis=0, keepdims=True)) / std
        L = self.loadings_
        return z @ L @ np.linalg.inv(L.T @ L)
