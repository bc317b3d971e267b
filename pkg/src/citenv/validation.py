"""Input validation helpers used across the estimator-facing modules."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from .errors import NotSymmetricError


def as_float_matrix(x, name: str = "X") -> np.ndarray:
    """Coerce to a 2-D float array, rejecting NaN/inf."""
    a = np.asarray(x, dtype=float)
    if a.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains non-finite values")
    return a


def as_count_matrix(x, name: str = "counts") -> np.ndarray:
    """Coerce to a square, non-negative integer matrix."""
    a = np.asarray(x)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be square, got shape {a.shape}")
    if not np.issubdtype(a.dtype, np.number):
        raise ValueError(f"{name} must be numeric")
    ai = np.asarray(np.rint(a), dtype=np.int64)
    if np.any(np.asarray(a, dtype=float) < 0):
        raise ValueError(f"{name} must be non-negative")
    return ai


def check_symmetric(a: np.ndarray, tol: float = 1e-9, name: str = "matrix") -> np.ndarray:
    """Validate symmetry to `tol`, returning the symmetrized array."""
    a = as_float_matrix(a, name)
    if a.shape[0] != a.shape[1]:
        raise NotSymmetricError(f"{name} is not square: {a.shape}")
    dev = float(np.max(np.abs(a - a.T))) if a.size else 0.0
    if dev > tol:
        raise NotSymmetricError(f"{name} deviates from symmetry by {dev:.3e} (tol {tol:.0e})")
    return (a + a.T) / 2.0


def check_distance_matrix(d, name: str = "distances") -> np.ndarray:
    """Validate a symmetric hop/weight grid: zero diagonal, positive elsewhere."""
    a = check_symmetric(d, tol=1e-9, name=name)
    if a.size and np.max(np.abs(np.diag(a))) > 0:
        raise ValueError(f"{name} must have a zero diagonal")
    n = a.shape[0]
    if n > 1:
        off = a[~np.eye(n, dtype=bool)]
        if np.min(off) <= 0:
            raise ValueError(f"{name} must be positive off the diagonal")
    return a


def check_unique_journals(journals: Sequence[str], name: str = "journals") -> tuple[str, ...]:
    """Reject duplicate or empty journal identifiers."""
    out = tuple(journals)
    if len(set(out)) != len(out):
        dupes = sorted({j for j in out if list(out).count(j) > 1})
        raise ValueError(f"{name} contains duplicates: {dupes}")
    if any(not j for j in out):
        raise ValueError(f"{name} contains an empty identifier")
    return out
