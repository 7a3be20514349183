"""Input validation helpers shared by the estimators and free functions."""
from __future__ import annotations

import math

import numpy as np
from sklearn.utils import check_array

from .exceptions import DomainError


def check_scalar(value, name, *, positive=False, nonneg=False):
    try:
        v = float(value)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"{name} must be a real number, got {value!r}") from exc
    if not math.isfinite(v):
        raise DomainError(f"{name} must be finite, got {v}")
    if positive and not v > 0:
        raise DomainError(f"{name} must be > 0, got {v}")
    if nonneg and v < 0:
        raise DomainError(f"{name} must be >= 0, got {v}")
    return v


def check_count(value, name, minimum):
    if int(value) != value or int(value) < minimum:
        raise DomainError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)


def check_points(X, dim=None, name="X"):
    """2-d float array of points; a single point is promoted to one row."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[None, :]
    X = check_array(X, dtype=float, ensure_all_finite=True, input_name=name)
    if dim is not None and X.shape[1] != dim:
        raise DomainError(f"{name} must have {dim} columns, got {X.shape[1]}")
    return X


def check_integer_matrix(M, name="matrix"):
    A = np.asarray(M, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DomainError(f"{name} must be square")
    if not np.all(A == np.round(A)):
        raise DomainError(f"{name} must have integer entries")
    A = np.round(A).astype(np.int64)
    det = round(np.linalg.det(A))
    if abs(det) != 1:
        raise DomainError(f"{name} is not unimodular (det={det})")
    return A
