"""Largest translated simplex inside a base region (Gromov-width lower bounds).

A candidate is ``t + M Delta^n(r)``, where ``M`` is an optional unimodular
matrix (identity by default). Feasibility is sampled: the vertices plus a
dense grid on every edge (2D) or face (3D) must pass
``contains(region, ., margin)``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .._validation import check_count, check_integer_matrix, check_scalar
from ..diagram.base import BaseDiagram2D, BaseRegion3D, contains
from ..exceptions import ConvergenceError, DomainError

FAMILIES = {"triangle2d": 2, "pyramid3d": 3}


@dataclass(frozen=True, eq=False)
class OpenSimplex:
    """``translate + matrix . {x > 0, sum x < capacity}``."""

    dim: int
    capacity: float
    translate: np.ndarray
    matrix: np.ndarray = None

    def __post_init__(self):
        if not self.capacity > 0:
            raise DomainError("simplex capacity must be positive")
        t = np.asarray(self.translate, dtype=float).reshape(self.dim)
        object.__setattr__(self, "translate", t)
        M = np.eye(self.dim, dtype=np.int64) if self.matrix is None else check_integer_matrix(self.matrix)
        object.__setattr__(self, "matrix", M)

    def vertices(self):
        return self.translate + np.vstack([np.zeros(self.dim), self.capacity * self.matrix.T])

    def contains(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        lam = np.linalg.solve(self.matrix.astype(float), (X - self.translate).T).T
        return np.all(lam > 0, axis=1) & (lam.sum(axis=1) < self.capacity)

    def to_dict(self):
        return {
            "dim": self.dim,
            "capacity": float(self.capacity),
            "translate": self.translate.tolist(),
            "matrix": self.matrix.tolist(),
        }


@dataclass(frozen=True, eq=False)
class SimplexFit:
    simplex: OpenSimplex
    feasible: bool
    samples_checked: int
    margin: float
    samples: np.ndarray = field(default=None, repr=False)

    def to_dict(self, include_samples=False):
        out = {
            "simplex": self.simplex.to_dict(),
            "feasible": bool(self.feasible),
            "samples_checked": int(self.samples_checked),
            "margin": float(self.margin),
        }
        if include_samples and self.samples is not None:
            out["samples"] = self.samples.tolist()
        return out


def _unit_boundary(dim, k):
    """Barycentric samples on the boundary of the unit simplex (dim+1 vertices)."""
    if dim == 2:
        t = np.linspace(0.0, 1.0, k + 1)
        V = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
        pts = [V[a] + t[:, None] * (V[b] - V[a]) for a, b in ((0, 1), (1, 2), (2, 0))]
        return np.unique(np.vstack(pts), axis=0)
    V = np.vstack([np.zeros(dim), np.eye(dim)])
    pts = []
    for face in itertools.combinations(range(dim + 1), dim):
        A, B, C = V[list(face)]
        for i in range(k + 1):
            for j in range(k + 1 - i):
                pts.append(A + (i / k) * (B - A) + (j / k) * (C - A))
    return np.unique(np.round(np.array(pts), 15), axis=0)


class SimplexFitter(BaseEstimator):
    """Grid-and-bisection search for the largest simplex inside a region.

    Parameters
    ----------
    family : {"triangle2d", "pyramid3d"}
    margin : float
        Required distance of every sample from the region boundary.
    tol : float
        Bisection tolerance on the capacity (action units).
    matrix : array-like, optional
        Unimodular shape matrix; columns are the simplex edge directions.
    edge_samples : int
        Subdivisions per edge of the sampled boundary (at least 64).
    anchors : int
        Grid points per axis for the translate search.

    After ``fit(region)``: ``capacity_``, ``simplex_`` and ``certificate_``.
    """

    def __init__(self, family="pyramid3d", margin=1e-3, tol=1e-3, matrix=None, edge_samples=64, anchors=9):
        self.family = family
        self.margin = margin
        self.tol = tol
        self.matrix = matrix
        self.edge_samples = edge_samples
        self.anchors = anchors

    def _validate(self, region):
        if self.family not in FAMILIES:
            raise DomainError(f"family must be one of {sorted(FAMILIES)}")
        dim = FAMILIES[self.family]
        if not isinstance(region, (BaseDiagram2D, BaseRegion3D)) or region.ndim != dim:
            raise DomainError(f"family {self.family} needs a {dim}-dimensional region")
        margin = check_scalar(self.margin, "margin", nonneg=True)
        tol = check_scalar(self.tol, "tol", positive=True)
        k = check_count(self.edge_samples, "edge_samples", minimum=64)
        na = check_count(self.anchors, "anchors", minimum=2)
        M = np.eye(dim, dtype=np.int64) if self.matrix is None else check_integer_matrix(self.matrix)
        if M.shape[0] != dim:
            raise DomainError("shape matrix has the wrong size")
        return dim, margin, tol, k, na, M

    def fit(self, region, y=None):
        dim, margin, tol, k, na, M = self._validate(region)
        unit = _unit_boundary(dim, k) @ M.T.astype(float)
        pts = region.boundary if isinstance(region, BaseDiagram2D) else region.points
        lo, hi = pts.min(axis=0), pts.max(axis=0)
        if isinstance(region, BaseRegion3D):
            lo = np.minimum(lo, region.base_points.min(axis=0))
            hi = np.maximum(hi, region.base_points.max(axis=0))
        span = float(np.max(hi - lo))
        if not span > 0:
            raise DomainError("region has no extent")
        checked = 0

        def feasible(t, r):
            nonlocal checked
            checked += len(unit)
            return bool(np.all(contains(region, t + r * unit, margin)))

        def grow(t, r_lo):
            # largest feasible r at anchor t, given r_lo feasible
            r_hi = 2.0 * span
            while r_hi - r_lo > tol:
                mid = 0.5 * (r_lo + r_hi)
                if feasible(t, mid):
                    r_lo = mid
                else:
                    r_hi = mid
            return r_lo

        r_min = tol
        best_r, best_t = 0.0, None
        axes = [np.linspace(lo[i], hi[i], na) for i in range(dim)]
        for t in itertools.product(*axes):
            t = np.array(t)
            probe = max(best_r + tol, r_min)
            if not feasible(t, probe):
                continue
            best_r, best_t = grow(t, probe), t
        if best_t is None:
            raise ConvergenceError("no feasible simplex at the smallest tested capacity")

        # compass refinement of the translate
        step = float(np.max((hi - lo) / (na - 1)))
        dirs = np.vstack([np.eye(dim), -np.eye(dim)])
        while step > tol:
            moved = False
            for d in dirs:
                t = best_t + step * d
                if feasible(t, best_r + tol):
                    best_r, best_t, moved = grow(t, best_r + tol), t, True
            if not moved:
                step *= 0.5

        simplex = OpenSimplex(dim, best_r, best_t, M)
        samples = best_t + best_r * unit
        self.capacity_ = best_r
        self.simplex_ = simplex
        self.certificate_ = SimplexFit(simplex, True, checked, margin, samples)
        return self

    def verify(self, region):
        """Re-check the fitted simplex against ``region``."""
        check_is_fitted(self, "simplex_")
        return bool(np.all(contains(region, self.certificate_.samples, self.certificate_.margin)))


def fit_simplex(region, shape="pyramid3d", margin=1e-3, tol=1e-3, **kw) -> SimplexFit:
    """Functional form of :class:`SimplexFitter`; returns the certificate."""
    return SimplexFitter(family=shape, margin=margin, tol=tol, **kw).fit(region).certificate_

