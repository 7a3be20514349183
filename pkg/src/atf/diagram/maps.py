"""Piecewise integer-affine maps ("transferring the cut") and their action
on diagrams, regions and polytopes.

A map is an ordered list of stages followed by an optional global affine
map. Each stage moves the points satisfying its closed half-space
``a . x <= b`` by ``x -> M x + s`` and leaves the rest alone; stages are
evaluated in order on the current coordinates.
"""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import null_space
from scipy.spatial import ConvexHull, QhullError
from sklearn.base import BaseEstimator, TransformerMixin

from .._validation import check_integer_matrix, check_points
from ..exceptions import DomainError
from .base import BaseDiagram2D, BaseRegion3D, Cut, Polytope, convex_volume

SEAM_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class Piece:
    """Closed half-space ``normal . x <= offset`` with its affine map."""

    normal: np.ndarray
    offset: float
    matrix: np.ndarray
    shift: np.ndarray

    @classmethod
    def parse(cls, spec):
        if isinstance(spec, Piece):
            return spec
        try:
            hs = [float(v) for v in spec["halfspace"]]
            matrix = spec["matrix"]
        except (KeyError, TypeError) as exc:
            raise DomainError(f"piece needs 'halfspace' and 'matrix': {spec!r}") from exc
        M = check_integer_matrix(matrix)
        a = np.asarray(hs[:-1], dtype=float)
        if a.shape != (M.shape[0],):
            raise DomainError("halfspace normal and matrix dimensions disagree")
        if not np.all(a == np.round(a)):
            raise DomainError("halfspace normal must be an integer vector")
        s = np.asarray(spec.get("shift", np.zeros(len(a))), dtype=float)
        if s.shape != a.shape:
            raise DomainError("shift and matrix dimensions disagree")
        return cls(a, hs[-1], M, s)

    @property
    def dim(self):
        return self.matrix.shape[0]

    @property
    def everywhere(self):
        return not np.any(self.normal)

    @property
    def is_identity(self):
        return np.array_equal(self.matrix, np.eye(self.dim, dtype=np.int64)) and not np.any(self.shift)

    def selects(self, X):
        if self.everywhere:
            return np.full(len(X), self.offset >= 0)
        return X @ self.normal <= self.offset

    def side(self, X):
        """Signed distance-like value ``a . x - b`` (zero on the seam)."""
        return X @ self.normal - self.offset

    def apply(self, X):
        return X @ self.matrix.T + self.shift

    def inverse(self):
        Minv = np.round(np.linalg.inv(self.matrix)).astype(np.int64)
        a2 = Minv.T @ self.normal
        b2 = self.offset + float(a2 @ self.shift)
        return Piece(a2.astype(float), b2, Minv, -(Minv @ self.shift))

    def seam_defect(self):
        """How far the piece is from fixing its seam hyperplane pointwise."""
        if self.everywhere:
            return 0.0
        a = self.normal
        D = self.matrix - np.eye(self.dim)
        x0 = a * self.offset / float(a @ a)
        defect = np.abs(D @ x0 + self.shift).max()
        V = null_space(a[None, :])
        if V.size:
            defect = max(defect, np.abs(D @ V).max())
        return float(defect)

    def folds(self):
        """True if the piece sends its half-space across the seam."""
        if self.everywhere:
            return False
        a = self.normal
        return float(a @ self.matrix @ a) / float(a @ a) <= 0.0

    def to_dict(self):
        return {
            "halfspace": [float(v) for v in self.normal] + [float(self.offset)],
            "matrix": self.matrix.tolist(),
            "shift": [float(v) for v in self.shift],
        }


class PiecewiseUnimodularMap(BaseEstimator, TransformerMixin):
    """Ordered piecewise unimodular map with an optional global part.

    Parameters
    ----------
    pieces : list of dict or Piece
        Each dict has ``halfspace`` (``[a_1, ..., a_n, b]`` for the closed
        half-space ``a . x <= b``), ``matrix`` (integer, det +-1) and an
        optional ``shift``.
    final : dict, optional
        ``{"matrix": ..., "shift": ...}`` applied to every point last.
    continuity_tol : float
        Allowed seam mismatch; each piece must fix its own hyperplane.

    ``fit`` only validates the parameters, so ``X`` is optional.
    """

    def __init__(self, pieces=(), final=None, continuity_tol=SEAM_TOL):
        self.pieces = pieces
        self.final = final
        self.continuity_tol = continuity_tol

    def fit(self, X=None, y=None):
        stages = [Piece.parse(p) for p in self.pieces]
        if self.final is not None:
            f = self.final
            if isinstance(f, Piece):
                stages.append(f)
            else:
                M = check_integer_matrix(f["matrix"])
                s = np.asarray(f.get("shift", np.zeros(M.shape[0])), dtype=float)
                stages.append(Piece(np.zeros(M.shape[0]), 0.0, M, s))
        if not stages:
            dim = None if X is None else check_points(X).shape[1]
        else:
            dims = {p.dim for p in stages}
            if len(dims) != 1:
                raise DomainError(f"pieces have mixed dimensions {sorted(dims)}")
            dim = dims.pop()
        for p in stages:
            d = p.seam_defect()
            if d > self.continuity_tol:
                raise DomainError(f"seam discontinuity {d:.3g} exceeds {self.continuity_tol}")
            if p.folds():
                raise DomainError("a piece folds its half-space across the seam")
        self.stages_ = stages
        self.n_features_in_ = dim
        return self

    def _fitted(self):
        if not hasattr(self, "stages_"):
            self.fit()
        return self

    def _check(self, X):
        return check_points(X, self.n_features_in_)

    def transform(self, X):
        self._fitted()
        Y = self._check(X).copy()
        for p in self.stages_:
            if p.is_identity:
                continue
            mask = p.selects(Y)
            if mask.any():
                Y[mask] = p.apply(Y[mask])
        return Y

    def inverse_transform(self, X):
        self._fitted()
        Y = self._check(X).copy()
        for p in reversed(self.stages_):
            if p.is_identity:
                continue
            q = p.inverse()
            mask = q.selects(Y)
            if mask.any():
                Y[mask] = q.apply(Y[mask])
        return Y

    def inverse(self):
        """A fitted map undoing this one."""
        self._fitted()
        inv = PiecewiseUnimodularMap([p.inverse() for p in reversed(self.stages_)], None, self.continuity_tol)
        return inv.fit()

    @property
    def is_identity(self):
        self._fitted()
        return all(p.is_identity for p in self.stages_)

    def to_dict(self):
        out = {"pieces": [Piece.parse(p).to_dict() for p in self.pieces]}
        if self.final is not None:
            f = self.final
            if isinstance(f, Piece):
                f = {"matrix": f.matrix.tolist(), "shift": list(map(float, f.shift))}
            out["global"] = {"matrix": np.asarray(f["matrix"]).tolist(),
                             "shift": [float(v) for v in f.get("shift", [0.0] * len(f["matrix"]))]}
        return out

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict) or "pieces" not in d:
            raise DomainError("map JSON needs a 'pieces' list")
        return cls(list(d["pieces"]), d.get("global"))

    @classmethod
    def from_json(cls, path):
        with open(path, encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise DomainError(f"map file is not valid JSON: {exc}") from exc
        return cls.from_dict(data).fit()


def _shear(rows):
    return [list(r) for r in rows]


PRESETS = {
    # left half-plane sheared, then the global matrix of the figure
    "fig2": {
        "pieces": [{"halfspace": [1, 0, 0], "matrix": _shear([[1, 0], [-1, 1]])}],
        "global": {"matrix": _shear([[1, 1], [0, 1]])},
    },
    "fig5": {
        "pieces": [{"halfspace": [1, 0, 0], "matrix": _shear([[1, 0], [-1, 1]])}],
        "global": {"matrix": _shear([[1, 1], [0, 1]])},
    },
    "lemma-s3": {
        "pieces": [
            {"halfspace": [1, 0, 0, 0], "matrix": _shear([[1, 0, 0], [0, 1, 0], [-1, 0, 1]])},
            {"halfspace": [0, 1, 0, 0], "matrix": _shear([[1, 0, 0], [0, 1, 0], [0, -1, 1]])},
        ],
        "global": {"matrix": _shear([[1, 0, 1], [0, 1, 0], [0, 0, 1]])},
    },
}


def preset(name):
    """Fitted map for one of ``fig2``, ``fig5``, ``lemma-s3``."""
    try:
        spec = PRESETS[name]
    except KeyError as exc:
        raise DomainError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from exc
    return PiecewiseUnimodularMap.from_dict(json.loads(json.dumps(spec))).fit()


# ----------------------------------------------------------- application


def _split_ring(P, piece):
    """Insert the crossings of a closed ring with the piece's seam."""
    if piece.everywhere or piece.is_identity:
        return P
    d = piece.side(P)
    Q = np.roll(P, -1, axis=0)
    dq = np.roll(d, -1)
    out = []
    for k in range(len(P)):
        out.append(P[k])
        if (d[k] < 0 < dq[k]) or (dq[k] < 0 < d[k]):
            t = d[k] / (d[k] - dq[k])
            x = P[k] + t * (Q[k] - P[k])
            # land exactly on the seam along the normal's dominant axis
            i = int(np.argmax(np.abs(piece.normal)))
            rest = x @ piece.normal - x[i] * piece.normal[i]
            x[i] = (piece.offset - rest) / piece.normal[i]
            out.append(x)
    return np.array(out)


def _map_diagram(d, m):
    P = np.array(d.boundary, dtype=float)
    nodes = np.array([c.node for c in d.cuts], dtype=float).reshape(-1, 2)
    dirs = np.array([c.direction for c in d.cuts], dtype=np.int64).reshape(-1, 2)
    for p in m.stages_:
        if p.is_identity:
            continue
        P = _split_ring(P, p)
        mask = p.selects(P)
        P[mask] = p.apply(P[mask])
        if len(nodes):
            sel = p.selects(nodes)
            nodes[sel] = p.apply(nodes[sel])
            dirs[sel] = dirs[sel] @ p.matrix.T
    if not np.all(np.isfinite(P)):
        raise DomainError("mapped boundary is not finite")
    cuts = tuple(Cut(tuple(n), tuple(v)) for n, v in zip(nodes, dirs))
    labels = dict(d.labels)
    labels["maps"] = list(labels.get("maps", [])) + [m.to_dict()]
    return BaseDiagram2D(P, cuts, labels)


def _map_region(r, m):
    for p in m.stages_:
        if p.everywhere or p.is_identity:
            continue
        s = p.side(r.points)[r.triangles]
        straddle = np.any((s.min(axis=1) < -SEAM_TOL) & (s.max(axis=1) > SEAM_TOL))
        if straddle:
            warnings.warn("a seam cuts through mesh triangles; volume is only approximately preserved",
                          RuntimeWarning, stacklevel=3)
            break
    labels = dict(r.labels)
    labels["maps"] = list(labels.get("maps", [])) + [m.to_dict()]
    return BaseRegion3D(
        m.transform(r.points), m.transform(r.base_points), r.triangles.copy(), r.boundary.copy(),
        r.field, tuple(r.maps) + (m,), labels,
    )


def _clip_points(V, piece):
    """Vertices of the two sides of conv(V) cut by the piece's seam."""
    d = piece.side(V)
    cross = []
    for i in range(len(V)):
        for j in range(i + 1, len(V)):
            if (d[i] < 0 < d[j]) or (d[j] < 0 < d[i]):
                t = d[i] / (d[i] - d[j])
                cross.append(V[i] + t * (V[j] - V[i]))
    cross = np.array(cross).reshape(-1, V.shape[1])
    on = np.abs(d) == 0
    inside = np.vstack([V[d < 0], V[on], cross])
    outside = np.vstack([V[d > 0], V[on], cross])
    return inside, outside


def _hull_vertices(V):
    try:
        h = ConvexHull(V)
        return V[np.sort(h.vertices)]
    except (QhullError, ValueError):
        return V


def _map_polytope(poly, m):
    parts = [np.array(poly.vertices, dtype=float)]
    for p in m.stages_:
        if p.is_identity:
            continue
        nxt = []
        for V in parts:
            if p.everywhere:
                nxt.append(p.apply(V) if p.offset >= 0 else V)
                continue
            inside, outside = _clip_points(V, p)
            if len(inside) > V.shape[1]:
                nxt.append(p.apply(inside))
            if len(outside) > V.shape[1]:
                nxt.append(outside)
        parts = [_hull_vertices(V) for V in nxt]
    hull = _hull_vertices(np.vstack(parts))
    total = sum(convex_volume(V) for V in parts)
    hv = convex_volume(hull)
    if hv > 0 and abs(hv - total) > 1e-9 * hv:
        warnings.warn("image of the polytope is not convex; returning its convex hull",
                      RuntimeWarning, stacklevel=3)
    return Polytope(hull)


def apply_map(obj, m):
    """Apply a piecewise unimodular map to a diagram, region, polytope or points.

    Diagram boundaries are split where they cross a seam so the image is
    exact; regions keep their mesh and record the map for containment
    tests; polytopes are clipped at the seams and rebuilt from the image
    vertices.
    """
    if not isinstance(m, PiecewiseUnimodularMap):
        raise DomainError("m must be a PiecewiseUnimodularMap")
    m._fitted()
    if m.n_features_in_ is not None and getattr(obj, "ndim", None) not in (None, m.n_features_in_):
        raise DomainError(f"map acts on R^{m.n_features_in_} but the object is {obj.ndim}-dimensional")
    if isinstance(obj, BaseDiagram2D):
        return obj if m.is_identity else _map_diagram(obj, m)
    if isinstance(obj, BaseRegion3D):
        return _map_region(obj, m)
    if isinstance(obj, Polytope):
        return obj if m.is_identity else _map_polytope(obj, m)
    return m.transform(obj)
