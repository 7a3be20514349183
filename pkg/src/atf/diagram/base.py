"""Base diagram / base region containers and their geometry.

Coordinates are in action units: moment values already carry the 2*pi
factor, heights are disk areas.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .._validation import check_points, check_scalar
from ..exceptions import DomainError


@dataclass(frozen=True)
class Cut:
    """A node (focus-focus singular value) with its branch-cut ray."""

    node: tuple
    direction: tuple

    def __post_init__(self):
        object.__setattr__(self, "node", tuple(float(v) for v in self.node))
        d = tuple(int(round(v)) for v in self.direction)
        if not any(d):
            raise DomainError("cut direction must be a nonzero integer vector")
        object.__setattr__(self, "direction", d)


@dataclass(frozen=True, eq=False)
class BaseDiagram2D:
    """Closed boundary polygon of a planar base plus its branch cuts.

    ``boundary`` lists the vertices once; the closing edge from the last
    vertex back to the first is implicit (for the constructed diagrams it
    runs along the x-axis).
    """

    boundary: np.ndarray
    cuts: tuple = ()
    labels: dict = field(default_factory=dict)

    def __post_init__(self):
        pts = check_points(self.boundary, 2, "boundary")
        if len(pts) < 3:
            raise DomainError("a region boundary needs at least 3 vertices")
        pts.setflags(write=False)
        object.__setattr__(self, "boundary", pts)
        object.__setattr__(self, "cuts", tuple(self.cuts))

    @property
    def ndim(self):
        return 2

    def closed(self):
        return np.vstack([self.boundary, self.boundary[:1]])


@dataclass(frozen=True, eq=False)
class Polytope:
    """Convex hull of a finite vertex set."""

    vertices: np.ndarray

    def __post_init__(self):
        v = check_points(self.vertices, None, "vertices")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    @property
    def ndim(self):
        return self.vertices.shape[1]

    def volume(self):
        return convex_volume(self.vertices)


def convex_volume(points):
    try:
        return float(ConvexHull(points).volume)
    except (QhullError, ValueError):
        return 0.0


class RhombusHeightField:
    """Piecewise-linear height function over the rhombus
    ``|x|/r1 + |y|/r2 <= 1``, sampled on a barycentric lattice.

    ``heights[i, j]`` is the height at ``(i/n * r1, j/n * r2)`` for
    ``i + j <= n``; the field is even in both coordinates.
    """

    def __init__(self, r1, r2, heights):
        self.r1 = float(r1)
        self.r2 = float(r2)
        self.heights = np.asarray(heights, dtype=float)
        self.n = self.heights.shape[0] - 1

    def height(self, x, y):
        x = np.abs(np.asarray(x, dtype=float))
        y = np.abs(np.asarray(y, dtype=float))
        n = self.n
        a = x / self.r1 * n
        b = y / self.r2 * n
        out = np.full(np.broadcast(a, b).shape, np.nan)
        inside = a + b <= n * (1 + 1e-12)
        a, b = np.broadcast_to(a, out.shape)[inside], np.broadcast_to(b, out.shape)[inside]
        i = np.minimum(np.floor(a).astype(int), n - 1)
        j = np.minimum(np.floor(b).astype(int), n - 1)
        # points on the outer edge belong to the cell below-left of them
        over = i + j > n - 1
        shift_i = over & (i > 0)
        i = np.where(shift_i, i - 1, i)
        j = np.where(over & ~shift_i, j - 1, j)
        fa, fb = a - i, b - j
        H = self.heights
        h00, h10, h01 = H[i, j], H[i + 1, j], H[i, j + 1]
        lower = fa + fb <= 1.0
        h11 = np.where(lower, 0.0, np.nan_to_num(H[i + 1, np.minimum(j + 1, n)]))
        lo_val = h00 + fa * (h10 - h00) + fb * (h01 - h00)
        up_val = h11 + (1 - fb) * (h10 - h11) + (1 - fa) * (h01 - h11)
        out[inside] = np.where(lower, lo_val, up_val)
        return out

    def edge_distance(self, x, y):
        """Signed Euclidean distance to the rhombus boundary (positive inside)."""
        x = np.abs(np.asarray(x, dtype=float))
        y = np.abs(np.asarray(y, dtype=float))
        norm = np.hypot(1.0 / self.r1, 1.0 / self.r2)
        return (1.0 - x / self.r1 - y / self.r2) / norm

    def contains(self, P, margin=0.0):
        P = np.asarray(P, dtype=float)
        x, y, h = P[:, 0], P[:, 1], P[:, 2]
        ok = self.edge_distance(x, y) >= margin
        top = np.full(len(P), -np.inf)
        top[ok] = self.height(x[ok], y[ok])
        return ok & (h >= margin) & (h <= top - margin)

    def to_dict(self):
        H = np.where(np.isnan(self.heights), None, self.heights)
        return {"r1": self.r1, "r2": self.r2, "heights": H.tolist()}

    @classmethod
    def from_dict(cls, d):
        H = np.array([[np.nan if v is None else v for v in row] for row in d["heights"]], dtype=float)
        return cls(d["r1"], d["r2"], H)


@dataclass(eq=False)
class BaseRegion3D:
    """Solid base region bounded by a height surface over a rhombus.

    ``points`` are the top-surface vertices ``(mu1, mu2, height)`` and
    ``base_points`` the matching bottom vertices (height 0 before any
    mutation); both share ``triangles``. ``boundary`` indexes the rhombus
    outline, where top and bottom coincide. ``maps`` records the mutations
    applied since construction so containment can be decided in the
    original coordinates.
    """

    points: np.ndarray
    base_points: np.ndarray
    triangles: np.ndarray
    boundary: np.ndarray
    field: RhombusHeightField
    maps: tuple = ()
    labels: dict = field(default_factory=dict)

    @property
    def ndim(self):
        return 3

    def closed_mesh(self):
        """Vertices and outward-oriented faces of the closed surface."""
        n = len(self.points)
        verts = np.vstack([self.points, self.base_points])
        top = self.triangles
        bottom = self.triangles[:, ::-1] + n
        return verts, np.vstack([top, bottom])


def lattice_region(r1, r2, heights, labels=None):
    """Triangulated rhombus region from quadrant heights (see RhombusHeightField)."""
    heights = np.asarray(heights, dtype=float)
    n = heights.shape[0] - 1
    index = {}
    pts = []
    for I in range(-n, n + 1):
        for J in range(-(n - abs(I)), n - abs(I) + 1):
            index[(I, J)] = len(pts)
            pts.append((I / n * r1, J / n * r2, heights[abs(I), abs(J)]))
    pts = np.array(pts)
    tris = []
    for s1 in (1, -1):
        for s2 in (1, -1):
            for i in range(n):
                for j in range(n - i):
                    cells = [((i, j), (i + 1, j), (i, j + 1))]
                    if i + j <= n - 2:
                        cells.append(((i + 1, j), (i + 1, j + 1), (i, j + 1)))
                    for cell in cells:
                        t = [index[(s1 * p, s2 * q)] for p, q in cell]
                        if s1 * s2 < 0:
                            t = t[::-1]
                        tris.append(t)
    tris = np.array(tris, dtype=np.int64)
    # rhombus outline, counterclockwise from (r1, 0)
    ring = []
    for k in range(n):
        ring.append((n - k, k))
    for k in range(n):
        ring.append((-k, n - k))
    for k in range(n):
        ring.append((-(n - k), -k))
    for k in range(n):
        ring.append((k, -(n - k)))
    boundary = np.array([index[p] for p in ring], dtype=np.int64)
    base = pts.copy()
    base[:, 2] = 0.0
    field_ = RhombusHeightField(r1, r2, heights)
    return BaseRegion3D(pts, base, tris, boundary, field_, (), dict(labels or {}))


# ---------------------------------------------------------------- geometry


def polygon_signed_area(P):
    P = np.asarray(P, dtype=float)
    x, y = P[:, 0], P[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def region_area(d: BaseDiagram2D) -> float:
    """Shoelace area of the closed boundary polygon."""
    if not isinstance(d, BaseDiagram2D):
        raise DomainError("region_area expects a BaseDiagram2D")
    return abs(polygon_signed_area(d.boundary))


def mesh_volume(verts, faces):
    v0, v1, v2 = verts[faces[:, 0]], verts[faces[:, 1]], verts[faces[:, 2]]
    return float(np.einsum("ij,ij->i", v0, np.cross(v1, v2)).sum() / 6.0)


def region_volume(r) -> float:
    """Volume enclosed by a region's closed surface (or a polytope's hull)."""
    if isinstance(r, Polytope):
        return r.volume()
    if not isinstance(r, BaseRegion3D):
        raise DomainError("region_volume expects a BaseRegion3D or Polytope")
    verts, faces = r.closed_mesh()
    return abs(mesh_volume(verts, faces))


def _segment_distance(P, A, B):
    """Distances from points P (k,2) to segments A->B (m,2); returns (k, m)."""
    AB = B - A
    L2 = np.einsum("ij,ij->i", AB, AB)
    L2 = np.where(L2 == 0, 1.0, L2)
    AP = P[:, None, :] - A[None, :, :]
    t = np.clip(np.einsum("kmj,mj->km", AP, AB) / L2, 0.0, 1.0)
    proj = A[None, :, :] + t[..., None] * AB[None, :, :]
    return np.linalg.norm(P[:, None, :] - proj, axis=2)


def _even_odd(P, poly):
    x, y = P[:, 0][:, None], P[:, 1][:, None]
    x0, y0 = poly[:, 0][None, :], poly[:, 1][None, :]
    x1, y1 = np.roll(poly[:, 0], -1)[None, :], np.roll(poly[:, 1], -1)[None, :]
    crosses = (y0 > y) != (y1 > y)
    with np.errstate(divide="ignore", invalid="ignore"):
        xint = x0 + (y - y0) * (x1 - x0) / (y1 - y0)
    return np.count_nonzero(crosses & (x < xint), axis=1) % 2 == 1


def polygon_contains(P, poly, margin=0.0, chunk=2048):
    """Closed even-odd containment shrunk by ``margin`` (distance to edges)."""
    P = np.asarray(P, dtype=float)
    poly = np.asarray(poly, dtype=float)
    A, B = poly, np.roll(poly, -1, axis=0)
    out = np.empty(len(P), dtype=bool)
    for s in range(0, len(P), chunk):
        Q = P[s:s + chunk]
        dist = _segment_distance(Q, A, B).min(axis=1)
        inside = _even_odd(Q, poly) | (dist <= 1e-12)
        out[s:s + chunk] = inside & (dist >= margin)
    return out


def contains(d, p, margin: float = 0.0):
    """Point-in-region test; ``p`` may be one point or an array of points.

    2D regions use an even-odd test on the closed boundary; 3D regions pull
    the point back through the recorded mutations and compare with the
    interpolated height column. A positive ``margin`` excludes points
    closer than ``margin`` to the boundary.
    """
    margin = check_scalar(margin, "margin", nonneg=True)
    single = np.ndim(p) == 1
    P = check_points(p, d.ndim, "p")
    if isinstance(d, BaseDiagram2D):
        res = polygon_contains(P, d.boundary, margin)
    elif isinstance(d, BaseRegion3D):
        Q = P
        for m in reversed(d.maps):
            Q = m.inverse_transform(Q)
        res = d.field.contains(Q, margin)
    else:
        raise DomainError(f"cannot test containment in {type(d).__name__}")
    return bool(res[0]) if single else res
