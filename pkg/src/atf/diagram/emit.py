"""File output for diagrams and regions: CSV, SVG, OBJ and JSON.

Conventions
-----------
* CSV: header ``mu,area`` (planar) or ``mu1,mu2,area`` (spatial), one
  sample per row, shortest round-trip float repr, ``\\n`` line endings.
* SVG: one action unit is 40 user units, y axis pointing up. The boundary
  is a closed path, each cut a dashed ray from its node to the boundary,
  each node a ``×`` text glyph. Coordinates carry 4 decimals.
* OBJ: top height surface only, faces counterclockwise seen from +height.
* JSON: lossless dump of every field, including cuts, mesh and the
  recorded mutations.

All writers go through a temporary file in the target directory followed
by an atomic rename.
"""
from __future__ import annotations

import json
import os
import tempfile

import numpy as np

from ..exceptions import DomainError
from .base import BaseDiagram2D, BaseRegion3D, Cut, Polytope, RhombusHeightField
from .maps import PiecewiseUnimodularMap

SVG_SCALE = 40.0
SVG_PAD = 20.0
FORMATS = ("csv", "svg", "obj", "json")


def atomic_write(path, text):
    path = os.fspath(path)
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".atf-", dir=folder)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.chmod(tmp, 0o644)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ------------------------------------------------------------------ CSV


def _rows(header, X):
    lines = [header]
    lines.extend(",".join(repr(float(v)) for v in row) for row in X)
    return "\n".join(lines) + "\n"


def to_csv(d):
    if isinstance(d, BaseDiagram2D):
        return _rows("mu,area", d.boundary)
    if isinstance(d, BaseRegion3D):
        return _rows("mu1,mu2,area", d.points)
    if isinstance(d, Polytope):
        if d.ndim != 3:
            raise DomainError("CSV polytopes must be 3-dimensional")
        return _rows("mu1,mu2,area", d.vertices)
    raise DomainError(f"cannot write {type(d).__name__} as CSV")


def read_csv(path):
    """Samples and column names from a file written by :func:`to_csv`."""
    with open(path, encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines:
        raise DomainError(f"{path}: empty file")
    header = lines[0].split(",")
    if header not in (["mu", "area"], ["mu1", "mu2", "area"]):
        raise DomainError(f"{path}: unexpected header {lines[0]!r}")
    try:
        X = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]], dtype=float)
    except ValueError as exc:
        raise DomainError(f"{path}: {exc}") from exc
    if X.size == 0:
        raise DomainError(f"{path}: no samples")
    if X.shape[1] != len(header):
        raise DomainError(f"{path}: ragged rows")
    return X.reshape(-1, len(header)), header


# ------------------------------------------------------------------ SVG


def _ray_exit(node, direction, poly):
    """First point where the ray leaves the closed polygon (or None)."""
    p = np.asarray(node, dtype=float)
    v = np.asarray(direction, dtype=float)
    A, B = poly, np.roll(poly, -1, axis=0)
    best = None
    for a, b in zip(A, B):
        e = b - a
        den = v[0] * (-e[1]) + e[0] * v[1]
        if den == 0:
            continue
        w = a - p
        t = (w[0] * (-e[1]) + e[0] * w[1]) / den
        s = (v[0] * w[1] - v[1] * w[0]) / den
        if t > 1e-12 and -1e-12 <= s <= 1 + 1e-12 and (best is None or t < best):
            best = t
    return None if best is None else p + best * v


def to_svg(d):
    if not isinstance(d, BaseDiagram2D):
        raise DomainError("SVG output needs a planar diagram")
    P = d.boundary
    lo = P.min(axis=0)
    hi = P.max(axis=0)
    w = (hi[0] - lo[0]) * SVG_SCALE + 2 * SVG_PAD
    h = (hi[1] - lo[1]) * SVG_SCALE + 2 * SVG_PAD

    def xy(p):
        x = (p[0] - lo[0]) * SVG_SCALE + SVG_PAD
        y = (hi[1] - p[1]) * SVG_SCALE + SVG_PAD
        return f"{x:.4f} {y:.4f}"

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w:.4f}" height="{h:.4f}" viewBox="0 0 {w:.4f} {h:.4f}">',
        f"<!-- base diagram: 1 action unit = {SVG_SCALE:g} user units; dashed lines are cuts, x glyphs are nodes -->",
    ]
    path = "M " + " L ".join(xy(p) for p in P) + " Z"
    out.append(f'<path d="{path}" fill="none" stroke="black" stroke-width="1"/>')
    for cut in d.cuts:
        end = _ray_exit(cut.node, cut.direction, P)
        if end is not None:
            a, b = xy(cut.node).split(), xy(end).split()
            out.append(
                f'<line x1="{a[0]}" y1="{a[1]}" x2="{b[0]}" y2="{b[1]}" '
                'stroke="black" stroke-width="1" stroke-dasharray="4 3"/>'
            )
    for cut in d.cuts:
        x, y = xy(cut.node).split()
        out.append(
            f'<text x="{x}" y="{y}" font-size="14" text-anchor="middle" '
            'dominant-baseline="central">×</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


# ------------------------------------------------------------------ OBJ


def to_obj(r):
    if not isinstance(r, BaseRegion3D):
        raise DomainError("OBJ output needs a spatial region")
    lines = ["# base region top surface; faces counterclockwise seen from +height"]
    lines.extend(f"v {x!r} {y!r} {z!r}" for x, y, z in r.points.tolist())
    lines.extend(f"f {a + 1} {b + 1} {c + 1}" for a, b, c in r.triangles.tolist())
    return "\n".join(lines) + "\n"


def read_obj(path):
    verts, faces = [], []
    with open(path, encoding="utf-8") as fh:
        for ln in fh:
            parts = ln.split()
            if not parts:
                continue
            if parts[0] == "v":
                verts.append([float(v) for v in parts[1:4]])
            elif parts[0] == "f":
                faces.append([int(v.split("/")[0]) - 1 for v in parts[1:4]])
    return np.array(verts, dtype=float), np.array(faces, dtype=np.int64)


# ----------------------------------------------------------------- JSON


def _to_jsonable(d):
    if isinstance(d, BaseDiagram2D):
        return {
            "kind": "diagram2d",
            "boundary": d.boundary.tolist(),
            "cuts": [{"node": list(c.node), "direction": list(c.direction)} for c in d.cuts],
            "labels": d.labels,
        }
    if isinstance(d, BaseRegion3D):
        return {
            "kind": "region3d",
            "points": d.points.tolist(),
            "base_points": d.base_points.tolist(),
            "triangles": d.triangles.tolist(),
            "boundary": d.boundary.tolist(),
            "field": d.field.to_dict(),
            "maps": [m.to_dict() for m in d.maps],
            "labels": {k: v for k, v in d.labels.items() if k != "maps"},
        }
    if isinstance(d, Polytope):
        return {"kind": "polytope", "vertices": d.vertices.tolist()}
    raise DomainError(f"cannot serialize {type(d).__name__}")


def to_json(d):
    return json.dumps(_to_jsonable(d), indent=1, sort_keys=True) + "\n"


def from_json_data(data):
    kind = data.get("kind") if isinstance(data, dict) else None
    if kind == "diagram2d":
        cuts = tuple(Cut(c["node"], c["direction"]) for c in data.get("cuts", []))
        return BaseDiagram2D(np.array(data["boundary"], dtype=float), cuts, dict(data.get("labels", {})))
    if kind == "region3d":
        maps = tuple(PiecewiseUnimodularMap.from_dict(m).fit() for m in data.get("maps", []))
        labels = dict(data.get("labels", {}))
        if maps:
            labels["maps"] = [m.to_dict() for m in maps]
        return BaseRegion3D(
            np.array(data["points"], dtype=float),
            np.array(data["base_points"], dtype=float),
            np.array(data["triangles"], dtype=np.int64),
            np.array(data["boundary"], dtype=np.int64),
            RhombusHeightField.from_dict(data["field"]),
            maps,
            labels,
        )
    if kind == "polytope":
        return Polytope(np.array(data["vertices"], dtype=float))
    raise DomainError("JSON file does not describe a diagram, region or polytope")


# ---------------------------------------------------------------- entry


def render(d, fmt):
    fmt = str(fmt).lower()
    if fmt == "csv":
        return to_csv(d)
    if fmt == "svg":
        return to_svg(d)
    if fmt == "obj":
        return to_obj(d)
    if fmt == "json":
        return to_json(d)
    raise DomainError(f"unknown format {fmt!r}; choose from {', '.join(FORMATS)}")


def emit(d, fmt, path):
    """Write ``d`` to ``path`` in ``fmt`` (csv, svg, obj or json)."""
    text = render(d, fmt)
    atomic_write(path, text)
    return path


def load(path):
    """Read a diagram, region or polytope back from CSV or JSON.

    Planar CSV files give a diagram without cuts; three-column CSV files
    are read as polytope vertices.
    """
    path = os.fspath(path)
    if path.endswith(".json"):
        with open(path, encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise DomainError(f"{path}: invalid JSON ({exc})") from exc
        return from_json_data(data)
    X, header = read_csv(path)
    if len(header) == 2:
        if len(X) < 3:
            raise DomainError(f"{path}: a planar region needs at least 3 samples")
        return BaseDiagram2D(X)
    return Polytope(X)
