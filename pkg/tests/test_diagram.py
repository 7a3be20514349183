import json
import math
import os

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from atf import bidisk, ellipsoid3, revolution
from atf.diagram import (
    BaseDiagram2D,
    Cut,
    Piece,
    PiecewiseUnimodularMap,
    Polytope,
    apply_map,
    contains,
    emit,
    load,
    preset,
    read_csv,
    read_obj,
    region_area,
    region_volume,
    render,
)
from atf.diagram.base import mesh_volume
from atf.exceptions import DomainError

SQUARE = BaseDiagram2D(np.array([[0, 0], [1, 0], [1, 1], [0, 1]], dtype=float))


# containers and geometry


def test_unit_square_area_and_containment():
    assert region_area(SQUARE) == pytest.approx(1.0)
    assert contains(SQUARE, [0.5, 0.5], 0.0)
    assert not contains(SQUARE, [2.0, 0.5], 0.0)
    assert contains(SQUARE, [1.0, 0.5], 0.0)
    assert not contains(SQUARE, [1.0, 0.5], 1e-3)


@settings(max_examples=40, deadline=None)
@given(st.floats(0, 1), st.floats(0, 1), st.floats(0, 0.3), st.floats(0, 0.3))
def test_containment_monotone_in_margin(x, y, m1, m2):
    lo, hi = sorted((m1, m2))
    if contains(SQUARE, [x, y], hi):
        assert contains(SQUARE, [x, y], lo)


def test_diagram_validation():
    with pytest.raises(DomainError):
        BaseDiagram2D(np.zeros((2, 2)))
    with pytest.raises(DomainError):
        Cut((0, 0), (0, 0))
    d = BaseDiagram2D(np.eye(3)[:, :2] + 0.1)
    with pytest.raises(ValueError):
        d.boundary[0, 0] = 5


def test_polytope_volume():
    P = Polytope(np.vstack([np.zeros(3), np.eye(3)]))
    assert P.volume() == pytest.approx(1 / 6)


def test_region_volume_c1_and_rhombus_edge_margin():
    r = ellipsoid3.base_region(1.0, 8)
    assert region_volume(r) == pytest.approx(8 * math.pi ** 3 / 3, rel=1e-12)
    edge = np.array([math.pi, math.pi, 0.0])
    assert not contains(r, edge, 1e-3)
    assert contains(r, [0.0, 0.0, 1.0], 1e-3)
    assert not contains(r, [0.0, 0.0, 4.0], 0.0)


def test_closed_mesh_volume_matches():
    r = ellipsoid3.base_region(2.0, 8)
    V, F = r.closed_mesh()
    assert mesh_volume(V, F) == pytest.approx(region_volume(r), rel=1e-12)


# maps


def test_piece_rejects_non_unimodular():
    with pytest.raises(DomainError):
        Piece.parse({"halfspace": [1, 0, 0], "matrix": [[2, 0], [0, 1]]})
    with pytest.raises(DomainError):
        Piece.parse({"halfspace": [1, 0, 0], "matrix": [[1, 0.5], [0, 1]]})


def test_discontinuous_piece_rejected():
    # the shear moves points on the seam mu1 = 0 itself
    m = PiecewiseUnimodularMap([{"halfspace": [1, 0, 0], "matrix": [[1, 1], [0, 1]]}])
    with pytest.raises(DomainError):
        m.fit()


def test_identity_map_bit_identical():
    m = PiecewiseUnimodularMap([], {"matrix": [[1, 0], [0, 1]]}).fit()
    d = revolution.boundary_curve(revolution.ProfileCurve.ellipsoid(2.0), 64)
    assert m.is_identity
    out = apply_map(d, m)
    assert np.array_equal(out.boundary, d.boundary)
    X = np.random.default_rng(0).normal(size=(50, 2))
    assert np.array_equal(m.transform(X), X)


def test_fig2_single_point():
    m = preset("fig2")
    # mu <= 0: (1 0; -1 1) then (1 1; 0 1)
    assert m.transform([[-1.0, 3.0]])[0] == pytest.approx([3.0, 4.0])
    assert m.transform([[2.0, 3.0]])[0] == pytest.approx([5.0, 3.0])


def test_lemma_map_on_first_octant_vertex():
    eps = 0.01
    m = preset("lemma-s3")
    v = m.transform([[2 * math.pi - eps, eps / 2, eps / 4]])[0]
    assert v == pytest.approx([2 * math.pi - 3 * eps / 4, eps / 2, eps / 4], abs=1e-12)


@pytest.mark.parametrize("name", ["fig2", "fig5"])
@pytest.mark.parametrize("c", [0.5, 2.0])
def test_planar_presets_preserve_area(name, c):
    d = revolution.boundary_curve(revolution.ProfileCurve.ellipsoid(c), 256)
    out = apply_map(d, preset(name))
    assert region_area(out) == pytest.approx(region_area(d), rel=1e-9)
    assert len(out.cuts) == 2


def test_bidisk_preset_preserves_area():
    d = bidisk.base_diagram(256)
    assert region_area(apply_map(d, preset("fig5"))) == pytest.approx(region_area(d), rel=1e-9)


@pytest.mark.parametrize("c", [1.0, 0.5])
def test_lemma_preset_preserves_volume(c):
    r = ellipsoid3.base_region(c, 8)
    assert region_volume(apply_map(r, preset("lemma-s3"))) == pytest.approx(region_volume(r), rel=1e-9)


@pytest.mark.parametrize("name", ["fig2", "lemma-s3"])
def test_inverse_round_trip(name):
    m = preset(name)
    dim = m.n_features_in_
    X = np.random.default_rng(1).uniform(-5, 5, size=(200, dim))
    X = X[np.all(np.abs(X) > 1e-3, axis=1)]
    assert np.allclose(m.inverse_transform(m.transform(X)), X, atol=1e-12)
    assert np.allclose(m.inverse().transform(m.transform(X)), X, atol=1e-12)


def test_map_json_round_trip(tmp_path):
    m = preset("lemma-s3")
    path = tmp_path / "m.json"
    path.write_text(json.dumps(m.to_dict()))
    m2 = PiecewiseUnimodularMap.from_json(path)
    X = np.random.default_rng(2).normal(size=(20, 3))
    assert np.array_equal(m.transform(X), m2.transform(X))


def test_cut_direction_follows_matrix():
    d = revolution.boundary_curve(revolution.ProfileCurve.ellipsoid(1.0), 64)
    out = apply_map(d, preset("fig2"))
    # nodes sit on the seam mu = 0 and are selected by the left piece
    assert {c.direction for c in out.cuts} == {(1, 1)}


# emission


def test_csv_round_trip_bit_exact(tmp_path):
    d = bidisk.base_diagram(64)
    path = tmp_path / "b.csv"
    emit(d, "csv", path)
    X, header = read_csv(path)
    assert header == ["mu", "area"]
    assert np.array_equal(X, d.boundary)
    raw = path.read_bytes()
    assert b"\r" not in raw and raw.startswith(b"mu,area\n")


def test_svg_conventions():
    svg = render(SQUARE, "svg")
    assert "stroke-dasharray" not in svg and "×" not in svg
    d = bidisk.base_diagram(64)
    svg = render(d, "svg")
    assert svg.count("stroke-dasharray") == 1 and svg.count("×") == 1
    assert "1 action unit = 40 user units" in svg


def test_obj_boundary_at_zero(tmp_path):
    r = ellipsoid3.base_region(1.0, 8)
    path = tmp_path / "r.obj"
    emit(r, "obj", path)
    V, F = read_obj(path)
    assert np.array_equal(V, r.points)
    assert np.all(V[r.boundary, 2] == 0.0)
    # counterclockwise from +height: positive projected signed area
    a, b, c = V[F[:, 0], :2], V[F[:, 1], :2], V[F[:, 2], :2]
    cross = (b - a)[:, 0] * (c - a)[:, 1] - (b - a)[:, 1] * (c - a)[:, 0]
    assert np.all(cross > 0)


def test_json_round_trip(tmp_path):
    r = apply_map(ellipsoid3.base_region(1.0, 8), preset("lemma-s3"))
    path = tmp_path / "r.json"
    emit(r, "json", path)
    r2 = load(path)
    assert np.array_equal(r2.points, r.points)
    assert len(r2.maps) == 1
    p = np.array([[1.0, -0.5, 0.3]])
    assert contains(r2, p, 0.0) == contains(r, p, 0.0)


def test_emit_errors(tmp_path):
    with pytest.raises(DomainError):
        render(SQUARE, "png")
    with pytest.raises(DomainError):
        render(ellipsoid3.base_region(1.0, 8), "svg")
    with pytest.raises(OSError):
        emit(SQUARE, "csv", tmp_path / "missing" / "x.csv")
    assert not [f for f in os.listdir(tmp_path) if f.startswith(".atf-")]
