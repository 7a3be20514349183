import math

import numpy as np
import pytest

from atf import ellipsoid3
from atf.diagram import BaseDiagram2D, apply_map, preset
from atf.embed import (
    OpenSimplex,
    SimplexFitter,
    eps_bound,
    fit_simplex,
    jacobian_determinant,
    psi_inverse,
    pyramid_p_eps,
    pyramid_pbar_eps,
    sample_ball,
    sigma_rho,
    standard_form,
    symplectic_check,
    tetra_volume,
    traynor_embedding,
    traynor_psi,
)
from atf.exceptions import ConvergenceError, DomainError
from atf.numerics import make_rng

TWO_PI = 2 * math.pi


def domain_points(n, r, count, rng):
    x = rng.dirichlet(np.ones(n + 1), size=count)[:, :n] * r * 0.999
    y = rng.uniform(0.01, math.pi - 0.01, size=(count, n))
    P = np.empty((count, 2 * n))
    P[:, 0::2], P[:, 1::2] = x, y
    return P


def test_psi_single_value():
    assert traynor_psi(1, 1.0, [0.5, math.pi / 2]) == pytest.approx([-math.sqrt(0.5), 0.0], abs=1e-15)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_psi_norm_identity_and_inverse(n):
    rng = make_rng(n)
    P = domain_points(n, TWO_PI, 100, rng)
    img = traynor_psi(n, TWO_PI, P)
    assert np.allclose((img ** 2).sum(axis=1), P[:, 0::2].sum(axis=1), rtol=0, atol=1e-14)
    assert np.allclose(psi_inverse(n, img), P, atol=1e-12)


def test_psi_boundary_approach():
    r = 2.0
    img = traynor_psi(2, r, [r / 2 * (1 - 1e-12), 1.0, r / 2 * (1 - 1e-12), 2.0])
    assert (img ** 2).sum() == pytest.approx(r, rel=1e-11)


def test_psi_domain():
    with pytest.raises(DomainError):
        traynor_psi(1, 1.0, [1.5, 1.0])
    with pytest.raises(DomainError):
        traynor_psi(1, 1.0, [0.5, 0.0])


def test_sigma_extreme_scaling_hits_r():
    rho, r = 2.0, 3.0
    eps = eps_bound(rho, r)
    s = rho * (1 - 1e-12)
    out = sigma_rho(rho, r, eps, [-math.sqrt(s), 1e-9])
    assert (out ** 2).sum() == pytest.approx(r, rel=1e-10)


def test_sigma_growth_condition_and_angle_range():
    rho, r = TWO_PI - 0.1, TWO_PI
    rng = make_rng(4)
    P = sample_ball(1, rho, 500, rng)
    out = sigma_rho(rho, r, None, P)
    s, s2 = (P ** 2).sum(axis=1), (out ** 2).sum(axis=1)
    assert np.all(s2 - (s + (r - rho)) <= 1e-12)
    eps = eps_bound(rho, r)
    phi = np.mod(np.arctan2(out[:, 1], out[:, 0]), TWO_PI)
    assert np.all((phi > eps / 2 - 1e-12) & (phi < TWO_PI - eps / 2 + 1e-12))


def test_sigma_preserves_area():
    rho, r = TWO_PI - 0.1, TWO_PI
    P = sample_ball(1, rho, 100, make_rng(5))
    dets = [jacobian_determinant(lambda q: sigma_rho(rho, r, None, q), q, 1e-5) for q in P]
    assert max(abs(d - 1) for d in dets) < 1e-6


def test_sigma_domain():
    with pytest.raises(DomainError):
        sigma_rho(2.0, 1.0, None, [0.1, 0.1])
    with pytest.raises(DomainError):
        sigma_rho(1.0, 2.0, 4.0, [0.1, 0.1])
    with pytest.raises(DomainError):
        sigma_rho(1.0, 2.0, None, [0.5, 0.0])


def test_symplectic_check_linear_maps():
    P = make_rng(6).normal(size=(10, 4))
    assert symplectic_check(lambda x: x, P) <= 1e-12
    D = np.diag([2.0, 0.5, 2.0, 0.5])
    assert symplectic_check(lambda x: D @ x, P) <= 1e-10
    assert symplectic_check(lambda x: 2 * x, P) > 1


@pytest.mark.parametrize("n", [1, 2, 3])
def test_embedding_symplectic_and_contained(n):
    rho, r = TWO_PI - 0.1, TWO_PI
    rng = make_rng(10 + n)
    P = sample_ball(n, rho, 100, rng)
    Wt = standard_form(n, sign=-1.0)
    assert symplectic_check(lambda q: traynor_embedding(n, rho, r, q), P, 1e-5, None, Wt) <= 1e-6
    out = traynor_embedding(n, rho, r, sample_ball(n, rho, 1000, rng))
    x, y = out[:, 0::2], out[:, 1::2]
    assert np.all(x > 0) and np.all(x.sum(axis=1) < r)
    assert np.all((y > 0) & (y < math.pi))


# pyramids


def test_pyramid_vertices_at_eps():
    e = 0.01
    assert np.allclose(pyramid_p_eps(e).vertices, [
        [TWO_PI - e, e / 2, e / 4], [-TWO_PI + e, e / 2, e / 4], [0, TWO_PI - e / 2, e / 4], [0, e / 2, math.pi - e / 4]])
    assert np.allclose(pyramid_pbar_eps(e).vertices, [
        [e / 4, e / 2, e / 4], [TWO_PI - 3 * e / 4, e / 2, e / 4], [e / 4, TWO_PI - e / 2, e / 4],
        [e / 4, e / 2, TWO_PI - 3 * e / 4]])
    with pytest.raises(DomainError):
        pyramid_p_eps(1.5)


def test_pyramid_volumes():
    e = 0.01
    vp = tetra_volume(pyramid_p_eps(e).vertices)
    vq = tetra_volume(pyramid_pbar_eps(e).vertices)
    assert vp == pytest.approx(vq, rel=1e-12)
    assert vq == pytest.approx((TWO_PI - e) ** 3 / 6, rel=1e-12)


def test_pyramid_map_consistency():
    e = 0.01
    img = apply_map(pyramid_p_eps(e), preset("lemma-s3")).vertices
    ref = pyramid_pbar_eps(e).vertices
    for v in ref:
        assert np.min(np.abs(img - v).max(axis=1)) < 1e-12
    assert len(img) == 4


# fitting


def test_open_simplex():
    s = OpenSimplex(2, 1.0, [0, 0])
    assert s.contains([[0.2, 0.2]])[0] and not s.contains([[0.6, 0.6]])[0]
    with pytest.raises(DomainError):
        OpenSimplex(2, 0.0, [0, 0])


def test_self_fit_unit_triangle():
    tri = BaseDiagram2D(np.array([[0, 0], [1, 0], [0, 1]], dtype=float))
    fit = fit_simplex(tri, "triangle2d", margin=0.0, tol=1e-4)
    assert fit.feasible
    assert fit.simplex.capacity == pytest.approx(1.0, abs=2e-4)


def test_fit_monotone_in_margin():
    tri = BaseDiagram2D(np.array([[0, 0], [2, 0], [0, 2]], dtype=float))
    a = fit_simplex(tri, "triangle2d", margin=0.0, tol=1e-3).simplex.capacity
    b = fit_simplex(tri, "triangle2d", margin=0.05, tol=1e-3).simplex.capacity
    assert b <= a


def test_fitter_estimator_interface():
    r = apply_map(ellipsoid3.base_region(1.0, 16), preset("lemma-s3"))
    est = SimplexFitter(family="pyramid3d", tol=1e-2, anchors=5)
    assert est.get_params()["anchors"] == 5
    est.fit(r)
    assert est.capacity_ > 6.0
    assert est.verify(r)
    assert est.certificate_.samples_checked > 0


def test_fitter_errors():
    tri = BaseDiagram2D(np.array([[0, 0], [1, 0], [0, 1]], dtype=float))
    with pytest.raises(DomainError):
        SimplexFitter(family="pyramid3d").fit(tri)
    with pytest.raises(DomainError):
        SimplexFitter(family="cube").fit(tri)
    sliver = BaseDiagram2D(np.array([[0, 0], [1, 0], [0, 1e-4]], dtype=float))
    with pytest.raises(ConvergenceError):
        SimplexFitter(family="triangle2d", margin=1e-3, tol=1e-3).fit(sliver)
