import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from atf.exceptions import ConvergenceError, DomainError
from atf.numerics import (
    INVERSE_SQRT_BOTH_ENDS,
    SINGULAR_SPEC,
    Bracket,
    EllipticArgs,
    QuadratureSpec,
    carlson_rd,
    carlson_rf,
    carlson_rj,
    ellip_e,
    ellip_f,
    ellip_pi,
    find_root,
    integrate,
    make_rng,
    mc_volume,
)

TIGHT = QuadratureSpec(rel_tol=1e-13, abs_tol=1e-15)


def defining_f(m):
    return integrate(lambda t: 1 / np.sqrt(1 - m * np.sin(t) ** 2), 0, math.pi / 2, TIGHT)


def defining_e(m):
    return integrate(lambda t: np.sqrt(1 - m * np.sin(t) ** 2), 0, math.pi / 2, TIGHT)


def defining_pi(n, m):
    return integrate(lambda t: 1 / ((1 - n * np.sin(t) ** 2) * np.sqrt(1 - m * np.sin(t) ** 2)), 0, math.pi / 2, TIGHT)


# Carlson forms against scipy's independent implementation


@pytest.mark.parametrize("args", [(1, 2, 3), (0, 1, 2), (0.5, 1e-3, 40), (1e4, 2, 0.1), (7, 7, 7)])
def test_rf_matches_scipy(args):
    assert carlson_rf(*args) == pytest.approx(special.elliprf(*args), rel=1e-14)


@pytest.mark.parametrize("args", [(1, 2, 3), (0, 1, 2), (0.5, 1e-3, 40), (1e4, 2, 0.1)])
def test_rd_matches_scipy(args):
    assert carlson_rd(*args) == pytest.approx(special.elliprd(*args), rel=1e-14)


@pytest.mark.parametrize("args", [(1, 2, 3, 4), (0, 1, 2, 0.5), (0, 1, 1, 1), (2, 3, 4, 100), (0, 0.3, 1, 1e-3)])
def test_rj_matches_scipy(args):
    assert carlson_rj(*args) == pytest.approx(special.elliprj(*args), rel=1e-13)


def test_carlson_symmetry_points():
    assert carlson_rf(1, 1, 1) == 1.0
    assert carlson_rf(4, 4, 4) == pytest.approx(0.5, rel=1e-15)
    assert carlson_rf(0, 1, 1) == pytest.approx(math.pi / 2, rel=1e-15)
    # R_J(x,y,z,z) = R_D(x,y,z)
    assert carlson_rj(0, 1, 1, 1) == pytest.approx(carlson_rd(0, 1, 1), rel=1e-14)


@pytest.mark.parametrize("bad", [(-1, 1, 1), (0, 0, 1), (math.nan, 1, 1)])
def test_rf_domain(bad):
    with pytest.raises(DomainError):
        carlson_rf(*bad)


# Legendre forms


def test_trivial_values():
    assert ellip_f(0) == pytest.approx(math.pi / 2, rel=1e-15)
    assert ellip_e(0) == pytest.approx(math.pi / 2, rel=1e-15)
    assert ellip_e(1) == 1.0
    assert ellip_pi(0, 0) == pytest.approx(math.pi / 2, rel=1e-15)
    assert ellip_pi(0, 0.3) == ellip_f(0.3)


@pytest.mark.parametrize("m", [0.5, -3.0, 0.999, -1e3, 1e-8])
def test_f_e_against_defining_integral(m):
    assert ellip_f(m) == pytest.approx(defining_f(m), rel=1e-12)
    assert ellip_e(m) == pytest.approx(defining_e(m), rel=1e-12)


@pytest.mark.parametrize("m", [0.25, -0.5, 0.9, -50.0])
def test_f_e_against_scipy(m):
    assert ellip_f(m) == pytest.approx(special.ellipk(m), rel=1e-14)
    assert ellip_e(m) == pytest.approx(special.ellipe(m), rel=1e-14)


@pytest.mark.parametrize("n,m", [(-2, 0.5), (0.5, 0.3), (-1e4, 0.7), (-1.5, -2), (0.999, 0.1), (-0.3, -1e3)])
def test_pi_against_mpmath(n, m):
    ref = float(mpmath.ellippi(n, m))
    assert ellip_pi(n, m) == pytest.approx(ref, rel=1e-13)


def test_pi_large_negative_characteristic():
    # cancellation regime handled by the reflected form
    n, m = -1e6, 0.5
    assert ellip_pi(n, m) == pytest.approx(float(mpmath.ellippi(n, m)), rel=1e-12)


@pytest.mark.parametrize("n,m", [(1, 0), (0, 1), (2, 0.5)])
def test_elliptic_args_domain(n, m):
    with pytest.raises(DomainError):
        EllipticArgs(n, m)
    with pytest.raises(DomainError):
        ellip_pi(n, m)


def test_f_rejects_m_one():
    with pytest.raises(DomainError):
        ellip_f(1.0)
    with pytest.raises(DomainError):
        ellip_e(1.5)


@settings(max_examples=60, deadline=None)
@given(st.floats(min_value=1e-3, max_value=1 - 1e-3))
def test_legendre_relation(m):
    val = ellip_e(m) * ellip_f(1 - m) + ellip_e(1 - m) * ellip_f(m) - ellip_f(m) * ellip_f(1 - m)
    assert val == pytest.approx(math.pi / 2, rel=1e-12)


# quadrature


def test_integrate_trivial():
    assert integrate(lambda x: np.ones_like(x), 0, 1) == pytest.approx(1.0, rel=1e-14)
    assert integrate(np.sin, 0, math.pi) == pytest.approx(2.0, rel=1e-13)


def test_chebyshev_weight():
    val = integrate(lambda x: 1 / np.sqrt(x * (1 - x)), 0, 1, SINGULAR_SPEC)
    assert val == pytest.approx(math.pi, rel=1e-11)


def test_sqrt_endpoint_behaviour():
    # int_0^1 sqrt(1 - x) / sqrt(x) dx = pi / 2
    val = integrate(lambda x: np.sqrt(1 - x) / np.sqrt(x), 0, 1, SINGULAR_SPEC)
    assert val == pytest.approx(math.pi / 2, rel=1e-11)


def test_quadrature_spec_validation():
    with pytest.raises(DomainError):
        QuadratureSpec(rel_tol=0)
    with pytest.raises(DomainError):
        QuadratureSpec(max_depth=0)
    with pytest.raises(DomainError):
        QuadratureSpec(endpoint_mode="log")
    assert SINGULAR_SPEC.endpoint_mode == INVERSE_SQRT_BOTH_ENDS


def test_integrate_bad_limits():
    with pytest.raises(DomainError):
        integrate(np.sin, 1, 0)
    with pytest.raises(DomainError):
        integrate(np.sin, 0, math.inf)


def test_integrate_nonfinite_interior():
    with pytest.raises(ConvergenceError):
        integrate(lambda x: np.where(x > 0.5, np.nan, 1.0), 0, 1)


# roots


def test_find_root_sqrt2():
    assert find_root(lambda x: x * x - 2, Bracket.around(lambda x: x * x - 2, 1, 2)) == pytest.approx(
        math.sqrt(2), abs=1e-12)


def test_find_root_turning_point():
    f = lambda z: (1 - z * z) - 0.25
    assert find_root(f, Bracket.around(f, 0, 1)) == pytest.approx(math.sqrt(0.75), abs=1e-12)


def test_find_root_at_endpoint_and_center():
    assert find_root(lambda x: x, Bracket.around(lambda x: x, -1, 1)) == pytest.approx(0.0, abs=1e-14)
    assert find_root(lambda x: x, Bracket.around(lambda x: x, 0, 1)) == 0.0


def test_bracket_without_sign_change():
    with pytest.raises(DomainError):
        Bracket.around(lambda x: x * x + 1, -1, 1)
    with pytest.raises(DomainError):
        Bracket(1.0, 0.0, -1, 1)


# Monte Carlo


def test_mc_disk_area_within_three_sigma():
    est, se = mc_volume(lambda P: (P ** 2).sum(axis=1) < 1, [-1, -1], [1, 1], 200_000, seed=3)
    assert abs(est - math.pi) < 3 * se


def test_mc_is_seeded():
    ind = lambda P: P[:, 0] < P[:, 1]
    assert mc_volume(ind, [0, 0], [1, 1], 20_000, 7) == mc_volume(ind, [0, 0], [1, 1], 20_000, 7)
    assert make_rng(1).random() == make_rng(1).random()


def test_mc_validation():
    with pytest.raises(DomainError):
        mc_volume(lambda P: P[:, 0] > 0, [0], [1], 10)
    with pytest.raises(DomainError):
        mc_volume(lambda P: P[:, 0] > 0, [1], [0], 20_000)
