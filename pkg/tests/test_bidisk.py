import math

import numpy as np
import pytest
from scipy.integrate import trapezoid
from hypothesis import given, settings
from hypothesis import strategies as st

from atf import bidisk as bd
from atf.diagram import region_area
from atf.exceptions import DomainError

TWO_PI = 2 * math.pi


def loop_action(mu, n=20001):
    """``int p . dq`` around the boundary loop by the trapezoid rule."""
    loop = bd.boundary_loop(mu)
    t = np.linspace(*loop.t_range, n)
    P = loop.arc_p(t)
    q2 = P[:, 2]
    return float(trapezoid(P[:, 1] * np.gradient(q2, t), t))


@pytest.mark.parametrize("mu", [0.3, 1.0, -2.5, 5.0, 6.2])
def test_closed_form_vs_loop_action(mu):
    assert bd.area_closed_form(mu) == pytest.approx(loop_action(mu), rel=1e-5)


@pytest.mark.parametrize("mu", np.linspace(-6.2, 6.2, 21))
def test_closed_form_vs_quadrature(mu):
    if abs(mu) < 1e-6:
        return
    assert bd.area_closed_form(mu) == pytest.approx(bd.area_quadrature(mu), rel=1e-10)


def test_peak_and_ends():
    assert bd.area_closed_form(0.0) == 2.0
    assert bd.area_quadrature(0.0) == pytest.approx(2.0, rel=1e-14)
    assert bd.area_closed_form(TWO_PI) == 0.0
    assert bd.area_closed_form(-TWO_PI) == 0.0


@settings(max_examples=50, deadline=None)
@given(st.floats(min_value=1e-5, max_value=TWO_PI))
def test_even(mu):
    assert bd.area_closed_form(mu) == pytest.approx(bd.area_closed_form(-mu), rel=1e-14, abs=1e-15)


def test_loop_arcs_meet():
    loop = bd.boundary_loop(2.0)
    for t in loop.t_range:
        assert np.allclose(loop.arc_p(t), loop.arc_q(t), atol=1e-14)


def test_parabolas_and_reachability():
    k = 1.0 / TWO_PI
    P = bd.parabola_plus(1.0, 0.5, 32)
    assert np.all(P[:, 1] >= 0)
    assert np.allclose(0.5 * P[:, 1], 0.25 - k ** 2 - P[:, 0] ** 2, atol=1e-14)
    Q = bd.parabola_minus(1.0, 0.5, 32)
    assert np.all(Q[:, 1] <= 0)
    with pytest.raises(DomainError):
        bd.parabola_plus(1.0, 0.5 * k)
    with pytest.raises(DomainError):
        bd.parabola_plus(1.0, 1.5)


def test_level_domain():
    with pytest.raises(DomainError):
        bd.BidiskLevel(7.0)


def test_ramos_parametrization():
    mu, a = bd.ramos_parametrization(0.0)
    assert mu == pytest.approx(TWO_PI) and a == 0.0
    mu, a = bd.ramos_parametrization(math.pi)
    assert a == pytest.approx(2.0, rel=1e-9)
    for alpha in (0.4, 1.3, 4.0):
        mu, a = bd.ramos_parametrization(alpha)
        assert a == pytest.approx(bd.area_closed_form(mu), rel=1e-14)


def test_base_diagram():
    d = bd.base_diagram(512)
    assert len(d.boundary) == 512
    assert d.boundary[0] == pytest.approx([-TWO_PI, 0]) and d.boundary[-1] == pytest.approx([TWO_PI, 0])
    assert d.cuts[0].node == pytest.approx((0.0, 1.0))
    assert region_area(bd.base_diagram(2048)) == pytest.approx(math.pi ** 2, rel=1e-6)


def test_even_on_grid():
    for mu in np.linspace(0.0, 2 * math.pi, 100):
        assert bd.area_closed_form(-mu) == bd.area_closed_form(mu)
