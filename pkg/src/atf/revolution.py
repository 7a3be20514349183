"""Base diagrams of disk cotangent bundles of spheres of revolution.

A surface ``x^2 + y^2 = u(z)^2`` carries the rotation moment ``mu`` and a
second action ``A(mu, |eta|)``, the area of the disk bounded by the closed
curve ``eta3^2 u^2 (1 + u'^2) = u^2 |eta|^2 - mu^2`` in the (xi3, eta3)
plane. Moments here are unscaled; the 2*pi factor is applied only when a
diagram is emitted.

Profiles are stored through ``w = u^2`` and ``w'`` so that the integrand
stays finite at the poles, where ``u'`` blows up.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import PchipInterpolator

from ._parallel import ordered_map
from ._validation import check_count, check_scalar
from .diagram.base import BaseDiagram2D, Cut
from .exceptions import ConvergenceError, DomainError, FormulaDiscrepancy
from .numerics import SINGULAR_SPEC, Bracket, ellip_e, ellip_f, ellip_pi, find_root, integrate

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True, eq=False)
class ProfileCurve:
    """Generator of a surface of revolution, given by ``w(z) = u(z)^2``.

    Use :meth:`ellipsoid` or :meth:`from_samples` rather than the raw
    constructor unless both ``w`` and ``w'`` are known in closed form.
    """

    u_sq: object
    u_sq_deriv: object
    a: float
    b: float
    z_equator: float
    c: float = None

    def __post_init__(self):
        if not (self.a < self.z_equator < self.b):
            raise DomainError("need a < z_equator < b")
        lo, hi = self.endpoint_products
        if not (math.isfinite(lo) and math.isfinite(hi)) or lo == 0 or hi == 0:
            raise DomainError("u*u' must have finite nonzero limits at both poles")

    @classmethod
    def ellipsoid(cls, c):
        """Profile ``u = sqrt(1 - z^2/c^2)`` of the ellipsoid E(1, 1, c)."""
        c = check_scalar(c, "c", positive=True)
        inv = 1.0 / (c * c)
        return cls(
            lambda z: 1.0 - z * z * inv,
            lambda z: -2.0 * z * inv,
            -c, c, 0.0, c,
        )

    @classmethod
    def from_samples(cls, z, u):
        """Profile from tabulated samples, interpolating ``u^2`` monotonically."""
        z = np.asarray(z, dtype=float)
        u = np.asarray(u, dtype=float)
        if z.ndim != 1 or z.shape != u.shape or len(z) < 5:
            raise DomainError("need matching 1-d arrays of at least 5 samples")
        if not (np.all(np.isfinite(z)) and np.all(np.isfinite(u))):
            raise DomainError("profile samples must be finite")
        if np.any(np.diff(z) <= 0):
            raise DomainError("z samples must be strictly increasing")
        if abs(u[0]) > 1e-12 or abs(u[-1]) > 1e-12 or np.any(u[1:-1] <= 0):
            raise DomainError("u must vanish at both ends and be positive inside")
        k = int(np.argmax(u))
        du = np.diff(u)
        if not (np.all(du[:k] > 0) and np.all(du[k:] < 0)):
            raise DomainError("profile must have a single equator (one interior maximum)")
        w = u * u
        w[0] = w[-1] = 0.0
        interp = PchipInterpolator(z, w)
        deriv = interp.derivative()
        return cls(interp, deriv, float(z[0]), float(z[-1]), float(z[k]))

    def u(self, z):
        return np.sqrt(np.maximum(self.u_sq(np.asarray(z, dtype=float)), 0.0))

    def u_deriv(self, z):
        z = np.asarray(z, dtype=float)
        return self.u_sq_deriv(z) / (2.0 * self.u(z))

    @property
    def endpoint_products(self):
        """Limits of ``u u'`` at the south and north poles."""
        return (0.5 * float(self.u_sq_deriv(self.a)), 0.5 * float(self.u_sq_deriv(self.b)))

    @property
    def u_max(self):
        return math.sqrt(float(self.u_sq(self.z_equator)))


@dataclass(frozen=True)
class FiberLevel:
    """Unscaled moment ``mu`` and cotangent norm ``eta`` in [0, 1]."""

    mu: float
    eta: float

    def __post_init__(self):
        object.__setattr__(self, "mu", check_scalar(self.mu, "mu"))
        object.__setattr__(self, "eta", check_scalar(self.eta, "eta", nonneg=True))
        if self.eta > 1.0:
            raise DomainError(f"eta must lie in [0, 1], got {self.eta}")


@dataclass(frozen=True)
class Xi3Bounds:
    lo: float
    hi: float


def _reach_slack(p, lvl):
    """``u(z0)^2 eta^2 - mu^2``; negative means unreachable."""
    w0 = float(p.u_sq(p.z_equator))
    return w0 * lvl.eta ** 2 - lvl.mu ** 2, w0


def _check_reachable(p, lvl):
    slack, w0 = _reach_slack(p, lvl)
    if slack < -1e-12 * max(w0 * lvl.eta ** 2, 1e-300):
        raise DomainError(
            f"unreachable level mu={lvl.mu}, eta={lvl.eta}: need mu^2 <= u(z0)^2 eta^2 = {w0 * lvl.eta ** 2}"
        )
    return slack, w0


def _is_collapsed(slack, w0, lvl):
    return slack <= 1e-14 * w0 * lvl.eta ** 2


def xi3_bounds(p: ProfileCurve, lvl: FiberLevel) -> Xi3Bounds:
    """Interval of xi3 over which the level's closed curve lives."""
    slack, w0 = _check_reachable(p, lvl)
    if lvl.eta == 0.0:
        if lvl.mu != 0.0:
            raise DomainError("eta = 0 forces mu = 0")
        return Xi3Bounds(p.a, p.b)
    if lvl.mu == 0.0:
        return Xi3Bounds(p.a, p.b)
    if _is_collapsed(slack, w0, lvl):
        return Xi3Bounds(p.z_equator, p.z_equator)
    e2, m2 = lvl.eta ** 2, lvl.mu ** 2

    def g(z):
        return float(p.u_sq(z)) * e2 - m2

    z0 = p.z_equator
    try:
        lo = find_root(g, Bracket(p.a, z0, -1, 1))
        hi = find_root(g, Bracket(z0, p.b, 1, -1))
    except ConvergenceError as exc:
        raise ConvergenceError(f"xi3 root search failed at mu={lvl.mu}, eta={lvl.eta}: {exc}") from exc
    return Xi3Bounds(lo, hi)


def fiber_curve(p: ProfileCurve, lvl: FiberLevel, n_samples: int = 128) -> np.ndarray:
    """Closed polyline (xi3, eta3) of the level's curve, first point repeated last."""
    n = check_count(n_samples, "n_samples", minimum=8)
    bounds = xi3_bounds(p, lvl)
    if lvl.eta == 0.0:
        return np.array([[p.a, 0.0], [p.b, 0.0]])
    if bounds.lo == bounds.hi:
        return np.array([[bounds.lo, 0.0]])
    half = n // 2
    theta = np.linspace(0.0, math.pi, half + 1)
    mid, rad = 0.5 * (bounds.lo + bounds.hi), 0.5 * (bounds.hi - bounds.lo)
    z = mid - rad * np.cos(theta)
    z[0], z[-1] = bounds.lo, bounds.hi
    w = p.u_sq(z)
    wd = p.u_sq_deriv(z)
    # eta3^2 = (w eta^2 - mu^2) / (w + w'^2/4)
    num = np.maximum(w * lvl.eta ** 2 - lvl.mu ** 2, 0.0)
    y = np.sqrt(num / (w + 0.25 * wd * wd))
    y[0] = y[-1] = 0.0
    upper = np.column_stack([z, y])
    lower = np.column_stack([z[::-1], -y[::-1]])[1:]
    return np.vstack([upper, lower])


def _area_integrand(p, lvl):
    e2, m2 = lvl.eta ** 2, lvl.mu ** 2

    def f(z):
        w = p.u_sq(z)
        wd = p.u_sq_deriv(z)
        return np.sqrt(np.maximum(w * e2 - m2, 0.0)) * np.sqrt(w + 0.25 * wd * wd) / w

    return f


def area_quadrature(p: ProfileCurve, lvl: FiberLevel, spec=SINGULAR_SPEC) -> float:
    """Disk area ``2 * int sqrt(u^2 eta^2 - mu^2) sqrt(1 + u'^2) / u dxi3``."""
    if lvl.eta <= 0.0:
        raise DomainError("area needs eta > 0")
    b = xi3_bounds(p, lvl)
    if b.hi <= b.lo:
        return 0.0
    try:
        return 2.0 * integrate(_area_integrand(p, lvl), b.lo, b.hi, spec)
    except ConvergenceError as exc:
        raise ConvergenceError(f"area quadrature failed at mu={lvl.mu}, eta={lvl.eta}: {exc}") from exc


def area_closed_form_ellipsoid(c: float, lvl: FiberLevel, printed_prefactor: bool = False) -> float:
    """Elliptic-integral form of the disk area on the ellipsoid E(1, 1, c).

    With ``B = eta^2 + (c^2 - 1) mu^2``, ``D = (eta^2 - mu^2) / mu^2`` and
    parameter ``k = 1 - eta^2 c^2 / B``::

        A = 4 (sqrt(B) E(k) - (c^2 - 1) mu^2 / sqrt(B) F(k)
               - eta^2 / sqrt(B) Pi(-D, k))

    The area is homogeneous of degree one in (mu, eta), and the bracket
    already is, so the leading factor carries no extra ``|eta|``.
    ``printed_prefactor=True`` multiplies by ``|eta|`` as well, which agrees
    with the quadrature only on the unit cosphere level.

    Levels with ``|mu| < 1e-3 |eta|`` are routed to :func:`area_quadrature`.
    """
    c = check_scalar(c, "c", positive=True)
    if lvl.eta <= 0.0:
        raise DomainError("area needs eta > 0")
    eta, mu = lvl.eta, abs(lvl.mu)
    if mu > eta * (1.0 + 1e-12):
        raise DomainError(f"unreachable level mu={lvl.mu}, eta={eta}")
    pre = 4.0 * eta if printed_prefactor else 4.0
    if mu < 1e-3 * eta:
        return pre / 4.0 * area_quadrature(ProfileCurve.ellipsoid(c), lvl)
    if mu >= eta * (1.0 - 1e-15):
        return 0.0
    c2 = c * c
    B = eta * eta + (c2 - 1.0) * mu * mu
    sB = math.sqrt(B)
    D = (eta * eta - mu * mu) / (mu * mu)
    k = 1.0 - eta * eta * c2 / B
    try:
        val = sB * ellip_e(k) - (c2 - 1.0) * mu * mu / sB * ellip_f(k) - eta * eta / sB * ellip_pi(-D, k)
    except DomainError as exc:
        oracle = area_quadrature(ProfileCurve.ellipsoid(c), lvl)
        raise FormulaDiscrepancy(
            f"elliptic arguments left their domain ({exc})", closed_form=None, oracle=oracle, level=lvl
        ) from exc
    return pre * val


def _areas(p, mus, use_closed_form):
    if use_closed_form and p.c is None:
        raise DomainError("closed form is only available for the ellipsoid family")

    def one(mu):
        lvl = FiberLevel(mu, 1.0)
        if use_closed_form:
            return area_closed_form_ellipsoid(p.c, lvl)
        return area_quadrature(p, lvl)

    return np.array(ordered_map(one, list(mus)))


def boundary_curve(p: ProfileCurve, n_samples: int = 512, use_closed_form: bool = False) -> BaseDiagram2D:
    """Base diagram: the curve (2 pi mu, A(mu, 1)) above the mu-axis.

    Samples are cosine-spaced in ``mu`` so the square-root collapse at the
    ends is resolved. Two nodes sit on the ``mu = 0`` axis at one and two
    thirds of the peak height, each with an upward cut.
    """
    n = check_count(n_samples, "n_samples", minimum=16)
    umax = p.u_max
    theta = np.linspace(math.pi, 0.0, n)
    mus = umax * np.cos(theta)
    mus[0], mus[-1] = -umax, umax
    if n % 2 == 1:
        mus[n // 2] = 0.0
    inner = _areas(p, mus[1:-1], use_closed_form)
    heights = np.concatenate([[0.0], inner, [0.0]])
    peak = _areas(p, [0.0], False)[0]
    pts = np.column_stack([TWO_PI * mus, heights])
    cuts = (Cut((0.0, peak / 3.0), (0, 1)), Cut((0.0, 2.0 * peak / 3.0), (0, 1)))
    labels = {"space": "revolution", "samples": n}
    if p.c is not None:
        labels["c"] = p.c
    return BaseDiagram2D(pts, cuts, labels)
