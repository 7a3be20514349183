"""Base region of the disk cotangent bundle of the ellipsoid E(1, 1, c, c).

The torus action has unscaled moments ``(mu1, mu2)``; a level is
admissible when ``|mu1| + |mu2|/c <= |eta|``, so the |eta| = 1 slice is a
rhombus. The height over it is the disk area ``A_c(mu1, mu2)``, given both
as a xi4 quadrature and as a four-term elliptic expression.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._parallel import ordered_map
from ._validation import check_count, check_scalar
from .diagram.base import lattice_region
from .exceptions import ConvergenceError, DomainError, FormulaDiscrepancy
from .numerics import SINGULAR_SPEC, ellip_e, ellip_f, ellip_pi, integrate

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Level2:
    """Unscaled moments and cotangent norm of a level set."""

    mu1: float
    mu2: float
    eta: float

    def __post_init__(self):
        object.__setattr__(self, "mu1", check_scalar(self.mu1, "mu1"))
        object.__setattr__(self, "mu2", check_scalar(self.mu2, "mu2"))
        object.__setattr__(self, "eta", check_scalar(self.eta, "eta", nonneg=True))
        if self.eta > 1.0:
            raise DomainError(f"eta must lie in [0, 1], got {self.eta}")

    def slack(self, c):
        """``|eta| - |mu1| - |mu2|/c``; admissible levels have slack >= 0."""
        return self.eta - abs(self.mu1) - abs(self.mu2) / c


@dataclass(frozen=True)
class ABQuantities:
    A: float
    B: float


@dataclass(frozen=True)
class Xi4Bounds:
    lo: float
    hi: float


def _check_admissible(c, lvl):
    c = check_scalar(c, "c", positive=True)
    if lvl.slack(c) < -1e-12:
        raise DomainError(
            f"inadmissible level: |mu1| + |mu2|/c = {abs(lvl.mu1) + abs(lvl.mu2) / c} > eta = {lvl.eta}"
        )
    return c


def ab_quantities(c: float, lvl: Level2) -> ABQuantities:
    """Discriminant ``A`` and the combination ``B`` entering the closed form."""
    c = _check_admissible(c, lvl)
    c2, e2 = c * c, lvl.eta ** 2
    m1s, m2s = lvl.mu1 ** 2, lvl.mu2 ** 2
    S = m2s + c2 * (e2 - m1s)
    A = S * S - 4.0 * m2s * e2 * c2
    scale = max(S * S, 1e-300)
    if A < 0:
        if A < -1e-12 * scale:
            raise DomainError(f"negative discriminant A = {A} beyond tolerance")
        A = 0.0
    B = m2s - m1s * c2 + math.sqrt(A) + c2 * e2
    return ABQuantities(A, B)


def _quartic(c, lvl, x):
    e2 = lvl.eta ** 2
    return (e2 * x * x - lvl.mu2 ** 2) * (c * c - x * x) - c * c * lvl.mu1 ** 2 * x * x


def xi4_bounds(c: float, lvl: Level2) -> Xi4Bounds:
    """Roots in (0, c] of ``(eta^2 x^2 - mu2^2)(c^2 - x^2) - c^2 mu1^2 x^2``."""
    c = _check_admissible(c, lvl)
    if lvl.eta <= 0.0:
        raise DomainError("xi4 bounds need eta > 0")
    ab = ab_quantities(c, lvl)
    c2, e2 = c * c, lvl.eta ** 2
    S = lvl.mu2 ** 2 + c2 * (e2 - lvl.mu1 ** 2)
    hi2 = (S + math.sqrt(ab.A)) / (2.0 * e2)
    # product of the roots in x^2 is mu2^2 c^2 / eta^2
    lo2 = lvl.mu2 ** 2 * c2 / (e2 * hi2) if hi2 > 0 else 0.0
    hi, lo = math.sqrt(max(hi2, 0.0)), math.sqrt(max(lo2, 0.0))
    # mu1 = 0 puts the upper root exactly at the pole
    hi = c if lvl.mu1 == 0.0 else min(hi, c)
    lo = min(lo, hi)
    scale = max(e2 * c2 * c2, 1e-300)
    for x in (lo, hi):
        if abs(_quartic(c, lvl, x)) > 1e-10 * max(scale, 1.0):
            raise ConvergenceError(f"xi4 root residual too large at x={x}")
    return Xi4Bounds(lo, hi)


def area_quadrature_3d(c: float, lvl: Level2, spec=SINGULAR_SPEC) -> float:
    """``2 int sqrt(Q(x) (x^2 + c^2 (c^2 - x^2))) / (c x (c^2 - x^2)) dx`` over the xi4 bounds."""
    c = _check_admissible(c, lvl)
    if lvl.eta <= 0.0:
        raise DomainError("area needs eta > 0")
    b = xi4_bounds(c, lvl)
    if b.hi - b.lo <= 1e-15 * c:
        return 0.0
    c2, e2 = c * c, lvl.eta ** 2
    lo2, hi2 = b.lo ** 2, b.hi ** 2

    at_pole = b.hi == c

    def f(x):
        x2 = x * x
        gap = (c - x) * (c + x)
        # (hi^2 - x^2) / (c^2 - x^2), which is 1 when hi = c
        ratio = 1.0 if at_pole else np.maximum(hi2 - x2, 0.0) / gap
        num = e2 * np.maximum(x2 - lo2, 0.0) * ratio * (x2 + c2 * gap)
        with np.errstate(divide="ignore", invalid="ignore"):
            val = np.sqrt(num / gap) / (c * x)
        # nodes that round onto the pole carry zero weight after substitution
        return np.where(gap > 0, val, 0.0)

    try:
        return 2.0 * integrate(f, b.lo, b.hi, spec)
    except ConvergenceError as exc:
        raise ConvergenceError(f"area quadrature failed at {lvl}: {exc}") from exc


def area_closed_form_3d(c: float, lvl: Level2) -> float:
    """Four-term elliptic form of the disk area.

    Levels with ``|mu_i| < 1e-3 |eta|`` are routed to the quadrature, where
    the characteristics approach 1. Arguments outside the elliptic domains
    raise :class:`FormulaDiscrepancy` carrying the quadrature value.
    """
    c = _check_admissible(c, lvl)
    if lvl.eta <= 0.0:
        raise DomainError("area needs eta > 0")
    eta = lvl.eta
    if abs(lvl.mu1) < 1e-3 * eta or abs(lvl.mu2) < 1e-3 * eta:
        return area_quadrature_3d(c, lvl)
    if lvl.slack(c) <= 1e-14 * eta:
        return 0.0
    ab = ab_quantities(c, lvl)
    c2, e2 = c * c, eta * eta
    m1s, m2s = lvl.mu1 ** 2, lvl.mu2 ** 2
    d = 1.0 - c2
    sA = math.sqrt(ab.A)
    den = d * ab.B + 2.0 * c2 * c2 * e2
    B2 = ab.B - 2.0 * c2 * e2
    try:
        if den <= 0 or ab.B <= 0 or B2 == 0:
            raise DomainError(f"degenerate denominators den={den}, B={ab.B}, B-2c^2eta^2={B2}")
        m = 2.0 * d * sA / den
        n1 = 2.0 * sA / ab.B
        n2 = 2.0 * sA / B2
        bracket = (
            den * ellip_e(m)
            - 2.0 * d * (m2s - m1s * c2) * ellip_f(m)
            - 4.0 * c2 * c2 * e2 * m2s / ab.B * ellip_pi(n1, m)
            + 4.0 * c2 * c2 * e2 * m1s / B2 * ellip_pi(n2, m)
        )
    except DomainError as exc:
        oracle = area_quadrature_3d(c, lvl)
        raise FormulaDiscrepancy(
            f"elliptic arguments left their domain ({exc})", closed_form=None, oracle=oracle, level=lvl
        ) from exc
    return math.sqrt(2.0) / c * bracket / math.sqrt(den)


def t2_halfwidth(c: float, lvl: Level2) -> float:
    """Half-width of the compact t2 interval around 0 for the reduced curve.

    The smaller root in ``s = t2^2`` of the quartic right-hand side is taken
    in rationalized form, which stays finite as ``c -> 1``.
    """
    c = _check_admissible(c, lvl)
    eta, c2 = lvl.eta, c * c
    d = 1.0 - c2
    K = lvl.mu1 ** 2 - lvl.mu2 ** 2 / c2 + eta ** 2
    beta = 0.5 * d * K - eta ** 2
    gamma = K * K - 4.0 * eta ** 2 * lvl.mu1 ** 2
    if gamma <= 0:
        return 0.0
    root = eta * math.sqrt(max(c2 * eta ** 2 + d * (lvl.mu2 ** 2 / c2 - lvl.mu1 ** 2 * c2), 0.0))
    s = 2.0 * gamma / (-beta + root)
    return math.sqrt(max(s, 0.0))


def reduced_curve(c: float, lvl: Level2, n_samples: int = 128) -> np.ndarray:
    """Closed (t1, t2) polyline of the level's compact curve, first point repeated last."""
    c = _check_admissible(c, lvl)
    n = check_count(n_samples, "n_samples", minimum=8)
    eta = lvl.eta
    if eta == 0.0:
        return np.array([[0.0, 0.0], [1.0, 0.0]])
    T = t2_halfwidth(c, lvl)
    e2 = eta * eta
    K0 = lvl.mu1 ** 2 - lvl.mu2 ** 2 / (c * c) + e2

    def branches(t2):
        K = K0 + (1.0 - c * c) * t2 * t2 / 4.0
        rhs = K * K - e2 * (t2 * t2 + 4.0 * lvl.mu1 ** 2)
        r = np.sqrt(np.maximum((1.0 + e2) * rhs, 0.0))
        base = (1.0 - e2) * K
        return (base + r) / (2.0 * e2), (base - r) / (2.0 * e2)

    if T == 0.0:
        t1, _ = branches(np.array([0.0]))
        return np.array([[t1[0], 0.0]])
    half = n // 2
    theta = np.linspace(0.0, math.pi, half + 1)
    t2 = -T * np.cos(theta)
    t2[0], t2[-1] = -T, T
    right, left = branches(t2)
    upper = np.column_stack([right, t2])
    lower = np.column_stack([left[::-1], t2[::-1]])
    return np.vstack([upper, lower[1:-1], upper[:1]])


def height(c: float, mu1: float, mu2: float) -> float:
    """A_c on the unit cosphere, closed form with a quadrature fallback."""
    lvl = Level2(mu1, mu2, 1.0)
    if lvl.slack(c) <= 1e-14:
        return 0.0
    try:
        return area_closed_form_3d(c, lvl)
    except FormulaDiscrepancy as exc:
        return exc.oracle


def base_region(c: float, grid_n: int = 64):
    """Triangulated region under ``(2 pi mu1, 2 pi mu2, A_c(mu1, mu2))``.

    The rhombus ``|mu1| + |mu2|/c <= 1`` is split into its four quadrant
    triangles, each sampled on a barycentric lattice so that boundary
    samples sit exactly on the rhombus edges with height 0.
    """
    c = check_scalar(c, "c", positive=True)
    n = check_count(grid_n, "grid_n", minimum=8)
    H = np.full((n + 1, n + 1), np.nan)
    jobs = [(i, j) for i in range(n + 1) for j in range(n + 1 - i)]

    def one(ij):
        i, j = ij
        if i + j == n:
            return 0.0
        return height(c, i / n, c * j / n)

    vals = ordered_map(one, jobs)
    for (i, j), v in zip(jobs, vals):
        H[i, j] = v
    return lattice_region(TWO_PI, TWO_PI * c, H, labels={"space": "ellipsoid3", "c": c, "grid_n": n})
