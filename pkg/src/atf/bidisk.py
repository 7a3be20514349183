"""Base diagram of the Lagrangian bidisk ``{|p| <= 1, |q| <= 1}``.

The rotation moment is the scaled ``mu = 2 pi (p1 q2 - p2 q1)``. The
boundary height ``A(mu)`` is the area of the disk bounded by the loop made
of the ``|p| = 1`` and ``|q| = 1`` arcs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._validation import check_count, check_scalar
from .diagram.base import BaseDiagram2D, Cut
from .exceptions import DomainError
from .numerics import DEFAULT_SPEC, integrate

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class BidiskLevel:
    mu: float

    def __post_init__(self):
        mu = check_scalar(self.mu, "mu")
        if abs(mu) > TWO_PI * (1 + 1e-15):
            raise DomainError(f"|mu| must be <= 2 pi, got {mu}")
        object.__setattr__(self, "mu", max(-TWO_PI, min(TWO_PI, mu)))

    @property
    def t_max(self):
        """Half-length of the loop's parameter range, sqrt(1 - (mu/2pi)^2)."""
        r = abs(self.mu) / TWO_PI
        return math.sqrt(max((1.0 - r) * (1.0 + r), 0.0))


@dataclass(frozen=True)
class BoundaryLoop:
    """The two arcs of the boundary loop in (p1, p2, q2) coordinates, q1 = 0."""

    mu: float

    @property
    def t_range(self):
        T = BidiskLevel(self.mu).t_max
        return (-T, T)

    def arc_p(self, t):
        t = np.asarray(t, dtype=float)
        mu = self.mu
        r = np.sqrt(mu * mu + (TWO_PI * t) ** 2)
        return np.stack([mu / r, TWO_PI * t / r, r / TWO_PI], axis=-1)

    def arc_q(self, t):
        t = np.asarray(t, dtype=float)
        one = np.ones_like(t)
        return np.stack([self.mu / TWO_PI * one, t, one], axis=-1)


def boundary_loop(mu: float) -> BoundaryLoop:
    lvl = BidiskLevel(mu)
    return BoundaryLoop(lvl.mu)


def _parabola(mu, norm_sq, n_samples, sign):
    mu = BidiskLevel(mu).mu
    r = check_scalar(norm_sq, "norm_sq", positive=True)
    if r > 1.0:
        raise DomainError(f"squared norm must lie in (0, 1], got {r}")
    k = abs(mu) / TWO_PI
    if r < k * (1 - 1e-14):
        raise DomainError(f"unreachable squared norm {r}: need >= |mu|/(2 pi) = {k}")
    n = check_count(n_samples, "n_samples", minimum=2)
    half = math.sqrt(max(r * r - k * k, 0.0))
    if half == 0.0:
        return np.array([[0.0, 0.0]])
    t1 = -half * np.cos(np.linspace(0.0, math.pi, n))
    t2 = sign * np.maximum(r * r - k * k - t1 * t1, 0.0) / r
    return np.column_stack([t1, t2])


def parabola_plus(mu: float, p_norm_sq: float, n_samples: int = 64) -> np.ndarray:
    """(t1, t2) samples of ``|p|^2 t2 = |p|^4 - mu^2/4pi^2 - t1^2``, t2 >= 0."""
    return _parabola(mu, p_norm_sq, n_samples, 1.0)


def parabola_minus(mu: float, q_norm_sq: float, n_samples: int = 64) -> np.ndarray:
    """(t1, t2) samples of ``|q|^2 t2 = -|q|^4 + mu^2/4pi^2 + t1^2``, t2 <= 0."""
    return _parabola(mu, q_norm_sq, n_samples, -1.0)


def area_closed_form(mu: float) -> float:
    """``(sqrt(4pi^2 - mu^2) - mu arctan(sqrt(4pi^2 - mu^2)/mu)) / pi``.

    The principal arctan makes ``mu * arctan(X/mu)`` even in ``mu``; below
    ``|mu| = 1e-6`` the limit value 2 is returned.
    """
    mu = BidiskLevel(mu).mu
    if abs(mu) < 1e-6:
        return 2.0
    s = math.sqrt(max((TWO_PI - mu) * (TWO_PI + mu), 0.0))
    return (s - mu * math.atan(s / mu)) / math.pi


def area_quadrature(mu: float) -> float:
    """``int 4pi^2 t^2 / (mu^2 + 4pi^2 t^2) dt`` over the loop's parameter range."""
    lvl = BidiskLevel(mu)
    T = lvl.t_max
    if T == 0.0:
        return 0.0
    m2 = lvl.mu ** 2
    w = TWO_PI ** 2

    def f(t):
        tt = w * t * t
        return tt / (m2 + tt) if m2 > 0 else np.ones_like(t)

    return integrate(f, -T, T, DEFAULT_SPEC)


def base_diagram(n_samples: int = 512) -> BaseDiagram2D:
    """Curve ``(mu, A(mu))`` over ``[-2pi, 2pi]`` with one node at height A(0)/2."""
    n = check_count(n_samples, "n_samples", minimum=16)
    mus = -TWO_PI * np.cos(np.linspace(0.0, math.pi, n))
    mus[0], mus[-1] = -TWO_PI, TWO_PI
    if n % 2 == 1:
        mus[n // 2] = 0.0
    heights = np.array([area_closed_form(m) for m in mus])
    heights[0] = heights[-1] = 0.0
    pts = np.column_stack([mus, heights])
    peak = area_closed_form(0.0)
    return BaseDiagram2D(pts, (Cut((0.0, 0.5 * peak), (0, 1)),), {"space": "bidisk", "samples": n})


def ramos_parametrization(alpha: float):
    """``(mu, A(mu))`` with ``mu = 2 pi cos(alpha / 2)``, alpha in [0, 2 pi]."""
    a = check_scalar(alpha, "alpha")
    if not 0.0 <= a <= TWO_PI:
        raise DomainError(f"alpha must lie in [0, 2 pi], got {a}")
    mu = TWO_PI * math.cos(0.5 * a)
    if a == TWO_PI:
        mu = -TWO_PI
    return mu, area_closed_form(mu)
