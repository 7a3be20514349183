"""Carlson symmetric integrals and complete Legendre integrals.

All Legendre-form functions take the *parameter* ``m`` (so that
``F(m) = int_0^{pi/2} (1 - m sin^2 t)^{-1/2} dt``), never the modulus.
Negative parameters and characteristics are handled directly by the
Carlson forms without reflection formulas.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from ..exceptions import DomainError

# Relative truncation threshold of the duplication algorithm.
_R = 1e-16


def _check_finite(*args):
    for v in args:
        if not math.isfinite(v):
            raise DomainError(f"non-finite argument {v!r}")


def _check_carlson(*args):
    _check_finite(*args)
    if min(args) < 0:
        raise DomainError("Carlson integrals require nonnegative arguments")


def carlson_rf(x: float, y: float, z: float) -> float:
    """R_F(x, y, z) = 1/2 int_0^inf dt / sqrt((t+x)(t+y)(t+z)).

    At most one argument may be zero.
    """
    x, y, z = float(x), float(y), float(z)
    _check_carlson(x, y, z)
    if (x == 0.0) + (y == 0.0) + (z == 0.0) > 1:
        raise DomainError("R_F allows at most one zero argument")

    a0 = (x + y + z) / 3.0
    q = (3.0 * _R) ** (-1.0 / 6.0) * max(abs(a0 - x), abs(a0 - y), abs(a0 - z))
    dx, dy = a0 - x, a0 - y
    a, f = a0, 1.0
    while f * q >= abs(a):
        sx, sy, sz = math.sqrt(x), math.sqrt(y), math.sqrt(z)
        lam = sx * sy + sy * sz + sz * sx
        x, y, z = (x + lam) * 0.25, (y + lam) * 0.25, (z + lam) * 0.25
        a = (a + lam) * 0.25
        f *= 0.25
    X = dx * f / a
    Y = dy * f / a
    Z = -(X + Y)
    e2 = X * Y - Z * Z
    e3 = X * Y * Z
    return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / math.sqrt(a)


def carlson_rd(x: float, y: float, z: float) -> float:
    """R_D(x, y, z) = 3/2 int_0^inf dt / ((t+z) sqrt((t+x)(t+y)(t+z))).

    Requires z > 0 and at most one of x, y zero.
    """
    x, y, z = float(x), float(y), float(z)
    _check_carlson(x, y, z)
    if z == 0.0 or (x == 0.0 and y == 0.0):
        raise DomainError("R_D requires z > 0 and x + y > 0")

    a0 = (x + y + 3.0 * z) / 5.0
    q = (0.25 * _R) ** (-1.0 / 6.0) * max(abs(a0 - x), abs(a0 - y), abs(a0 - z))
    dx, dy = a0 - x, a0 - y
    a, f, acc = a0, 1.0, 0.0
    while f * q >= abs(a):
        sx, sy, sz = math.sqrt(x), math.sqrt(y), math.sqrt(z)
        lam = sx * sy + sy * sz + sz * sx
        acc += f / (sz * (z + lam))
        x, y, z = (x + lam) * 0.25, (y + lam) * 0.25, (z + lam) * 0.25
        a = (a + lam) * 0.25
        f *= 0.25
    X = dx * f / a
    Y = dy * f / a
    Z = -(X + Y) / 3.0
    e2 = X * Y - 6.0 * Z * Z
    e3 = (3.0 * X * Y - 8.0 * Z * Z) * Z
    e4 = 3.0 * (X * Y - Z * Z) * Z * Z
    e5 = X * Y * Z * Z * Z
    series = (
        1.0
        - 3.0 * e2 / 14.0
        + e3 / 6.0
        + 9.0 * e2 * e2 / 88.0
        - 3.0 * e4 / 22.0
        - 9.0 * e2 * e3 / 52.0
        + 3.0 * e5 / 26.0
    )
    return f * series / (a * math.sqrt(a)) + 3.0 * acc


def _rc_one(e: float) -> float:
    """R_C(1, 1 + e) for e > -1."""
    if abs(e) < 1e-4:
        return 1.0 - e / 3.0 + e * e / 5.0 - e ** 3 / 7.0 + e ** 4 / 9.0
    if e > 0:
        s = math.sqrt(e)
        return math.atan(s) / s
    s = math.sqrt(-e)
    return math.atanh(s) / s


def carlson_rj(x: float, y: float, z: float, p: float) -> float:
    """R_J(x, y, z, p) for p > 0 (the only branch the Legendre forms need)."""
    x, y, z, p = float(x), float(y), float(z), float(p)
    _check_carlson(x, y, z, p)
    if p == 0.0:
        raise DomainError("R_J requires p > 0")
    if (x == 0.0) + (y == 0.0) + (z == 0.0) > 1:
        raise DomainError("R_J allows at most one zero among x, y, z")

    a0 = (x + y + z + 2.0 * p) / 5.0
    delta = (p - x) * (p - y) * (p - z)
    q = (0.25 * _R) ** (-1.0 / 6.0) * max(abs(a0 - x), abs(a0 - y), abs(a0 - z), abs(a0 - p))
    dx, dy, dz = a0 - x, a0 - y, a0 - z
    a, f, acc = a0, 1.0, 0.0
    while f * q >= abs(a):
        sx, sy, sz, sp = math.sqrt(x), math.sqrt(y), math.sqrt(z), math.sqrt(p)
        lam = sx * sy + sy * sz + sz * sx
        d = (sp + sx) * (sp + sy) * (sp + sz)
        e = f ** 3 * delta / (d * d)
        acc += f / d * _rc_one(e)
        x, y, z, p = (x + lam) * 0.25, (y + lam) * 0.25, (z + lam) * 0.25, (p + lam) * 0.25
        a = (a + lam) * 0.25
        f *= 0.25
    X = dx * f / a
    Y = dy * f / a
    Z = dz * f / a
    P = -(X + Y + Z) / 2.0
    e2 = X * Y + X * Z + Y * Z - 3.0 * P * P
    e3 = X * Y * Z + 2.0 * e2 * P + 4.0 * P ** 3
    e4 = (2.0 * X * Y * Z + e2 * P + 3.0 * P ** 3) * P
    e5 = X * Y * Z * P * P
    series = (
        1.0
        - 3.0 * e2 / 14.0
        + e3 / 6.0
        + 9.0 * e2 * e2 / 88.0
        - 3.0 * e4 / 22.0
        - 9.0 * e2 * e3 / 52.0
        + 3.0 * e5 / 26.0
    )
    return f * series / (a * math.sqrt(a)) + 6.0 * acc


@dataclass(frozen=True)
class EllipticArgs:
    """Characteristic ``n`` and parameter ``m`` of a complete integral."""

    n: float
    m: float

    def __post_init__(self):
        _check_finite(self.n, self.m)
        if not (self.n < 1.0 and self.m < 1.0):
            raise DomainError(f"need n < 1 and m < 1, got n={self.n}, m={self.m}")


def ellip_f(m: float) -> float:
    """Complete integral of the first kind, F(m) = R_F(0, 1 - m, 1)."""
    m = float(m)
    _check_finite(m)
    if m >= 1.0:
        raise DomainError(f"F(m) requires m < 1, got {m}")
    return carlson_rf(0.0, 1.0 - m, 1.0)


def ellip_e(m: float) -> float:
    """Complete integral of the second kind, E(m) for m <= 1."""
    m = float(m)
    _check_finite(m)
    if m > 1.0:
        raise DomainError(f"E(m) requires m <= 1, got {m}")
    if m == 1.0:
        return 1.0
    y = 1.0 - m
    return carlson_rf(0.0, y, 1.0) - m / 3.0 * carlson_rd(0.0, y, 1.0)


def ellip_pi(n: float, m: float) -> float:
    """Complete integral of the third kind,

    Pi(n, m) = int_0^{pi/2} dt / ((1 - n sin^2 t) sqrt(1 - m sin^2 t)).

    ``n = 0`` short-circuits to ``F(m)``. For ``n < -1`` the substitution
    t -> pi/2 - t maps the integral to characteristic ``-n/(1-n)`` and
    parameter ``-m/(1-m)``, which avoids the cancellation between R_F and
    the R_J term when ``-n`` is large.
    """
    args = EllipticArgs(float(n), float(m))
    n, m = args.n, args.m
    if n == 0.0:
        return carlson_rf(0.0, 1.0 - m, 1.0)
    if n < -1.0:
        p = 1.0 / (1.0 - n)
        y = 1.0 / (1.0 - m)
        nn = -n * p
        val = carlson_rf(0.0, y, 1.0) + nn / 3.0 * carlson_rj(0.0, y, 1.0, p)
        return val * p / math.sqrt(1.0 - m)
    return carlson_rf(0.0, 1.0 - m, 1.0) + n / 3.0 * carlson_rj(0.0, 1.0 - m, 1.0, 1.0 - n)
