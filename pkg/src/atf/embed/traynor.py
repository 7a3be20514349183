"""Explicit ball embeddings into Lagrangian products ``Delta^n(r) x C^n(pi)``.

Points are stored with coordinate pairs interleaved: ``(x1, y1, x2, y2, ...)``
for the product side and ``(X1, Y1, X2, Y2, ...)`` for C^n. The product
side carries ``sum dy_i ^ dx_i`` and C^n the standard ``sum dX_i ^ dY_i``;
with these forms ``psi`` below is symplectic.
Balls and disks use the squared-radius convention ``B(r) = {sum |z_i|^2 < r}``.
"""
from __future__ import annotations

import math

import numpy as np

from .._validation import check_count, check_points, check_scalar
from ..exceptions import DomainError

TWO_PI = 2.0 * math.pi


def standard_form(n, sign=1.0):
    """Matrix of ``sign * sum dX_i ^ dY_i`` in interleaved coordinates."""
    J = np.zeros((2 * n, 2 * n))
    for i in range(n):
        J[2 * i, 2 * i + 1] = sign
        J[2 * i + 1, 2 * i] = -sign
    return J


def _pairs(n, point):
    n = check_count(n, "n", minimum=1)
    P = check_points(point, 2 * n, "point")
    return n, P[:, 0::2], P[:, 1::2]


def _interleave(a, b):
    out = np.empty((a.shape[0], 2 * a.shape[1]))
    out[:, 0::2] = a
    out[:, 1::2] = b
    return out


def _unwrap(single, Y):
    return Y[0] if single else Y


def traynor_psi(n: int, r: float, point) -> np.ndarray:
    """``(x, y) -> (sqrt(x) cos 2y, -sqrt(x) sin 2y)`` on every pair."""
    r = check_scalar(r, "r", positive=True)
    single = np.ndim(point) == 1
    n, x, y = _pairs(n, point)
    tot = x.sum(axis=1)
    if np.any(x <= 0) or np.any(tot >= r) or np.any(y <= 0) or np.any(y >= math.pi):
        raise DomainError("point must satisfy x_i > 0, sum x_i < r and 0 < y_i < pi")
    s = np.sqrt(x)
    return _unwrap(single, _interleave(s * np.cos(2 * y), -s * np.sin(2 * y)))


def _angle(X, Y):
    """Polar angle in (0, 2 pi); the slit {X >= 0, Y = 0} is rejected."""
    if np.any((Y == 0) & (X >= 0)):
        raise DomainError("point lies on the slit {x >= 0, y = 0}")
    return np.mod(np.arctan2(Y, X), TWO_PI)


def psi_inverse(n: int, point) -> np.ndarray:
    """Inverse of :func:`traynor_psi` on the slit-free set."""
    single = np.ndim(point) == 1
    n, X, Y = _pairs(n, point)
    theta = _angle(X, Y)
    return _unwrap(single, _interleave(X * X + Y * Y, (TWO_PI - theta) / 2.0))


def eps_bound(rho, r):
    return TWO_PI * (r - rho) / r


def _check_sigma(rho, r, eps):
    rho = check_scalar(rho, "rho", positive=True)
    r = check_scalar(r, "r", positive=True)
    if not rho < r:
        raise DomainError(f"need rho < r, got rho={rho}, r={r}")
    bound = eps_bound(rho, r)
    if eps is None:
        eps = bound
    eps = check_scalar(eps, "eps", positive=True)
    if eps > bound * (1 + 1e-12):
        raise DomainError(f"eps={eps} exceeds 2 pi (r - rho)/r = {bound}")
    return rho, r, min(eps, bound)


def sigma_rho(rho: float, r: float, eps, point) -> np.ndarray:
    """Area-preserving map of the slit disk D(rho) into SD(r).

    In symplectic polar coordinates ``(s, phi)`` with ``s = x^2 + y^2`` it
    is ``(s, phi) -> (2 pi s / (2 pi - eps), phi (2 pi - eps) / (2 pi) + eps / 2)``.
    ``eps=None`` selects its largest admissible value ``2 pi (r - rho) / r``.
    """
    rho, r, eps = _check_sigma(rho, r, eps)
    single = np.ndim(point) == 1
    P = check_points(point, 2, "point")
    x, y = P[:, 0], P[:, 1]
    s = x * x + y * y
    if np.any(s >= rho):
        raise DomainError("point must lie in the open disk D(rho)")
    phi = _angle(x, y)
    k = TWO_PI / (TWO_PI - eps)
    s2 = k * s
    phi2 = phi / k + eps / 2.0
    rad = np.sqrt(s2)
    return _unwrap(single, np.column_stack([rad * np.cos(phi2), rad * np.sin(phi2)]))


def traynor_embedding(n: int, rho: float, r: float, point, eps: float = None) -> np.ndarray:
    """Ball B^{2n}(rho) minus slits into ``Delta^n(r) x C^n(pi)``.

    Applies :func:`sigma_rho` on every pair and then :func:`psi_inverse`;
    the output is interleaved ``(x1, y1, ..., xn, yn)``.
    """
    rho, r, eps = _check_sigma(rho, r, eps)
    single = np.ndim(point) == 1
    n, X, Y = _pairs(n, point)
    if np.any((X * X + Y * Y).sum(axis=1) >= rho):
        raise DomainError("point must lie in the open ball B(rho)")
    moved = np.empty((X.shape[0], 2 * n))
    for i in range(n):
        moved[:, 2 * i:2 * i + 2] = sigma_rho(rho, r, eps, np.column_stack([X[:, i], Y[:, i]]))
    return _unwrap(single, psi_inverse(n, moved))


def numerical_jacobian(fn, x, h=1e-5):
    """Central-difference Jacobian of ``fn`` at a single point."""
    x = np.asarray(x, dtype=float)
    cols = []
    for k in range(x.size):
        xp, xm = x.copy(), x.copy()
        xp[k] += h
        xm[k] -= h
        # divide by the representable step, not 2h
        cols.append((np.asarray(fn(xp)) - np.asarray(fn(xm))) / (xp[k] - xm[k]))
    return np.column_stack(cols)


def symplectic_check(fn, sample_points, h: float = 1e-5, omega_source=None, omega_target=None) -> float:
    """Largest ``|J^T W_t J - W_s|_inf`` over the samples.

    ``W_s`` and ``W_t`` default to the standard interleaved form; ``fn``
    maps one point to one point. Domain errors at a sample propagate.
    """
    h = check_scalar(h, "h", positive=True)
    P = check_points(sample_points, None, "sample_points")
    dim = P.shape[1]
    if dim % 2:
        raise DomainError("symplectic maps act on even-dimensional spaces")
    Ws = standard_form(dim // 2) if omega_source is None else np.asarray(omega_source, dtype=float)
    Wt = standard_form(dim // 2) if omega_target is None else np.asarray(omega_target, dtype=float)
    worst = 0.0
    for p in P:
        J = numerical_jacobian(fn, p, h)
        worst = max(worst, float(np.abs(J.T @ Wt @ J - Ws).max()))
    return worst


def jacobian_determinant(fn, x, h=1e-5):
    return float(np.linalg.det(numerical_jacobian(fn, x, h)))


def sample_ball(n, rho, count, rng, slack=0.999):
    """Uniform samples of the open ball ``{sum |z_i|^2 < slack * rho}`` (interleaved)."""
    g = rng.normal(size=(count, 2 * n))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    rad = np.sqrt(slack * rho) * rng.uniform(size=(count, 1)) ** (1.0 / (2 * n))
    return g * rad
