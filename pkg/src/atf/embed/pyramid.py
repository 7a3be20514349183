"""The two tetrahedra used to place a ball in the c = 1 base region.

``P_eps`` sits in the unmutated region; ``Pbar_eps`` is its image under the
three-stage cut transfer (preset ``lemma-s3``) and is a translated
standard simplex of size ``2 pi - eps``.
"""
from __future__ import annotations

import math

import numpy as np

from .._validation import check_scalar
from ..diagram.base import Polytope
from ..exceptions import DomainError

TWO_PI = 2.0 * math.pi


def _check_eps(eps):
    eps = check_scalar(eps, "eps")
    if not 0.0 < eps < 1.0:
        raise DomainError(f"eps must lie in (0, 1), got {eps}")
    return eps


def pyramid_p_eps(eps: float) -> Polytope:
    e = _check_eps(eps)
    return Polytope(np.array([
        [TWO_PI - e, e / 2, e / 4],
        [-TWO_PI + e, e / 2, e / 4],
        [0.0, TWO_PI - e / 2, e / 4],
        [0.0, e / 2, math.pi - e / 4],
    ]))


def pyramid_pbar_eps(eps: float) -> Polytope:
    e = _check_eps(eps)
    return Polytope(np.array([
        [e / 4, e / 2, e / 4],
        [TWO_PI - 3 * e / 4, e / 2, e / 4],
        [e / 4, TWO_PI - e / 2, e / 4],
        [e / 4, e / 2, TWO_PI - 3 * e / 4],
    ]))


def tetra_volume(V):
    V = np.asarray(V, dtype=float)
    return abs(float(np.linalg.det(V[1:] - V[0]))) / 6.0
