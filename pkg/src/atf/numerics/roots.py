"""Bracketed scalar root finding."""
from __future__ import annotations

import math

import numpy as np
from dataclasses import dataclass

from scipy.optimize import brentq

from ..exceptions import ConvergenceError, DomainError


@dataclass(frozen=True)
class Bracket:
    lo: float
    hi: float
    f_lo_sign: int
    f_hi_sign: int

    def __post_init__(self):
        if not self.lo < self.hi:
            raise DomainError(f"bracket needs lo < hi, got [{self.lo}, {self.hi}]")
        if self.f_lo_sign == self.f_hi_sign:
            raise DomainError("no sign change on bracket")

    @classmethod
    def around(cls, f, lo, hi):
        """Evaluate ``f`` at both ends and build the bracket."""
        flo, fhi = float(f(lo)), float(f(hi))
        return cls(float(lo), float(hi), _sign(flo), _sign(fhi))


def _sign(v):
    if not math.isfinite(v):
        raise DomainError(f"function value {v!r} is not finite")
    return (v > 0) - (v < 0)


def find_root(f, bracket: Bracket, tol: float = 1e-14, max_iter: int = 200) -> float:
    """Root of ``f`` inside ``bracket`` (Brent's safeguarded bisection/secant).

    An endpoint where ``f`` vanishes exactly is returned as is.
    """
    if bracket.f_lo_sign == 0:
        return bracket.lo
    if bracket.f_hi_sign == 0:
        return bracket.hi
    try:
        x, info = brentq(f, bracket.lo, bracket.hi, xtol=tol, rtol=4 * np.finfo(float).eps,
                         maxiter=max_iter, full_output=True, disp=False)
    except ValueError as exc:
        raise DomainError(str(exc)) from exc
    if not info.converged:
        raise ConvergenceError(f"root not bracketed to {tol} in {max_iter} iterations")
    return float(x)
