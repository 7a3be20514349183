"""Seeded Monte-Carlo volume estimation.

Random numbers come from numpy's PCG64 bit generator (64-bit state
increment, 128-bit LCG with XSL-RR output), seeded explicitly so that
every estimate is bit-reproducible for a given seed and sample count.
"""
from __future__ import annotations

import math

import numpy as np

from ..exceptions import DomainError

MIN_SAMPLES = 10_000
_BATCH = 1_000_000


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed)))


def mc_volume(indicator, lower, upper, samples: int = 1_000_000, seed: int = 0):
    """Estimate the volume of ``{x in box : indicator(x)}``.

    ``indicator`` receives an ``(k, d)`` array and returns ``k`` booleans.
    Returns ``(estimate, std_err)``.
    """
    lower = np.atleast_1d(np.asarray(lower, dtype=float))
    upper = np.atleast_1d(np.asarray(upper, dtype=float))
    if lower.shape != upper.shape or lower.ndim != 1:
        raise DomainError("box corners must be 1-d arrays of equal length")
    if np.any(upper <= lower):
        raise DomainError("empty bounding box")
    samples = int(samples)
    if samples < MIN_SAMPLES:
        raise DomainError(f"need at least {MIN_SAMPLES} samples, got {samples}")

    rng = make_rng(seed)
    box = float(np.prod(upper - lower))
    hits = 0
    done = 0
    while done < samples:
        k = min(_BATCH, samples - done)
        pts = lower + (upper - lower) * rng.random((k, lower.size))
        hits += int(np.count_nonzero(indicator(pts)))
        done += k
    p = hits / samples
    return box * p, box * math.sqrt(p * (1.0 - p) / samples)
