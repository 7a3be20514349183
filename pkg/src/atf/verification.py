"""Independent oracles and the consolidated consistency report.

Every row compares two computations that share no code path: a closed
form against its defining quadrature, or the Lebesgue measure of a base
region against the Liouville volume of the bundle (unit-ball fiber volume
times the Riemannian volume of the base manifold).
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from functools import partial

import numpy as np

from . import bidisk, ellipsoid3, revolution
from ._parallel import ordered_map
from ._validation import check_count, check_scalar
from .diagram.base import region_area, region_volume
from .embed import traynor
from .exceptions import DomainError
from .numerics import DEFAULT_SPEC, SINGULAR_SPEC, integrate, make_rng

TWO_PI = 2.0 * math.pi

REPORT_HEADER = (
    "Volume rows assume that the base region's Lebesgue measure equals the "
    "Liouville volume (action-angle coordinates with period-1 angles)."
)


@dataclass(frozen=True)
class CheckRow:
    name: str
    lhs: float
    rhs: float
    rel_err: float
    tolerance: float

    @property
    def passed(self):
        return bool(self.rel_err <= self.tolerance)


def make_row(name, lhs, rhs, tolerance):
    """Relative error against ``rhs`` (absolute when ``rhs`` is 0)."""
    lhs, rhs = float(lhs), float(rhs)
    err = abs(lhs - rhs) / abs(rhs) if rhs != 0 else abs(lhs - rhs)
    if not math.isfinite(err):
        err = math.inf
    return CheckRow(name, lhs, rhs, err, float(tolerance))


@dataclass
class ConsistencyReport:
    rows: list = field(default_factory=list)

    def add(self, row):
        self.rows.append(row)

    def sorted(self):
        return ConsistencyReport(sorted(self.rows, key=lambda r: r.name))

    @property
    def all_passed(self):
        return all(r.passed for r in self.rows)

    @property
    def failures(self):
        return [r for r in self.rows if not r.passed]

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["name", "lhs", "rhs", "rel_err", "tolerance", "pass"])
        for r in self.rows:
            w.writerow([r.name, repr(r.lhs), repr(r.rhs), repr(r.rel_err), repr(r.tolerance), str(r.passed).lower()])
        return buf.getvalue()

    def to_text(self):
        width = max([len(r.name) for r in self.rows] + [4])
        lines = [f"# {REPORT_HEADER}", f"{'name':<{width}}  {'lhs':>22}  {'rhs':>22}  {'rel_err':>9}  {'tol':>7}  result"]
        for r in self.rows:
            lines.append(
                f"{r.name:<{width}}  {r.lhs:>22.15g}  {r.rhs:>22.15g}  {r.rel_err:>9.2e}  {r.tolerance:>7.0e}  "
                f"{'PASS' if r.passed else 'FAIL'}"
            )
        lines.append(f"{sum(r.passed for r in self.rows)}/{len(self.rows)} checks passed")
        return "\n".join(lines) + "\n"


# -------------------------------------------------------------- oracles


def surface_area_revolution(p) -> float:
    """``int 2 pi u sqrt(1 + u'^2) dz`` written through ``w = u^2``."""

    def f(z):
        w = p.u_sq(z)
        wd = p.u_sq_deriv(z)
        return TWO_PI * np.sqrt(np.maximum(w + 0.25 * wd * wd, 0.0))

    return integrate(f, p.a, p.b, SINGULAR_SPEC)


def liouville_volume_revolution(p) -> float:
    """Unit-disk fiber area times surface area, ``pi * Area(S)`` (analytic oracle)."""
    return math.pi * surface_area_revolution(p)


def _ellipsoid3_element(c, t, a, b):
    """Gram-determinant volume element of E(1,1,c,c) in (t, a, b) coordinates."""
    ct, st = np.cos(t), np.sin(t)
    ca, sa = np.cos(a), np.sin(a)
    cb, sb = np.cos(b), np.sin(b)
    zero = np.zeros_like(t)
    dt = np.stack([-st * ca, -st * sa, c * ct * cb, c * ct * sb], axis=-1)
    da = np.stack([-ct * sa, ct * ca, zero, zero], axis=-1)
    db = np.stack([zero, zero, -c * st * sb, c * st * cb], axis=-1)
    J = np.stack([dt, da, db], axis=-1)
    G = np.einsum("nki,nkj->nij", J, J)
    return np.sqrt(np.maximum(np.linalg.det(G), 0.0))


def liouville_volume_ellipsoid3(c: float, samples: int = 10 ** 6, seed: int = 0):
    """Monte-Carlo Liouville volume of the unit disk bundle of E(1,1,c,c).

    The hypersurface is parametrized by ``(t, a, b)`` in
    ``(0, pi/2) x (0, 2pi)^2``; uniform parameter samples are weighted by
    the Gram determinant of the embedding and the result is multiplied by
    the unit 3-ball volume ``4 pi / 3``. Returns ``(estimate, std_err)``.
    """
    c = check_scalar(c, "c", positive=True)
    n = check_count(samples, "samples", minimum=10 ** 4)
    rng = make_rng(seed)
    box = (math.pi / 2) * TWO_PI * TWO_PI
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < n:
        m = min(10 ** 6, n - done)
        t = rng.uniform(0.0, math.pi / 2, m)
        a = rng.uniform(0.0, TWO_PI, m)
        b = rng.uniform(0.0, TWO_PI, m)
        g = _ellipsoid3_element(c, t, a, b)
        total += g.sum()
        total_sq += (g * g).sum()
        done += m
    mean = total / n
    var = max(total_sq / n - mean * mean, 0.0)
    scale = 4.0 * math.pi / 3.0 * box
    return scale * mean, scale * math.sqrt(var / n)


def riemannian_volume_ellipsoid3(c: float) -> float:
    """Deterministic cross-check: ``4 pi^2 int cos t c sin t sqrt(sin^2 t + c^2 cos^2 t) dt``."""
    c = check_scalar(c, "c", positive=True)

    def f(t):
        return np.cos(t) * c * np.sin(t) * np.sqrt(np.sin(t) ** 2 + c * c * np.cos(t) ** 2)

    return TWO_PI * TWO_PI * integrate(f, 0.0, math.pi / 2, DEFAULT_SPEC)


# --------------------------------------------------------------- suites


def _worst(name, pairs, tol):
    """Row for the level with the largest disagreement among (lhs, rhs) pairs."""
    rows = [make_row(name, a, b, tol) for a, b in pairs]
    return max(rows, key=lambda r: r.rel_err)


def revolution_grid(c):
    """15 levels with |mu| >= 0.05 |eta| for the planar closed-form check."""
    etas = (0.3, 0.6, 1.0)
    fracs = (0.05, 0.25, 0.5, 0.75, 0.95)
    return [(f * e, e) for e in etas for f in fracs]


def ellipsoid3_levels(c, count, seed):
    """Random admissible levels with |mu_i| >= 0.05 and nonzero slack."""
    rng = make_rng(seed)
    out = []
    while len(out) < count:
        eta = rng.uniform(0.2, 1.0)
        m1 = rng.uniform(0.05, eta)
        m2 = rng.uniform(0.05, c * eta)
        lvl = ellipsoid3.Level2(m1 * rng.choice([-1, 1]), m2 * rng.choice([-1, 1]), eta)
        if lvl.slack(c) > 1e-3:
            out.append(lvl)
    return out


def revolution_formula_rows(c):
    p = revolution.ProfileCurve.ellipsoid(c)
    pairs = []
    for mu, eta in revolution_grid(c):
        lvl = revolution.FiberLevel(mu, eta)
        pairs.append((revolution.area_closed_form_ellipsoid(c, lvl), revolution.area_quadrature(p, lvl)))
    return [_worst(f"formula.revolution.c={c:g}", pairs, 1e-6)]


def ellipsoid3_formula_rows(c, levels=200, seed=0):
    pairs = [(ellipsoid3.area_closed_form_3d(c, lvl), ellipsoid3.area_quadrature_3d(c, lvl))
             for lvl in ellipsoid3_levels(c, levels, seed)]
    return [_worst(f"formula.ellipsoid3.c={c:g}", pairs, 1e-6)]


def bidisk_formula_rows(points=200):
    mus = np.linspace(-TWO_PI, TWO_PI, points + 3)[1:-1]
    pairs = [(bidisk.area_closed_form(m), bidisk.area_quadrature(m)) for m in mus if abs(m) > 1e-6]
    return [
        _worst("formula.bidisk", pairs, 1e-10),
        make_row("formula.bidisk.peak", bidisk.area_closed_form(0.0), 2.0, 1e-12),
        make_row("formula.bidisk.ends", bidisk.area_closed_form(TWO_PI) + bidisk.area_closed_form(-TWO_PI), 0.0, 1e-12),
    ]


def revolution_volume_rows(c, samples=2048):
    p = revolution.ProfileCurve.ellipsoid(c)
    d = revolution.boundary_curve(p, samples)
    return [make_row(f"volume.revolution.c={c:g}", region_area(d), liouville_volume_revolution(p), 1e-4)]


def ellipsoid3_volume_rows(c, grid_n=64, mc_samples=10 ** 6, seed=0):
    est, se = liouville_volume_ellipsoid3(c, mc_samples, seed)
    vol = region_volume(ellipsoid3.base_region(c, grid_n))
    return [make_row(f"volume.ellipsoid3.c={c:g}", vol, est, max(3.0 * se / est, 1e-3))]


def bidisk_volume_rows(samples=2048):
    integral = integrate(lambda x: np.array([bidisk.area_closed_form(v) for v in x]), -TWO_PI, TWO_PI)
    return [
        make_row("volume.bidisk.integral", integral, math.pi ** 2, 1e-6),
        make_row("volume.bidisk.diagram", region_area(bidisk.base_diagram(samples)), math.pi ** 2, 1e-5),
    ]


def traynor_rows(seed=0, points=100, h=1e-5):
    rng = make_rng(seed)
    rows = []
    # |psi|^2 = sum x_i
    worst = 0.0
    for n in (1, 2, 3):
        r = TWO_PI
        x = rng.dirichlet(np.ones(n + 1), size=points)[:, :n] * r
        y = rng.uniform(0.01, math.pi - 0.01, size=(points, n))
        P = np.empty((points, 2 * n))
        P[:, 0::2], P[:, 1::2] = x, y
        img = traynor.traynor_psi(n, r, P)
        worst = max(worst, float(np.abs((img ** 2).sum(axis=1) - x.sum(axis=1)).max()))
    rows.append(make_row("traynor.psi_norm", worst, 0.0, 1e-14))
    # sigma_rho preserves area
    rho, r = TWO_PI - 0.1, TWO_PI
    pts = traynor.sample_ball(1, rho, points, rng)
    dets = [traynor.jacobian_determinant(lambda q: traynor.sigma_rho(rho, r, None, q), q, h) for q in pts]
    rows.append(make_row("traynor.sigma_det", max(abs(d - 1.0) for d in dets), 0.0, 1e-6))
    for n in (1, 2, 3):
        pts = traynor.sample_ball(n, rho, points, rng)
        Wt = traynor.standard_form(n, sign=-1.0)
        defect = traynor.symplectic_check(lambda q: traynor.traynor_embedding(n, rho, r, q), pts, h, None, Wt)
        rows.append(make_row(f"traynor.embedding_defect.n={n}", defect, 0.0, 1e-6))
    return rows


SUITES = ("formulas", "volumes", "traynor")


def _tasks(fam, cs, samples, grid_n, mc_samples, levels_3d, seed):
    if fam == "formulas":
        return ([partial(revolution_formula_rows, c) for c in cs]
                + [partial(ellipsoid3_formula_rows, c, levels_3d, seed) for c in cs]
                + [bidisk_formula_rows])
    if fam == "volumes":
        return ([partial(revolution_volume_rows, c, samples) for c in cs]
                + [partial(ellipsoid3_volume_rows, c, grid_n, mc_samples, seed) for c in cs]
                + [partial(bidisk_volume_rows, samples)])
    if fam == "traynor":
        return [partial(traynor_rows, seed)]
    raise DomainError(f"unknown suite {fam!r}; choose from {', '.join(SUITES)}")


def sweep(families=SUITES, cs=(0.5, 1.0, 2.0), samples=2048, grid_n=64, mc_samples=10 ** 6, levels_3d=200,
          seed=0) -> ConsistencyReport:
    """Run the requested suites and return rows ordered by name.

    Checks are independent; with ``ATF_THREADS > 1`` they run on a thread
    pool. Results do not depend on the worker count.
    """
    if isinstance(families, str):
        families = SUITES if families == "all" else (families,)
    tasks = [t for fam in families for t in _tasks(fam, cs, samples, grid_n, mc_samples, levels_3d, seed)]
    report = ConsistencyReport()
    for rows in ordered_map(lambda f: f(), tasks):
        for r in rows:
            report.add(r)
    return report.sorted()
