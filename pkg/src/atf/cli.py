"""``atf`` command line: diagram, mutate, fit and verify.

Exit codes: 0 success, 1 a verification row failed, 2 invalid input
(usage, validation, unreadable files), 3 numeric failure.
All quantities on the command line are in action units unless noted.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import bidisk, ellipsoid3, revolution
from .diagram import PiecewiseUnimodularMap, apply_map, load, preset, render
from .diagram.emit import FORMATS, atomic_write
from .diagram.maps import PRESETS
from .embed import fit_simplex
from .exceptions import ConvergenceError, DomainError, FormulaDiscrepancy
from .verification import SUITES, sweep

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _write(text, path):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        atomic_write(path, text)


def _read_profile(path):
    """Two-column CSV ``z,u`` (header optional) for a custom surface of revolution."""
    rows = []
    with open(path, encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
    for k, ln in enumerate(lines):
        parts = ln.split(",")
        try:
            rows.append([float(parts[0]), float(parts[1])])
        except (ValueError, IndexError):
            # only the first line may be a header
            if k > 0:
                raise DomainError(f"{path}: bad row {ln!r}") from None
    if not rows:
        raise DomainError(f"{path}: no profile samples")
    X = np.array(rows)
    return revolution.ProfileCurve.from_samples(X[:, 0], X[:, 1])


# ------------------------------------------------------------- commands


def cmd_diagram(a):
    if a.samples is None and a.space != "ellipsoid3":
        raise UsageError("--samples is required for planar diagrams")
    if a.space == "revolution":
        if a.profile:
            p = _read_profile(a.profile)
        else:
            p = revolution.ProfileCurve.ellipsoid(1.0 if a.c is None else a.c)
        d = revolution.boundary_curve(p, a.samples)
    elif a.space == "ellipsoid3":
        d = ellipsoid3.base_region(1.0 if a.c is None else a.c, a.grid)
    elif a.space == "bidisk":
        d = bidisk.base_diagram(a.samples)
    else:
        raise UsageError(f"unknown space {a.space!r}")
    _write(render(d, a.format), a.out)
    return EXIT_OK


def _load_map(a):
    if (a.map is None) == (a.preset is None):
        raise UsageError("give exactly one of --map and --preset")
    m = preset(a.preset) if a.preset else PiecewiseUnimodularMap.from_json(a.map)
    return m.inverse() if a.inverse else m


def _default_format(path):
    ext = str(path).rsplit(".", 1)[-1].lower()
    return ext if ext in ("csv", "json") else "json"


def cmd_mutate(a):
    if a.input is None:
        raise UsageError("--in is required")
    d = load(a.input)
    m = _load_map(a)
    out = apply_map(d, m)
    _write(render(out, a.format or _default_format(a.input)), a.out)
    return EXIT_OK


def cmd_fit(a):
    if a.input is None:
        raise UsageError("--in is required")
    region = load(a.input)
    if a.map or a.preset:
        region = apply_map(region, _load_map(a))
    matrix = json.loads(a.matrix) if a.matrix else None
    cert = fit_simplex(region, a.family, a.margin, a.tol, matrix=matrix, anchors=a.anchors)
    print(f"capacity {cert.simplex.capacity:.6f}")
    print(f"translate {' '.join(f'{v:.6f}' for v in cert.simplex.translate)}")
    if a.out:
        atomic_write(a.out, json.dumps(cert.to_dict(a.samples_out), indent=1, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_verify(a):
    rep = sweep(a.suite, cs=tuple(a.c_values), samples=a.samples, grid_n=a.grid, mc_samples=a.mc_samples,
                seed=a.seed)
    text = rep.to_csv() if a.format == "csv" else rep.to_text()
    _write(text, a.out)
    if a.out not in (None, "-") and a.format == "csv":
        sys.stdout.write(rep.to_text())
    return EXIT_OK if rep.all_passed else EXIT_FAIL


# --------------------------------------------------------------- parser


def _positive_int(s):
    v = int(s)
    if v <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {s}")
    return v


def _positive_float(s):
    v = float(s)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {s}")
    return v


def _nonneg_float(s):
    v = float(s)
    if not v >= 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative number, got {s}")
    return v


def build_parser():
    top = argparse.ArgumentParser(
        prog="atf",
        description="Base diagrams of singular Lagrangian fibrations, cut transfers, "
                    "simplex fitting and oracle checks. Moment values and areas are in action units.",
        epilog="Exit codes: 0 ok, 1 a check failed, 2 invalid input, 3 numeric failure. "
               "ATF_THREADS bounds the worker count (default 1).",
    )
    cfg = argparse.ArgumentParser(add_help=False)
    cfg.add_argument("--config", metavar="JSON",
                     help="JSON object of option values (keys as the long flag names, dashes or underscores); "
                          "flags given on the command line win")
    sub = top.add_subparsers(dest="command", metavar="{diagram,mutate,fit,verify}")
    sub.required = True

    p = sub.add_parser("diagram", parents=[cfg], help="write a base diagram or base region")
    p.add_argument("--space", choices=("revolution", "ellipsoid3", "bidisk"), default="revolution",
                   help="manifold: ellipsoid of revolution E(1,1,c), E(1,1,c,c) or the Lagrangian bidisk")
    p.add_argument("--c", type=_positive_float, default=None,
                   help="ellipsoid axis c (dimensionless, default 1); ignored for bidisk")
    p.add_argument("--profile", metavar="CSV",
                   help="revolution only: columns z,u of a custom profile (length units, one equator)")
    p.add_argument("--samples", type=_positive_int, default=None,
                   help="boundary samples for planar diagrams (count, at least 16)")
    p.add_argument("--grid", type=_positive_int, default=64,
                   help="ellipsoid3 only: lattice subdivisions per rhombus side (count)")
    p.add_argument("--format", choices=FORMATS, default="csv",
                   help="csv (mu in action units, area in action units), svg (40 user units per action unit), "
                        "obj (ellipsoid3 height surface) or json")
    p.add_argument("--out", metavar="PATH", help="output file (default stdout)")
    p.set_defaults(func=cmd_diagram)

    def map_args(q):
        q.add_argument("--map", metavar="JSON",
                       help="map file: {pieces: [{halfspace: [a..., b], matrix, shift}], global: {matrix, shift}}; "
                            "b and shift in action units")
        q.add_argument("--preset", choices=sorted(PRESETS), help="built-in cut-transfer map")
        q.add_argument("--inverse", action="store_true", help="apply the inverse of the map")

    p = sub.add_parser("mutate", parents=[cfg], help="transfer cuts with a piecewise unimodular map")
    p.add_argument("--in", dest="input", metavar="PATH",
                   help="diagram or region (.json), planar curve (.csv mu,area) or vertex list (.csv mu1,mu2,area)")
    map_args(p)
    p.add_argument("--format", choices=("csv", "json", "svg", "obj"), default=None,
                   help="output format (default: that of the input)")
    p.add_argument("--out", metavar="PATH", help="output file (default stdout)")
    p.set_defaults(func=cmd_mutate)

    p = sub.add_parser("fit", parents=[cfg], help="largest simplex inside a region (capacity lower bound)")
    p.add_argument("--in", dest="input", metavar="PATH", help="region file (.json or .csv)")
    p.add_argument("--family", choices=("triangle2d", "pyramid3d"), default="pyramid3d",
                   help="simplex family: triangle in a planar diagram or tetrahedron in a spatial region")
    p.add_argument("--margin", type=_nonneg_float, default=1e-3,
                   help="clearance from the region boundary (action units)")
    p.add_argument("--tol", type=_positive_float, default=1e-3, help="capacity tolerance (action units)")
    p.add_argument("--matrix", metavar="JSON",
                   help="unimodular shape matrix as a JSON list; columns are edge directions")
    p.add_argument("--anchors", type=_positive_int, default=9, help="translate grid points per axis (count)")
    map_args(p)
    p.add_argument("--samples-out", action="store_true", help="include the checked samples in the certificate")
    p.add_argument("--out", metavar="PATH", help="certificate JSON path (capacity in action units)")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("verify", parents=[cfg], help="closed form, volume and embedding consistency checks")
    p.add_argument("--suite", choices=SUITES + ("all",), default="all", help="which checks to run")
    p.add_argument("--seed", type=int, default=0, help="Monte-Carlo seed (integer)")
    p.add_argument("--c-values", type=_positive_float, nargs="+", default=[0.5, 1.0, 2.0],
                   help="ellipsoid axes c to sweep (dimensionless)")
    p.add_argument("--samples", type=_positive_int, default=2048, help="planar boundary samples (count)")
    p.add_argument("--grid", type=_positive_int, default=64, help="ellipsoid3 lattice subdivisions (count)")
    p.add_argument("--mc-samples", type=_positive_int, default=10 ** 6,
                   help="Monte-Carlo samples for the E(1,1,c,c) volume oracle (count)")
    p.add_argument("--format", choices=("text", "csv"), default="text", help="report format")
    p.add_argument("--out", metavar="PATH", help="report file (default stdout)")
    p.set_defaults(func=cmd_verify)
    return top, sub


def _apply_config(top, sub, argv):
    """Re-parse with config-file values installed as defaults."""
    a = top.parse_args(argv)
    if not getattr(a, "config", None):
        return a
    try:
        with open(a.config, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {a.config}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise UsageError("config must be a JSON object")
    p = sub.choices[a.command]
    known = {act.dest for act in p._actions}
    aliases = {"in": "input"}
    defaults = {}
    for key, val in cfg.items():
        dest = aliases.get(key, key.replace("-", "_"))
        if dest not in known or dest in ("help", "config", "func"):
            raise UsageError(f"unknown config key {key!r} for '{a.command}'")
        act = next(x for x in p._actions if x.dest == dest)
        if act.type is not None and val is not None:
            try:
                val = [act.type(str(v)) for v in val] if isinstance(val, list) else act.type(str(val))
            except (ValueError, argparse.ArgumentTypeError) as exc:
                raise UsageError(f"config key {key!r}: {exc}") from exc
        if act.choices is not None and val not in act.choices:
            raise UsageError(f"config key {key!r}: {val!r} not in {sorted(act.choices)}")
        defaults[dest] = val
    p.set_defaults(**defaults)
    return top.parse_args(argv)


def main(argv=None):
    top, sub = build_parser()
    try:
        a = _apply_config(top, sub, argv)
        return a.func(a)
    except (ConvergenceError, FormulaDiscrepancy, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"atf: numeric failure: {_one_line(exc)}", file=sys.stderr)
        return EXIT_NUMERIC
    except (UsageError, DomainError, ValueError, KeyError, TypeError, OSError) as exc:
        print(f"atf: error: {_one_line(exc)}", file=sys.stderr)
        return EXIT_USAGE


def _one_line(exc):
    return " ".join(str(exc).split()) or type(exc).__name__


if __name__ == "__main__":
    sys.exit(main())
