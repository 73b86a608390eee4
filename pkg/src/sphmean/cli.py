"""Command-line front end.

Exit codes: 0 = pass (or success), 1 = fail, 2 = usage or data error.

Examples::

    sphmean mean --field harmonic:x1x2 --domain "ball 0 0 1" --r 0.3
    sphmean detect all --field harmonic:re_z3 --domain "ball 0 0 1" --out report.json
    sphmean estimate-mu --field exp-plane:1.5:e1 --domain "ball 0 0 1"
    sphmean mean-field --field quadratic --domain "box 0 0 1 1" --r 0.2 --out m.gf
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import detectors as det
from .fields import format_grid_field, load_grid_field, make_field
from .geometry import distance_to_boundary, inradius, parse_domain, sample_interior
from .means import iterated_mean, mean_field, mean_field_csv, spherical_mean
from .quadrature import sphere_rule

SUBTESTS = ("kellogg", "iterated", "mean-harmonic", "pan", "pan-mean", "max-principle", "all")

DEFAULTS = {
    "quad_kind": None,
    "quad_level": None,
    "spacing": None,
    "h": None,
    "tol": None,
    "mp_tol": 0.0,
    "mu": None,
    "radii": None,
    "r": None,
    "r1": None,
    "r2": None,
    "method": "double-sum",
    "format": None,
    "out": None,
    "field": None,
    "grid": None,
    "domain": None,
}


class UsageError(Exception):
    pass


def _fmt(v) -> str:
    return f"{float(v):.17g}"


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON file of option values; command-line flags take precedence")
    p.add_argument("--field", help="catalog field, e.g. harmonic:x1x2, exp-plane:2:e1, quadratic")
    p.add_argument("--grid", help="gridfield v1 file to use as the field")
    p.add_argument("--domain", help='"ball cx cy [cz ...] R" or "box lo1 .. lom hi1 .. him"')
    p.add_argument("--quad-kind", dest="quad_kind", choices=("circle-trapezoid", "product-gauss", "monte-carlo"))
    p.add_argument("--quad-level", dest="quad_level", type=int)
    p.add_argument("--seed", type=int, help="monte-carlo seed (fallback: $MEANFIELD_SEED, then 0)")
    p.add_argument("--spacing", type=float, help="lattice spacing (default: inradius/5)")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sphmean", description="Spherical means and mean-value harmonicity tests")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mean", help="table of M(x, r, u) over the lattice")
    _common(p)
    p.add_argument("--r", type=float, nargs="+")

    p = sub.add_parser("iterate", help="table of I(x, r1, r2, u) over the lattice")
    _common(p)
    p.add_argument("--r1", type=float)
    p.add_argument("--r2", type=float)
    p.add_argument("--method", choices=("nested", "double-sum"))

    p = sub.add_parser("detect", help="run a detector or the full battery")
    p.add_argument("subtest", choices=SUBTESTS)
    _common(p)
    p.add_argument("--mu", type=float)
    p.add_argument("--radii", type=float, nargs="+", help="radii for the mean-field tests")
    p.add_argument("--h", type=float, help="finite-difference step (default: 1e-3 * inradius)")
    p.add_argument("--tol", type=float)
    p.add_argument("--mp-tol", dest="mp_tol", type=float, help="max-principle margin tolerance (default 0)")

    p = sub.add_parser("estimate-mu", help="estimate the Yukawa parameter mu")
    _common(p)
    p.add_argument("--radii", type=float, nargs="+")
    p.add_argument("--tol", type=float, help="dispersion tolerance (default 1e-6)")

    p = sub.add_parser("mean-field", help="gridfield v1 of M(., r, u) over the eroded domain")
    _common(p)
    p.add_argument("--r", type=float, nargs="+")
    return parser


def _merge_config(args) -> argparse.Namespace:
    cfg = {}
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(cfg, dict):
            raise UsageError("config file must hold a JSON object")
    for key, value in cfg.items():
        key = key.replace("-", "_")
        if getattr(args, key, None) is None:
            setattr(args, key, value)
    for key, value in DEFAULTS.items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)
    if getattr(args, "seed", None) is None:
        env = os.environ.get("MEANFIELD_SEED")
        try:
            args.seed = int(env) if env else 0
        except ValueError as exc:
            raise UsageError(f"MEANFIELD_SEED must be an integer, got {env!r}") from exc
    return args


def _setup(args):
    """Resolve field, domain and quadrature rule from the merged options."""
    if args.field and args.grid:
        raise UsageError("give either --field or --grid, not both")
    if not args.field and not args.grid:
        raise UsageError("one of --field or --grid is required")
    domain = parse_domain(args.domain) if args.domain else None
    if args.grid:
        u = load_grid_field(args.grid)
        if domain is None:
            domain = u.domain
        if domain.dim != u.dim:
            raise UsageError(f"grid is {u.dim}-d but domain is {domain.dim}-d")
        lo, hi = domain.bounds()
        if np.any(lo < u.domain.lo) or np.any(hi > u.domain.hi):
            raise UsageError("domain extends beyond the grid bounding box")
    else:
        if domain is None:
            raise UsageError("--domain is required with --field")
        u = make_field(args.field, domain.dim)
    rule = sphere_rule(domain.dim, args.quad_level, args.quad_kind, args.seed)
    return u, domain, rule


def _radii(values, domain, default_fractions, name):
    r_star = inradius(domain)
    radii = [float(v) for v in values] if values else [f * r_star for f in default_fractions]
    for r in radii:
        if not 0 < r < r_star:
            raise UsageError(f"{name} {r} must lie in (0, inradius={r_star})")
    return radii


def _emit(text: str, out) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _spacing(args, domain):
    return args.spacing if args.spacing is not None else inradius(domain) / 5


def cmd_mean(args) -> int:
    u, domain, rule = _setup(args)
    if not args.r:
        raise UsageError("--r is required")
    radii = _radii(args.r, domain, (), "radius")
    pts = sample_interior(domain, _spacing(args, domain))
    dist = distance_to_boundary(domain, pts)
    m = domain.dim
    lines = [",".join([f"x{i + 1}" for i in range(m)] + ["r", "mean", "u", "residual"])]
    for r in radii:
        ok = dist > r
        if not np.any(ok):
            continue
        means = spherical_mean(u, pts[ok], r, rule, domain=domain)
        uvals = u(pts[ok])
        for p, mv, uv in zip(pts[ok], means, uvals):
            lines.append(",".join(_fmt(v) for v in (*p, r, mv, uv, mv - uv)))
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_iterate(args) -> int:
    u, domain, rule = _setup(args)
    if args.r1 is None or args.r2 is None:
        raise UsageError("--r1 and --r2 are required")
    if args.r1 < 0 or args.r2 < 0:
        raise UsageError("radii must be nonnegative")
    pts = sample_interior(domain, _spacing(args, domain))
    pts = pts[distance_to_boundary(domain, pts) > args.r1 + args.r2]
    m = domain.dim
    lines = [",".join([f"x{i + 1}" for i in range(m)] + ["r1", "r2", "iterated", "u", "residual"])]
    if len(pts):
        vals = iterated_mean(u, pts, args.r1, args.r2, rule, method=args.method, domain=domain)
        for p, iv, uv in zip(pts, np.atleast_1d(vals), u(pts)):
            lines.append(",".join(_fmt(v) for v in (*p, args.r1, args.r2, iv, uv, iv - uv)))
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _run_subtest(name, u, domain, rule, args):
    spacing = args.spacing
    if name == "kellogg":
        return det.kellogg_test(u, domain, spacing, rule=rule, tol=args.tol)
    if name == "iterated":
        return det.iterated_test(u, domain, spacing, rule=rule, tol=args.tol, method=args.method)
    if name == "max-principle":
        return det.max_principle_report(u, domain, spacing, tol=args.mp_tol)
    radii = _radii(args.radii, domain, (0.1, 0.2), "radius")
    if name == "mean-harmonic":
        return det.mean_harmonicity_test(u, domain, radii, spacing, args.h, rule, args.tol)
    mu = args.mu
    if mu is None or not mu > 0:
        raise UsageError(f"detector {name!r} needs a positive --mu")
    if name == "pan":
        return det.panharmonic_test(u, domain, mu, spacing, rule=rule, tol=args.tol)
    return det.panharmonic_mean_test(u, domain, mu, radii, spacing, args.h, rule, args.tol)


def cmd_detect(args) -> int:
    u, domain, rule = _setup(args)
    fmt = args.format or "json"
    if args.subtest != "all":
        report = _run_subtest(args.subtest, u, domain, rule, args)
        text = report.to_csv() if fmt == "csv" else report.to_json() + "\n"
        _emit(text, args.out)
        return 0 if report.passed else 1

    harmonic = [_run_subtest(n, u, domain, rule, args) for n in ("kellogg", "iterated", "mean-harmonic", "max-principle")]
    if args.mu is None:
        args.mu = 1.0
    pan = [_run_subtest(n, u, domain, rule, args) for n in ("pan", "pan-mean")]
    verdict = "pass" if all(r.passed for r in harmonic) else "fail"
    if fmt == "csv":
        parts = []
        for r in harmonic + pan:
            parts.append(f"# {r.test} {r.verdict}\n" + r.to_csv())
        text = "".join(parts)
    else:
        doc = {
            "field": u.label,
            "domain": str(domain),
            "verdict": verdict,
            "harmonic_battery": [r.to_dict() for r in harmonic],
            "panharmonic_battery": {
                "informational": True,
                "mu": args.mu,
                "reports": [r.to_dict() for r in pan],
            },
        }
        text = json.dumps(doc, indent=2) + "\n"
    _emit(text, args.out)
    return 0 if verdict == "pass" else 1


def cmd_estimate_mu(args) -> int:
    u, domain, rule = _setup(args)
    radii = _radii(args.radii, domain, (0.1, 0.2, 0.3), "radius")
    tol = 1e-6 if args.tol is None else args.tol
    try:
        mu_hat, dispersion, report = det.estimate_mu(u, domain, args.spacing, radii, rule, tol=tol)
    except det.NoRealMu as exc:
        print(f"no real mu: {exc}", file=sys.stderr)
        return 1
    if args.format == "json":
        _emit(report.to_json() + "\n", args.out)
    else:
        text = f"mu_hat {_fmt(mu_hat)}\ndispersion {_fmt(dispersion)}\n"
        text += f"samples {report.extra['n_samples']}\nratio_below_one {report.extra['n_ratio_below_one']}\n"
        _emit(text, args.out)
    return 0 if report.passed else 1


def cmd_mean_field(args) -> int:
    u, domain, rule = _setup(args)
    if not args.r or len(args.r) != 1:
        raise UsageError("mean-field needs exactly one --r")
    (r,) = _radii(args.r, domain, (), "radius")
    grid = mean_field(u, domain, r, _spacing(args, domain), rule)
    if args.format == "csv":
        _emit(mean_field_csv(grid), args.out)
    else:
        _emit(format_grid_field(grid), args.out)
    return 0


COMMANDS = {
    "mean": cmd_mean,
    "iterate": cmd_iterate,
    "detect": cmd_detect,
    "estimate-mu": cmd_estimate_mu,
    "mean-field": cmd_mean_field,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        args = _merge_config(args)
        return COMMANDS[args.command](args)
    except (UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
