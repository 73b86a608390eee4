"""Mean-value identities turned into numerical harmonicity/panharmonicity tests.

Every detector returns a :class:`DetectionReport` with one record per
sampled point (and radius), the threshold applied, and a pass/fail verdict
``max |residual| <= threshold``. Passing is numerical evidence, not proof.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np

from .fields import laplacian_from_stencil, stencil
from .geometry import Ball, Box, Domain, distance_to_boundary, erode, inradius, sample_interior
from .means import _means, iterated_mean, spherical_mean
from .quadrature import SphereQuadrature, sphere_rule
from .specialfn import invert_pan_coeff, pan_coeff

TOL_ANALYTIC = 1e-8
TOL_GRID = 1e-3
KELLOGG_FRACTION = 0.45
ITERATED_SPLIT = (0.25, 0.20)
FD_SAFETY = 2.0


@dataclass
class Record:
    point: list[float]
    radii: list[float]
    residual: float
    threshold: float

    @property
    def passed(self) -> bool:
        return abs(self.residual) <= self.threshold


@dataclass
class DetectionReport:
    test: str
    records: list[Record]
    threshold: float
    confidence: str
    parameters: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)
    # reason to fail regardless of residuals
    veto: str | None = None

    @property
    def max_abs_residual(self) -> float:
        return max((abs(r.residual) for r in self.records), default=0.0)

    @property
    def mean_abs_residual(self) -> float:
        if not self.records:
            return 0.0
        return float(np.mean([abs(r.residual) for r in self.records]))

    @property
    def verdict(self) -> str:
        if self.veto is not None:
            return "fail"
        return "pass" if self.max_abs_residual <= self.threshold else "fail"

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    @property
    def residuals(self) -> np.ndarray:
        return np.array([r.residual for r in self.records])

    def to_dict(self) -> dict:
        return {
            "test": self.test,
            "verdict": self.verdict,
            "confidence": self.confidence,
            "threshold": self.threshold,
            "max_abs_residual": self.max_abs_residual,
            "mean_abs_residual": self.mean_abs_residual,
            "n_records": len(self.records),
            "parameters": self.parameters,
            "veto": self.veto,
            **self.extra,
            "records": [asdict(r) for r in self.records],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_csv(self) -> str:
        m = len(self.records[0].point) if self.records else 0
        nr = max((len(r.radii) for r in self.records), default=0)
        cols = [f"x{i + 1}" for i in range(m)] + [f"r{i + 1}" for i in range(nr)]
        lines = [",".join(cols + ["residual", "threshold", "pass"])]
        for r in self.records:
            nums = [*r.point, *r.radii, r.residual, r.threshold]
            lines.append(",".join(f"{v:.17g}" for v in nums) + f",{int(r.passed)}")
        return "\n".join(lines) + "\n"


def _confidence(u) -> str:
    return "numerical only" if getattr(u, "is_grid", False) else "analytic field"


def _default_tol(u, tol):
    if tol is not None:
        return float(tol)
    return TOL_GRID if getattr(u, "is_grid", False) else TOL_ANALYTIC


def _rule(rule, m):
    return rule if rule is not None else sphere_rule(m)


def _lattice(d: Domain, spacing: float | None) -> np.ndarray:
    spacing = spacing if spacing is not None else inradius(d) / 5
    pts = sample_interior(d, spacing)
    if len(pts) == 0:
        raise ValueError(f"no lattice points inside the domain at spacing {spacing}")
    return pts


def _radius_fn(policy, default):
    """Map a radius policy (fraction, tuple of fractions, or callable of distance) to a function."""
    policy = default if policy is None else policy
    if callable(policy):
        return policy
    frac = np.asarray(policy, dtype=float)
    return lambda dist: frac * dist if frac.ndim == 0 else tuple(f * dist for f in frac)


def _params(d, spacing, rule, **kw):
    return {"domain": str(d), "spacing": spacing, "rule": rule.descriptor(), **kw}


def gauss_residual(u, x, r, rule: SphereQuadrature | None = None, domain: Domain | None = None):
    """``M(x, r, u) - u(x)``; zero for harmonic ``u`` on admissible spheres."""
    x = np.asarray(x, dtype=float)
    rule = _rule(rule, x.shape[-1])
    mean = spherical_mean(u, x, r, rule, domain=domain)
    return mean - u(x)


def kellogg_test(u, d: Domain, spacing: float | None = None, radius_policy=None,
                 rule: SphereQuadrature | None = None, tol: float | None = None) -> DetectionReport:
    """One-radius mean-value test ``M(x, r(x), u) = u(x)`` at every lattice point.

    The default radius is ``0.45 * dist(x, boundary)``.
    """
    rule = _rule(rule, d.dim)
    tol = _default_tol(u, tol)
    pts = _lattice(d, spacing)
    rfun = _radius_fn(radius_policy, KELLOGG_FRACTION)
    dist = distance_to_boundary(d, pts)
    r = np.array([rfun(t) for t in dist], dtype=float)
    res = spherical_mean(u, pts, r, rule, domain=d) - u(pts)
    recs = [Record(p.tolist(), [float(ri)], float(e), tol) for p, ri, e in zip(pts, r, res)]
    return DetectionReport("kellogg", recs, tol, _confidence(u), _params(d, spacing, rule))


def iterated_test(u, d: Domain, spacing: float | None = None, radius_policy=None,
                  rule: SphereQuadrature | None = None, tol: float | None = None,
                  method: str = "double-sum") -> DetectionReport:
    """Iterated mean test ``I(x, r1(x), r2(x), u) = u(x)`` at every lattice point.

    The default split is ``r1 = 0.25 dist``, ``r2 = 0.20 dist``.
    """
    rule = _rule(rule, d.dim)
    tol = _default_tol(u, tol)
    pts = _lattice(d, spacing)
    rfun = _radius_fn(radius_policy, ITERATED_SPLIT)
    dist = distance_to_boundary(d, pts)
    radii = np.array([rfun(t) for t in dist], dtype=float).reshape(len(pts), 2)
    vals = iterated_mean(u, pts, radii[:, 0], radii[:, 1], rule, method=method, domain=d)
    res = vals - u(pts)
    recs = [Record(p.tolist(), rr.tolist(), float(e), tol) for p, rr, e in zip(pts, radii, res)]
    return DetectionReport("iterated", recs, tol, _confidence(u), _params(d, spacing, rule, method=method))


def _default_h(d, h):
    return h if h is not None else 1e-3 * inradius(d)


def _mean_fd(u, pts, r, h, rule, mu):
    """Discrete Helmholtz residual of ``M(., r, u)`` at ``pts`` with step ``h``."""
    m = pts.shape[1]
    sp = stencil(pts, h).reshape(-1, m)
    vals = _means(u, sp, np.full(len(sp), r), rule).reshape(len(pts), 2 * m + 1)
    return laplacian_from_stencil(vals, h, m) - mu * mu * vals[:, 0]


def _helmholtz_mean_test(name, u, d, mu, radii, spacing, h, rule, tol, c_fd):
    rule = _rule(rule, d.dim)
    tol = _default_tol(u, tol)
    h = _default_h(d, h)
    radii = [float(r) for r in radii]
    r_star = inradius(d)
    if not radii or any(not 0 < r < r_star for r in radii):
        raise ValueError(f"radii must lie in (0, inradius={r_star}), got {radii}")
    spacing = spacing if spacing is not None else r_star / 5
    records = []
    c_est = 0.0
    per_radius = []
    for r in radii:
        dr = erode(d, r + 2 * h)
        pts = sample_interior(dr, spacing)
        if len(pts) == 0:
            raise ValueError(f"no lattice points in the eroded domain for r={r}")
        res_h = _mean_fd(u, pts, r, h, rule, mu)
        # truncation coefficient from the step-doubled residual: R(2h) - R(h) ~ 3 C h^2
        res_2h = _mean_fd(u, pts, r, 2 * h, rule, mu)
        c_r = float(np.max(np.abs(res_2h - res_h))) / (3 * h * h)
        c_est = max(c_est, c_r)
        per_radius.append({"r": r, "n_points": len(pts), "max_abs_residual": float(np.max(np.abs(res_h))),
                           "c_fd_estimate": c_r})
        records += [Record(p.tolist(), [r], float(e), 0.0) for p, e in zip(pts, res_h)]
    c_used = FD_SAFETY * c_est if c_fd is None else float(c_fd)
    threshold = tol + c_used * h * h
    for rec in records:
        rec.threshold = threshold
    extra = {"radii_sampled": radii, "per_radius": per_radius, "c_fd": c_used, "h": h,
             "note": "hypothesis checked only at the listed radii"}
    params = _params(d, spacing, rule, h=h, mu=mu, tol=tol)
    return DetectionReport(name, records, threshold, _confidence(u), params, extra)


def mean_harmonicity_test(u, d: Domain, radii, spacing: float | None = None, h: float | None = None,
                          rule: SphereQuadrature | None = None, tol: float | None = None,
                          c_fd: float | None = None) -> DetectionReport:
    """Check that each mean field ``M(., r, u)`` is harmonic on ``D_r``.

    The discrete Laplacian of ``x -> M(x, r, u)`` is evaluated on the
    lattice of ``D_{r+2h}`` for every listed radius. The threshold is
    ``tol + c_fd * h^2``; unless given, ``c_fd`` is twice the truncation
    coefficient estimated from the residual change under ``h -> 2h``.
    """
    return _helmholtz_mean_test("mean-harmonic", u, d, 0.0, radii, spacing, h, rule, tol, c_fd)


def panharmonic_mean_test(u, d: Domain, mu: float, radii, spacing: float | None = None,
                          h: float | None = None, rule: SphereQuadrature | None = None,
                          tol: float | None = None, c_fd: float | None = None) -> DetectionReport:
    """Check ``lap M - mu^2 M = 0`` for every listed radius with one shared ``mu``."""
    if not mu > 0:
        raise ValueError(f"mu must be positive, got {mu}")
    return _helmholtz_mean_test("pan-mean", u, d, float(mu), radii, spacing, h, rule, tol, c_fd)


def panharmonic_test(u, d: Domain, mu: float, spacing: float | None = None, radius_policy=None,
                     rule: SphereQuadrature | None = None, tol: float | None = None) -> DetectionReport:
    """One-radius test ``M(x, r(x), u) = a(mu r(x)) u(x)`` at every lattice point."""
    if not mu > 0:
        raise ValueError(f"mu must be positive, got {mu}")
    rule = _rule(rule, d.dim)
    tol = _default_tol(u, tol)
    pts = _lattice(d, spacing)
    rfun = _radius_fn(radius_policy, KELLOGG_FRACTION)
    dist = distance_to_boundary(d, pts)
    r = np.array([rfun(t) for t in dist], dtype=float)
    a = np.array([pan_coeff(d.dim, mu, ri) for ri in r])
    res = spherical_mean(u, pts, r, rule, domain=d) - a * u(pts)
    recs = [Record(p.tolist(), [float(ri)], float(e), tol) for p, ri, e in zip(pts, r, res)]
    return DetectionReport("pan", recs, tol, _confidence(u), _params(d, spacing, rule, mu=mu))


class NoRealMu(ValueError):
    """Every usable mean ratio is below one, so no real mu fits."""


# ratios within this of 1 are treated as exactly 1 (no detectable mu)
RATIO_ATOL = 1e-10


def estimate_mu(u, d: Domain, spacing: float | None = None, radii=None,
                rule: SphereQuadrature | None = None, u_floor: float | None = None,
                tol: float = 1e-6):
    """Recover ``mu`` by inverting ``M(x, r, u) / u(x) = a(mu r)`` pointwise.

    Parameters
    ----------
    radii : sequence of float, optional
        Absolute radii; pairs ``(x, r)`` that are not admissible are skipped.
        Defaults to ``(0.1, 0.2, 0.3) * inradius(d)``.
    u_floor : float, optional
        Points with ``|u(x)| < u_floor`` are skipped. Defaults to
        ``1e-6 * max |u|`` over the lattice.
    tol : float
        Dispersion threshold for the report verdict.

    Returns
    -------
    mu_hat : float
        Mean of the pointwise estimates.
    dispersion : float
        Their standard deviation.
    report : DetectionReport
        Records carry ``mu(x, r) - mu_hat`` as residual; ratios below one
        are counted as counterevidence, get no estimate and fail the report.
    """
    rule = _rule(rule, d.dim)
    pts = _lattice(d, spacing)
    if radii is None:
        radii = [f * inradius(d) for f in (0.1, 0.2, 0.3)]
    radii = [float(r) for r in radii]
    uvals = u(pts)
    if u_floor is None:
        u_floor = 1e-6 * float(np.max(np.abs(uvals)))
    dist = distance_to_boundary(d, pts)
    samples, below = [], []
    for r in radii:
        ok = (dist > r) & (np.abs(uvals) >= u_floor) & (np.abs(uvals) > 0)
        if not np.any(ok):
            continue
        means = spherical_mean(u, pts[ok], r, rule, domain=d)
        for p, mval, uval in zip(pts[ok], means, uvals[ok]):
            rho = mval / uval
            if abs(rho - 1) <= RATIO_ATOL:
                rho = 1.0
            if rho < 1:
                below.append({"point": p.tolist(), "r": r, "ratio": float(rho)})
                continue
            samples.append((p, r, invert_pan_coeff(d.dim, r, rho), float(rho)))
    if not samples:
        if below:
            raise NoRealMu(f"all {len(below)} usable ratios M/u are below one")
        raise ValueError("no usable samples for mu estimation")
    mus = np.array([s[2] for s in samples])
    mu_hat = float(np.mean(mus))
    dispersion = float(np.std(mus))
    recs = [Record(p.tolist(), [r], float(mh - mu_hat), tol) for p, r, mh, _ in samples]
    extra = {
        "mu_hat": mu_hat,
        "dispersion": dispersion,
        "n_samples": len(samples),
        "n_ratio_below_one": len(below),
        "counterevidence": below,
        "u_floor": u_floor,
        "radii_sampled": radii,
    }
    veto = f"{len(below)} ratios M/u below one admit no real mu" if below else None
    report = DetectionReport("estimate-mu", recs, tol, _confidence(u), _params(d, spacing, rule), extra, veto)
    return mu_hat, dispersion, report


def boundary_points(d: Domain, spacing: float) -> np.ndarray:
    """Deterministic points on the boundary of ``d`` at roughly the given spacing."""
    m = d.dim
    if isinstance(d, Box):
        out = []
        for i in range(m):
            for side in (d.lo[i], d.hi[i]):
                axes = []
                for j in range(m):
                    if j == i:
                        axes.append(np.array([side]))
                    else:
                        n = int(np.ceil((d.hi[j] - d.lo[j]) / spacing)) + 1
                        axes.append(np.linspace(d.lo[j], d.hi[j], n))
                out.append(np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, m))
        return np.concatenate(out)
    if isinstance(d, Ball):
        if m == 2:
            n = max(8, int(np.ceil(2 * np.pi * d.radius / spacing)))
            rule = sphere_rule(2, n, "circle-trapezoid")
        elif m == 3:
            n = max(4, int(np.ceil(np.pi * d.radius / spacing)))
            rule = sphere_rule(3, n, "product-gauss")
        else:
            rule = sphere_rule(m, 20000, "monte-carlo", seed=0)
        return d.center + d.radius * rule.nodes
    raise TypeError(f"unsupported domain {d!r}")


def max_principle_check(u, d: Domain, spacing: float | None = None, boundary_spacing: float | None = None):
    """Compare the maximum of ``u`` over interior lattice points with its boundary maximum.

    Returns ``(interior_max, boundary_max, margin)`` with
    ``margin = interior_max - boundary_max``.
    """
    pts = _lattice(d, spacing)
    spacing = spacing if spacing is not None else inradius(d) / 5
    bpts = boundary_points(d, boundary_spacing if boundary_spacing is not None else spacing / 2)
    interior_max = float(np.max(u(pts)))
    boundary_max = float(np.max(u(bpts)))
    return interior_max, boundary_max, interior_max - boundary_max


def max_principle_report(u, d: Domain, spacing: float | None = None, boundary_spacing: float | None = None,
                         tol: float = 0.0) -> DetectionReport:
    """Report form of :func:`max_principle_check`; passes when ``margin <= tol``."""
    imax, bmax, margin = max_principle_check(u, d, spacing, boundary_spacing)
    # a single signed record; only a positive margin is a violation
    rec = Record([], [], max(margin, 0.0), tol)
    extra = {"interior_max": imax, "boundary_max": bmax, "margin": margin}
    params = {"domain": str(d), "spacing": spacing, "boundary_spacing": boundary_spacing}
    return DetectionReport("max-principle", [rec], tol, _confidence(u), params, extra)
