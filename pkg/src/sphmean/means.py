"""Spherical means M(x, r, u), iterated means I(x, r1, r2, u) and mean fields."""

from __future__ import annotations

import numpy as np

from .fields import GridField, ScalarField
from .geometry import Domain, distance_to_boundary, erode, lattice_axes
from .quadrature import SphereQuadrature, sphere_rule

# cap on simultaneous field evaluations per chunk
_CHUNK = 1 << 21


def _domain_of(u, domain):
    return domain if domain is not None else getattr(u, "domain", None)


def _check_inside(domain, x, reach, what):
    if domain is None:
        return
    dist = np.atleast_1d(distance_to_boundary(domain, np.atleast_2d(x)))
    reach = np.broadcast_to(reach, dist.shape)
    bad = ~(dist > reach) & (reach > 0)
    if np.any(bad):
        i = int(np.argmax(bad))
        raise ValueError(f"inadmissible {what} at x={np.atleast_2d(x)[i].tolist()}: "
                         f"distance to boundary {dist[i]:.6g} <= {reach[i]:.6g}")


def _means(u, centers: np.ndarray, r: np.ndarray, rule: SphereQuadrature) -> np.ndarray:
    """Vectorized ``sum_i w_i u(c + r y_i)`` for centers ``(n, m)`` and radii ``(n,)``."""
    n = centers.shape[0]
    out = np.empty(n)
    step = max(1, _CHUNK // max(rule.size, 1))
    wsum = rule.weight_sum
    for s in range(0, n, step):
        c = centers[s : s + step]
        rr = r[s : s + step]
        pts = c[:, None, :] + rr[:, None, None] * rule.nodes[None, :, :]
        vals = np.asarray(u(pts), dtype=float)
        out[s : s + step] = np.sum(vals * rule.weights, axis=1) / wsum
    # r = 0 returns u(x) exactly
    zero = r == 0
    if np.any(zero):
        out[zero] = np.asarray(u(centers[zero]), dtype=float)
    return out


def spherical_mean(u, x, r, rule: SphereQuadrature | None = None, domain: Domain | None = None):
    """Spherical mean ``M(x, r, u)`` over the sphere of radius ``r`` about ``x``.

    Parameters
    ----------
    u : callable
        Vectorized field (a :class:`ScalarField` or any callable on ``(..., m)`` arrays).
    x : array_like
        Center ``(m,)`` or stack of centers ``(n, m)``.
    r : float or array_like
        Radius, scalar or one per center. ``r = 0`` returns ``u(x)`` exactly.
    rule : SphereQuadrature, optional
        Normalized sphere rule; defaults to ``sphere_rule(m)``.
    domain : Ball or Box, optional
        If given (or attached to ``u``), every sphere must be admissible.

    Returns
    -------
    float or ndarray
    """
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    centers = np.atleast_2d(x)
    m = centers.shape[1]
    rule = rule or sphere_rule(m)
    if rule.dim != m:
        raise ValueError(f"rule dimension {rule.dim} does not match point dimension {m}")
    r = np.broadcast_to(np.asarray(r, dtype=float), centers.shape[:1]).copy()
    if np.any(r < 0):
        raise ValueError("radius must be nonnegative")
    _check_inside(_domain_of(u, domain), centers, r, "sphere")
    out = _means(u, centers, r, rule)
    return float(out[0]) if single else out


def iterated_mean(u, x, r1, r2, rule: SphereQuadrature | None = None, method: str = "double-sum",
                  domain: Domain | None = None):
    """Iterated spherical mean ``I(x, r1, r2, u) = M(x, r1, M(., r2, u))``.

    ``nested`` averages the inner means over the outer sphere;
    ``double-sum`` evaluates ``sum_ij w_i w_j u(x + r1 y_i + r2 y_j)``.
    Both layers share one rule, so the two methods agree to roundoff and the
    double sum is symmetric in ``r1`` and ``r2``.
    """
    if method not in ("nested", "double-sum"):
        raise ValueError(f"unknown method {method!r}")
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    centers = np.atleast_2d(x)
    m = centers.shape[1]
    rule = rule or sphere_rule(m)
    if rule.dim != m:
        raise ValueError(f"rule dimension {rule.dim} does not match point dimension {m}")
    r1 = np.broadcast_to(np.asarray(r1, dtype=float), centers.shape[:1])
    r2 = np.broadcast_to(np.asarray(r2, dtype=float), centers.shape[:1])
    if np.any(r1 < 0) or np.any(r2 < 0):
        raise ValueError("radii must be nonnegative")
    _check_inside(_domain_of(u, domain), centers, r1 + r2, "triple")

    y, w = rule.nodes, rule.weights
    wsum = rule.weight_sum
    q = rule.size
    out = np.empty(len(centers))
    for k, c in enumerate(centers):
        a, b = r1[k], r2[k]
        if a == 0 and b == 0:
            out[k] = float(np.asarray(u(c)))
        elif a == 0 or b == 0:
            out[k] = _means(u, c[None], np.array([a + b]), rule)[0]
        elif method == "nested":
            outer = c + a * y
            out[k] = np.sum(w * _means(u, outer, np.full(q, b), rule)) / wsum
        else:
            step = max(1, _CHUNK // q)
            total = np.empty(q)
            for s in range(0, q, step):
                pts = c + a * y[s : s + step, None, :] + b * y[None, :, :]
                total[s : s + step] = np.sum(np.asarray(u(pts)) * w, axis=1) / wsum
            out[k] = np.sum(w * total) / wsum
    return float(out[0]) if single else out


def mean_field(u, d: Domain, r: float, spacing: float, rule: SphereQuadrature | None = None) -> GridField:
    """Sample ``M(., r, u)`` on a lattice over the eroded domain ``D_r``.

    The lattice is the centred lattice of ``D_r``'s bounding box without
    nodes on its faces; slots outside ``D_r`` hold NaN.
    """
    if not r > 0:
        raise ValueError(f"radius must be positive, got {r}")
    dr = erode(d, r)
    if dr.is_empty():
        raise ValueError(f"eroded domain is empty: r={r} >= inradius {d.inradius()}")
    lo, hi = dr.bounds()
    # nodes on the bounding faces lie on the boundary of D_r, never admissible
    eps = 1e-9 * spacing
    axes = [a[(a > l + eps) & (a < h - eps)] for a, l, h in zip(lattice_axes(lo, hi, spacing), lo, hi)]
    if any(a.size < 2 for a in axes):
        raise ValueError(f"spacing {spacing} does not resolve the eroded domain (need 2 nodes per axis)")
    pts = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
    flat = pts.reshape(-1, d.dim)
    inside = dr.contains(flat)
    values = np.full(flat.shape[0], np.nan)
    rule = rule or sphere_rule(d.dim)
    values[inside] = spherical_mean(u, flat[inside], r, rule, domain=d)
    lo_node = np.array([a[0] for a in axes])
    hi_node = np.array([a[-1] for a in axes])
    return GridField(lo_node, hi_node, values.reshape(pts.shape[:-1]))


def mean_field_csv(grid: GridField) -> str:
    """CSV rows ``x1,...,xm,value`` for the present samples of a mean field."""
    m = grid.dim
    header = ",".join([f"x{i + 1}" for i in range(m)] + ["value"])
    rows = [header]
    for p, v in zip(grid.points(), grid.values.ravel()):
        if np.isfinite(v):
            rows.append(",".join(f"{c:.17g}" for c in (*p, v)))
    return "\n".join(rows) + "\n"


def mean_callable(u, r: float, rule: SphereQuadrature, d: Domain | None = None) -> ScalarField:
    """The field ``x -> M(x, r, u)``, defined on ``D_r`` when ``d`` is given."""
    m = rule.dim

    def ev(p):
        p = np.asarray(p, dtype=float)
        flat = p.reshape(-1, m)
        return _means(u, flat, np.full(flat.shape[0], float(r)), rule).reshape(p.shape[:-1])

    dom = erode(d, r) if d is not None else None
    return ScalarField(m, ev, f"M(.,{r!r},{getattr(u, 'label', 'u')})", domain=dom)
