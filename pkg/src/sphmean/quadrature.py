"""Normalized quadrature rules on the unit sphere S_1(0) in R^m.

Weights sum to one, so a rule directly evaluates the normalized surface
mean ``(1/omega_m) * int_{S_1(0)} g dS``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

KINDS = ("circle-trapezoid", "product-gauss", "monte-carlo")


def unit_sphere_area(m: int) -> float:
    """Surface area ``2 pi^(m/2) / Gamma(m/2)`` of the unit sphere in R^m."""
    from .specialfn import gamma_fn

    if int(m) != m or m < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {m}")
    return 2.0 * math.pi ** (m / 2) / gamma_fn(m / 2)


def _legendre(n: int, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Values of P_n and P_n' at ``x`` by the three-term recurrence."""
    p0, p1 = np.ones_like(x), x.copy()
    for k in range(2, n + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    if n == 0:
        return p0, np.zeros_like(x)
    return p1, n * (x * p1 - p0) / (x * x - 1)


def gauss_legendre(n: int, tol: float = 1e-15, maxiter: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.

    Nodes are returned in increasing order; weights sum to 2.
    """
    if n < 1:
        raise ValueError(f"number of nodes must be positive, got {n}")
    x = np.cos(np.pi * (np.arange(1, n + 1) - 0.25) / (n + 0.5))
    for _ in range(maxiter):
        p, dp = _legendre(n, x)
        dx = p / dp
        x = x - dx
        if np.max(np.abs(dx)) <= tol:
            break
    _, dp = _legendre(n, x)
    w = 2.0 / ((1 - x * x) * dp * dp)
    order = np.argsort(x)
    return x[order], w[order]


@dataclass(frozen=True)
class SphereQuadrature:
    """Nodes on S_1(0) with positive weights summing to one."""

    dim: int
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    level: int
    kind: str
    seed: int | None = None

    @property
    def size(self) -> int:
        return self.weights.size

    @property
    def weight_sum(self) -> float:
        # dividing by the computed sum makes the mean of a constant exact
        return float(np.sum(self.weights))

    def descriptor(self) -> dict:
        return {"kind": self.kind, "level": self.level, "seed": self.seed, "nodes": self.size}


def _circle_trapezoid(n: int) -> tuple[np.ndarray, np.ndarray]:
    theta = 2 * np.pi * np.arange(n) / n
    nodes = np.column_stack([np.cos(theta), np.sin(theta)])
    return nodes, np.full(n, 1.0 / n)


def _product_gauss(n: int) -> tuple[np.ndarray, np.ndarray]:
    t, wt = gauss_legendre(n)
    nphi = 2 * n
    phi = 2 * np.pi * np.arange(nphi) / nphi
    s = np.sqrt(1 - t * t)
    T, P = np.meshgrid(t, phi, indexing="ij")
    S, _ = np.meshgrid(s, phi, indexing="ij")
    nodes = np.stack([S * np.cos(P), S * np.sin(P), T], axis=-1).reshape(-1, 3)
    w = np.repeat(wt / (2.0 * nphi), nphi)
    return nodes, w


def _monte_carlo(m: int, n: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((n, m))
    nodes = g / np.linalg.norm(g, axis=1, keepdims=True)
    return nodes, np.full(n, 1.0 / n)


def default_kind(m: int) -> str:
    return {2: "circle-trapezoid", 3: "product-gauss"}.get(m, "monte-carlo")


def default_level(m: int, kind: str | None = None) -> int:
    kind = kind or default_kind(m)
    return {"circle-trapezoid": 64, "product-gauss": 16, "monte-carlo": 20000}[kind]


def sphere_rule(m: int, level: int | None = None, kind: str | None = None, seed: int | None = None) -> SphereQuadrature:
    """Build a normalized quadrature rule on the unit sphere in R^m.

    Parameters
    ----------
    m : int
        Ambient dimension.
    level : int, optional
        Resolution: number of angles (``circle-trapezoid``), number of
        Gauss-Legendre latitudes with ``2*level`` longitudes
        (``product-gauss``), or number of samples (``monte-carlo``).
        Defaults to 64, 16 and 20000 respectively.
    kind : str, optional
        One of ``circle-trapezoid`` (m=2 only), ``product-gauss`` (m=3 only)
        or ``monte-carlo`` (any m). Defaults by dimension.
    seed : int, optional
        Generator seed for ``monte-carlo``; ``None`` means 0.
    """
    if int(m) != m or m < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {m}")
    kind = kind or default_kind(m)
    if kind not in KINDS:
        raise ValueError(f"unknown quadrature kind {kind!r}; expected one of {KINDS}")
    level = default_level(m, kind) if level is None else int(level)
    if level < 1:
        raise ValueError(f"quadrature level must be positive, got {level}")
    if kind == "circle-trapezoid":
        if m != 2:
            raise ValueError("circle-trapezoid rules exist only for m=2")
        nodes, w = _circle_trapezoid(level)
        seed = None
    elif kind == "product-gauss":
        if m != 3:
            raise ValueError("product-gauss rules exist only for m=3")
        nodes, w = _product_gauss(level)
        seed = None
    else:
        seed = 0 if seed is None else int(seed)
        nodes, w = _monte_carlo(m, level, seed)
    nodes.setflags(write=False)
    w.setflags(write=False)
    return SphereQuadrature(m, nodes, w, level, kind, seed)


def surface_mean(rule: SphereQuadrature, g, vectorized: bool = False) -> float:
    """Weighted mean ``sum_i w_i g(y_i)`` over the rule's nodes.

    ``g`` is called once per node unless ``vectorized`` is set, in which case
    it receives the full ``(n, m)`` node array and must return ``n`` values.
    """
    if vectorized:
        values = np.asarray(g(rule.nodes), dtype=float)
    else:
        values = np.empty(rule.size)
        for i, y in enumerate(rule.nodes):
            try:
                values[i] = g(y)
            except Exception as exc:
                raise ValueError(f"evaluation failed at node {i} {y.tolist()}: {exc}") from exc
    # np.sum uses pairwise summation: fixed order, reproducible
    return float(np.sum(rule.weights * values)) / rule.weight_sum
