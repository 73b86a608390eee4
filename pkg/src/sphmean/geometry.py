"""Bounded domains in R^m and admissibility of spheres and radius triples.

Only balls and axis-aligned boxes are supported. Both have an exact signed
distance to the boundary, so erosion and admissibility are evaluated in
closed form rather than by sampling.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np


def as_point(x, m: int | None = None) -> np.ndarray:
    """Coerce ``x`` to a float vector, checking dimension and finiteness."""
    p = np.asarray(x, dtype=float)
    if p.ndim != 1:
        raise ValueError(f"a point must be a 1-d coordinate vector, got shape {p.shape}")
    if p.size < 2:
        raise ValueError(f"dimension must be at least 2, got {p.size}")
    if not np.all(np.isfinite(p)):
        raise ValueError(f"point has non-finite coordinates: {p}")
    if m is not None and p.size != m:
        raise ValueError(f"dimension mismatch: point has {p.size} coordinates, domain has {m}")
    return p


def _as_points(x, m: int) -> np.ndarray:
    p = np.asarray(x, dtype=float)
    if p.shape[-1] != m:
        raise ValueError(f"dimension mismatch: points have {p.shape[-1]} coordinates, domain has {m}")
    return p


@dataclass(frozen=True)
class Ball:
    """Open ball ``{y : |y - center| < radius}``."""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        object.__setattr__(self, "radius", float(self.radius))
        if not self.radius > 0:
            raise ValueError(f"ball radius must be positive, got {self.radius}")

    @property
    def dim(self) -> int:
        return self.center.size

    def signed_distance(self, x) -> np.ndarray:
        p = _as_points(x, self.dim)
        return self.radius - np.linalg.norm(p - self.center, axis=-1)

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        return self.center - self.radius, self.center + self.radius

    def inradius(self) -> float:
        return self.radius

    def __str__(self):
        return "ball " + " ".join(repr(float(c)) for c in self.center) + f" {self.radius!r}"


@dataclass(frozen=True)
class Box:
    """Open axis-aligned box ``prod_i (lo_i, hi_i)``."""

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo = as_point(self.lo)
        hi = as_point(self.hi, lo.size)
        if not np.all(lo < hi):
            raise ValueError(f"box requires lo < hi on every axis, got lo={lo}, hi={hi}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def dim(self) -> int:
        return self.lo.size

    def signed_distance(self, x) -> np.ndarray:
        p = _as_points(x, self.dim)
        center = 0.5 * (self.lo + self.hi)
        half = 0.5 * (self.hi - self.lo)
        q = np.abs(p - center) - half
        outside = np.linalg.norm(np.maximum(q, 0.0), axis=-1)
        inside = np.minimum(np.max(q, axis=-1), 0.0)
        return -(outside + inside)

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        return self.lo.copy(), self.hi.copy()

    def inradius(self) -> float:
        return float(np.min(self.hi - self.lo) / 2)

    def __str__(self):
        return "box " + " ".join(repr(float(c)) for c in np.concatenate([self.lo, self.hi]))


Domain = Union[Ball, Box]


@dataclass(frozen=True)
class ErodedDomain:
    """Points of ``base`` whose closed ball of radius ``offset`` stays inside ``base``."""

    base: Domain
    offset: float

    def __post_init__(self):
        if self.offset < 0:
            raise ValueError(f"erosion offset must be nonnegative, got {self.offset}")

    @property
    def dim(self) -> int:
        return self.base.dim

    def signed_distance(self, x) -> np.ndarray:
        return self.base.signed_distance(x) - self.offset

    def contains(self, x) -> np.ndarray:
        return self.signed_distance(x) > 0

    def is_empty(self) -> bool:
        return self.offset >= self.base.inradius()

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        lo, hi = self.base.bounds()
        return lo + self.offset, hi - self.offset

    def inradius(self) -> float:
        return max(self.base.inradius() - self.offset, 0.0)


def distance_to_boundary(d: Domain | ErodedDomain, x):
    """Signed Euclidean distance from ``x`` to the boundary of ``d``.

    Positive inside, negative outside. ``x`` may be a single point or an
    ``(n, m)`` array, in which case an array of distances is returned.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        as_point(x, d.dim)
        return float(d.signed_distance(x))
    return d.signed_distance(x)


def contains(d: Domain | ErodedDomain, x):
    dist = distance_to_boundary(d, x)
    return dist > 0


def is_admissible_sphere(d: Domain, x, r: float) -> bool:
    """True iff the closed ball of radius ``r`` about ``x`` lies inside ``d``."""
    if not r > 0:
        raise ValueError(f"sphere radius must be positive, got {r}")
    return distance_to_boundary(d, x) > r


def is_admissible_triple(d: Domain, x, r1: float, r2: float) -> bool:
    """True iff every ``x + r1*y + r2*z`` with ``|y|, |z| <= 1`` lies inside ``d``."""
    if r1 < 0 or r2 < 0:
        raise ValueError(f"radii must be nonnegative, got {r1}, {r2}")
    return distance_to_boundary(d, x) > r1 + r2


def erode(d: Domain, r: float) -> ErodedDomain:
    return ErodedDomain(d, float(r))


def inradius(d: Domain | ErodedDomain) -> float:
    return d.inradius()


def lattice_axes(lo, hi, spacing: float) -> list[np.ndarray]:
    """Per-axis coordinates ``c + k*spacing`` within ``[lo, hi]``, ``c`` the midpoint."""
    if not spacing > 0:
        raise ValueError(f"spacing must be positive, got {spacing}")
    axes = []
    for a, b in zip(lo, hi):
        if not b > a:
            axes.append(np.empty(0))
            continue
        c = 0.5 * (a + b)
        k = int(np.floor(0.5 * (b - a) / spacing * (1 + 1e-12)))
        axes.append(c + spacing * np.arange(-k, k + 1))
    return axes


def sample_interior(d: Domain | ErodedDomain, spacing: float) -> np.ndarray:
    """Interior points of a lattice centred in the domain's bounding box.

    Returns an ``(n, m)`` array in row-major lattice order (last axis
    fastest); ``n`` is zero if no lattice point is interior. Nodes within
    roundoff (``1e-9 * spacing``) of the boundary count as boundary nodes.
    """
    if isinstance(d, ErodedDomain) and d.is_empty():
        return np.empty((0, d.dim))
    lo, hi = d.bounds()
    axes = lattice_axes(lo, hi, spacing)
    if any(a.size == 0 for a in axes):
        return np.empty((0, d.dim))
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d.dim)
    return grid[d.signed_distance(grid) > 1e-9 * spacing]


def parse_domain(text: str) -> Domain:
    """Parse ``"ball cx cy [cz ...] R"`` or ``"box lo1 ... lom hi1 ... him"``."""
    tokens = text.split()
    if not tokens:
        raise ValueError("empty domain specification")
    kind, rest = tokens[0].lower(), tokens[1:]
    try:
        values = [float(t) for t in rest]
    except ValueError as exc:
        raise ValueError(f"bad number in domain specification {text!r}") from exc
    if kind == "ball":
        if len(values) < 3:
            raise ValueError(f"ball needs at least 2 center coordinates and a radius: {text!r}")
        return Ball(np.array(values[:-1]), values[-1])
    if kind == "box":
        if len(values) < 4 or len(values) % 2:
            raise ValueError(f"box needs 2m coordinates with m >= 2: {text!r}")
        m = len(values) // 2
        return Box(np.array(values[:m]), np.array(values[m:]))
    raise ValueError(f"unknown domain kind {kind!r}; expected 'ball' or 'box'")
