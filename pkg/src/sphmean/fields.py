"""Scalar fields under test: an analytic catalog, gridded data, PDE residuals.

All evaluators are vectorized: they accept a single point of shape ``(m,)``
or a stack of points ``(..., m)`` and return a float or an array of shape
``(...)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from .geometry import Box, distance_to_boundary

HARMONIC = "harmonic"
PANHARMONIC = "panharmonic"
OTHER = "other"
UNKNOWN = "unknown"


@dataclass(frozen=True, eq=False)
class ScalarField:
    """A real field on R^m (or on ``domain`` when one is attached).

    ``ground_truth`` is one of ``harmonic``, ``panharmonic``, ``other`` or
    ``unknown``; ``mu`` is set for panharmonic fields.
    """

    dim: int
    evaluator: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    label: str
    ground_truth: str = UNKNOWN
    mu: float | None = None
    domain: Box | None = None

    def __call__(self, x):
        p = np.asarray(x, dtype=float)
        if p.shape[-1] != self.dim:
            raise ValueError(f"dimension mismatch: field is {self.dim}-d, got points of shape {p.shape}")
        values = self.evaluator(p)
        return float(values) if p.ndim == 1 else values

    @property
    def is_grid(self) -> bool:
        return self.label == "grid"


# --- analytic catalog -------------------------------------------------------


def _re_im_power(k: int, imag: bool):
    def f(p):
        z = (p[..., 0] + 1j * p[..., 1]) ** k
        return z.imag if imag else z.real

    return f


def _fundamental(m: int):
    def f(p):
        rr = np.linalg.norm(p, axis=-1)
        if np.any(rr == 0):
            raise ValueError("fundamental solution is singular at the origin")
        return np.log(rr) if m == 2 else rr ** (2.0 - m)

    return f


def _direction(token: str, m: int) -> np.ndarray:
    if token.startswith("e") and token[1:].isdigit():
        i = int(token[1:])
        if not 1 <= i <= m:
            raise ValueError(f"direction {token} out of range for m={m}")
        d = np.zeros(m)
        d[i - 1] = 1.0
        return d
    d = np.array([float(t) for t in token.split(",")])
    if d.size != m or not np.linalg.norm(d) > 0:
        raise ValueError(f"direction {token!r} must be a nonzero vector with {m} components")
    return d / np.linalg.norm(d)


def _need_dims(name: str, m: int, lo: int, hi: int | None = None):
    if m < lo or (hi is not None and m > hi):
        rng = f"m={lo}" if hi == lo else f"m>={lo}"
        raise ValueError(f"field {name!r} requires {rng}, got m={m}")


HARMONIC_POLYS = ("x1x2", "x1x2x3", "diffsq", "saddle3", "exp-cos", "re_zK", "im_zK")


def _harmonic(name: str, m: int):
    if name == "x1x2":
        return lambda p: p[..., 0] * p[..., 1]
    if name == "x1x2x3":
        _need_dims(name, m, 3)
        return lambda p: p[..., 0] * p[..., 1] * p[..., 2]
    if name == "diffsq":
        return lambda p: p[..., 0] ** 2 - p[..., 1] ** 2
    if name == "saddle3":
        _need_dims(name, m, 3)
        return lambda p: p[..., 0] ** 2 + p[..., 1] ** 2 - 2 * p[..., 2] ** 2
    if name == "exp-cos":
        return lambda p: np.exp(p[..., 0]) * np.cos(p[..., 1])
    if name[:4] in ("re_z", "im_z") and name[4:].isdigit():
        _need_dims(name, m, 2, 2)
        return _re_im_power(int(name[4:]), name.startswith("im"))
    raise ValueError(f"unknown harmonic polynomial {name!r}; choose from {HARMONIC_POLYS}")


def make_field(spec: str, m: int) -> ScalarField:
    """Build a catalog field from a ``name[:param[:param]]`` identifier.

    ========================  ==========================================  ===========
    identifier                field                                       ground truth
    ========================  ==========================================  ===========
    ``constant:c``            c                                           harmonic
    ``coordinate:i``          x_i                                         harmonic
    ``harmonic:NAME``         x1x2, x1x2x3, diffsq (x1^2-x2^2),           harmonic
                              saddle3 (x1^2+x2^2-2x3^2), exp-cos
                              (e^x1 cos x2), re_zK / im_zK (m=2)
    ``fundamental``           log|x| (m=2), |x|^(2-m) (m>=3)              harmonic
    ``exp-plane:mu:d``        exp(mu d.x), d = ``e<i>`` or ``a,b,..``     panharmonic
    ``product-pan:mu[:b]``    exp(sqrt(mu^2+b^2) x1) cos(b x2)            panharmonic
    ``cosh:mu``               cosh(mu x1)                                 panharmonic
    ``quadratic``             |x|^2                                       other
    ``gaussian:sigma``        exp(-|x|^2 / (2 sigma^2))                   other
    ========================  ==========================================  ===========
    """
    if int(m) != m or m < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {m}")
    parts = spec.strip().split(":")
    name, args = parts[0].lower(), parts[1:]

    def arg(i, default=None, conv=float):
        if i < len(args) and args[i] != "":
            try:
                return conv(args[i])
            except ValueError as exc:
                raise ValueError(f"bad parameter {args[i]!r} in field {spec!r}") from exc
        if default is None:
            raise ValueError(f"field {spec!r} is missing parameter {i + 1}")
        return default

    if name == "constant":
        c = arg(0, 1.0)
        return ScalarField(m, lambda p: np.full(p.shape[:-1], c), spec, HARMONIC)
    if name == "coordinate":
        i = arg(0, conv=int)
        if not 1 <= i <= m:
            raise ValueError(f"coordinate index {i} out of range for m={m}")
        return ScalarField(m, lambda p: p[..., i - 1].copy(), spec, HARMONIC)
    if name == "harmonic":
        return ScalarField(m, _harmonic(arg(0, conv=str), m), spec, HARMONIC)
    if name == "fundamental":
        return ScalarField(m, _fundamental(m), spec, HARMONIC)
    if name == "exp-plane":
        mu = arg(0)
        d = _direction(arg(1, "e1", str), m)
        return ScalarField(m, lambda p: np.exp(mu * (p @ d)), spec, PANHARMONIC, mu=abs(mu))
    if name == "product-pan":
        mu, b = arg(0), arg(1, 1.0)
        _need_dims(name, m, 2)
        k = math.hypot(mu, b)
        return ScalarField(m, lambda p: np.exp(k * p[..., 0]) * np.cos(b * p[..., 1]), spec, PANHARMONIC, mu=abs(mu))
    if name == "cosh":
        mu = arg(0)
        return ScalarField(m, lambda p: np.cosh(mu * p[..., 0]), spec, PANHARMONIC, mu=abs(mu))
    if name == "quadratic":
        return ScalarField(m, lambda p: np.sum(p * p, axis=-1), spec, OTHER)
    if name == "gaussian":
        s = arg(0, 0.3)
        if not s > 0:
            raise ValueError(f"gaussian width must be positive, got {s}")
        return ScalarField(m, lambda p: np.exp(-np.sum(p * p, axis=-1) / (2 * s * s)), spec, OTHER)
    raise ValueError(f"unknown field identifier {name!r}")


# --- gridded fields ---------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GridField:
    """Samples on a regular lattice spanning ``[lo, hi]`` with multilinear interpolation.

    ``values`` has shape ``counts``; NaN marks absent samples.
    """

    lo: np.ndarray
    hi: np.ndarray
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        lo, hi = np.asarray(self.lo, float), np.asarray(self.hi, float)
        values = np.asarray(self.values, float)
        if lo.shape != hi.shape or lo.ndim != 1 or values.ndim != lo.size:
            raise ValueError("grid bounds and value array disagree on dimension")
        if any(n < 2 for n in values.shape):
            raise ValueError(f"grid needs at least 2 nodes per axis, got {values.shape}")
        if not np.all(lo < hi):
            raise ValueError("grid bounding box requires lo < hi on every axis")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "values", values)
        axes = [np.linspace(a, b, n) for a, b, n in zip(lo, hi, values.shape)]
        object.__setattr__(self, "_interp", RegularGridInterpolator(axes, values, method="linear", bounds_error=True))

    @property
    def dim(self) -> int:
        return self.lo.size

    @property
    def counts(self) -> tuple[int, ...]:
        return self.values.shape

    def axes(self) -> list[np.ndarray]:
        return [np.linspace(a, b, n) for a, b, n in zip(self.lo, self.hi, self.counts)]

    def points(self) -> np.ndarray:
        """Lattice nodes in row-major order, shape ``(prod(counts), m)``."""
        return np.stack(np.meshgrid(*self.axes(), indexing="ij"), axis=-1).reshape(-1, self.dim)

    def __call__(self, x):
        p = np.asarray(x, dtype=float)
        flat = p.reshape(-1, self.dim)
        outside = np.any((flat < self.lo) | (flat > self.hi), axis=1)
        if np.any(outside):
            bad = flat[np.argmax(outside)]
            raise ValueError(f"grid evaluation outside bounding box at {bad.tolist()}")
        out = self._interp(flat)
        absent = np.isnan(out)
        if np.any(absent):
            bad = flat[np.argmax(absent)]
            raise ValueError(f"grid evaluation at {bad.tolist()} uses an absent (nan) sample")
        return out.reshape(p.shape[:-1])

    def to_field(self) -> ScalarField:
        return ScalarField(self.dim, self, "grid", UNKNOWN, domain=Box(self.lo, self.hi))


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def format_grid_field(grid: GridField) -> str:
    """Text of ``grid`` in the ``gridfield v1`` format."""
    lines = [
        "gridfield v1",
        str(grid.dim),
        " ".join(str(n) for n in grid.counts),
        " ".join(_fmt(v) for v in np.concatenate([grid.lo, grid.hi])),
    ]
    flat = grid.values.reshape(-1, grid.counts[-1])
    lines += [" ".join(_fmt(v) for v in row) for row in flat]
    return "\n".join(lines) + "\n"


def write_grid_field(grid: GridField, path) -> None:
    Path(path).write_text(format_grid_field(grid))


def read_grid_field(path) -> GridField:
    """Parse a ``gridfield v1`` file.

    Payload values are row-major with the last axis fastest; ``nan`` marks
    an absent sample.
    """
    lines = Path(path).read_text().splitlines()
    if len(lines) < 4 or lines[0].strip() != "gridfield v1":
        raise ValueError(f"{path}: missing 'gridfield v1' header")
    try:
        m = int(lines[1])
        counts = [int(t) for t in lines[2].split()]
        box = [float(t) for t in lines[3].split()]
        payload = np.array([float(t) for line in lines[4:] for t in line.split()])
    except ValueError as exc:
        raise ValueError(f"{path}: malformed header or payload ({exc})") from exc
    if m < 2 or len(counts) != m or len(box) != 2 * m:
        raise ValueError(f"{path}: header inconsistent with dimension {m}")
    if payload.size != math.prod(counts):
        raise ValueError(f"{path}: expected {math.prod(counts)} values, found {payload.size}")
    if np.any(np.isinf(payload)):
        raise ValueError(f"{path}: infinite sample values")
    return GridField(np.array(box[:m]), np.array(box[m:]), payload.reshape(counts))


def load_grid_field(path, interpolation: str = "multilinear") -> ScalarField:
    if interpolation != "multilinear":
        raise ValueError(f"unsupported interpolation {interpolation!r}")
    return read_grid_field(path).to_field()


def sample_to_grid(u: ScalarField, lo, hi, counts) -> GridField:
    """Sample a field on a regular lattice (handy for building grid inputs)."""
    axes = [np.linspace(a, b, n) for a, b, n in zip(lo, hi, counts)]
    pts = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
    return GridField(np.asarray(lo, float), np.asarray(hi, float), u(pts))


# --- residuals --------------------------------------------------------------


def stencil(x, h: float) -> np.ndarray:
    """Points ``x``, ``x + h e_i``, ``x - h e_i`` stacked as ``(..., 2m+1, m)``."""
    x = np.asarray(x, dtype=float)
    m = x.shape[-1]
    offsets = np.concatenate([np.zeros((1, m)), h * np.eye(m), -h * np.eye(m)])
    return x[..., None, :] + offsets


def laplacian_from_stencil(values: np.ndarray, h: float, m: int) -> np.ndarray:
    """Central-difference Laplacian from values laid out as in :func:`stencil`."""
    c = values[..., 0]
    plus = values[..., 1 : m + 1]
    minus = values[..., m + 1 :]
    return np.sum((plus - c[..., None]) + (minus - c[..., None]), axis=-1) / (h * h)


def helmholtz_residual(u, x, h: float, mu: float = 0.0):
    """Discrete ``lap u(x) - mu^2 u(x)`` with the 2m+1 point central stencil.

    ``u`` is any vectorized callable; if it carries a ``domain``, the whole
    stencil must lie strictly inside it. ``mu = 0`` gives the Laplace residual.
    """
    if not h > 0:
        raise ValueError(f"step must be positive, got {h}")
    if mu < 0:
        raise ValueError(f"mu must be nonnegative, got {mu}")
    x = np.asarray(x, dtype=float)
    m = x.shape[-1]
    pts = stencil(x, h)
    domain = getattr(u, "domain", None)
    if domain is not None:
        dist = distance_to_boundary(domain, pts.reshape(-1, m))
        if np.any(np.asarray(dist) <= 0):
            raise ValueError(f"finite-difference stencil with h={h} leaves the field's domain")
    values = np.asarray(u(pts), dtype=float)
    res = laplacian_from_stencil(values, h, m) - mu * mu * values[..., 0]
    return float(res) if x.ndim == 1 else res
