"""Gamma, modified Bessel I_nu, and the panharmonic mean coefficient.

For a solution of ``lap u = mu^2 u`` in R^m the spherical mean over a
sphere of radius r equals ``a(mu r) * u(center)`` with

    a(z) = Gamma(m/2) * I_nu(z) / (z/2)^nu,   nu = (m - 2)/2.

Everything here is evaluated by ascending series on ``0 <= z <= 60``.
"""

from __future__ import annotations

import math

# Lanczos coefficients, g = 7, n = 9
_LANCZOS_G = 7
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

Z_MAX = 60.0
_SERIES_RTOL = 1e-17


def gamma_fn(x: float) -> float:
    """Gamma function for ``x > 0`` by the Lanczos approximation."""
    if not x > 0:
        raise ValueError(f"gamma_fn requires a positive argument, got {x}")
    if x < 0.5:
        # reflection keeps the Lanczos sum in its accurate range
        return math.pi / (math.sin(math.pi * x) * gamma_fn(1 - x))
    x -= 1
    s = _LANCZOS[0]
    for i in range(1, _LANCZOS_G + 2):
        s += _LANCZOS[i] / (x + i)
    t = x + _LANCZOS_G + 0.5
    return math.sqrt(2 * math.pi) * t ** (x + 0.5) * math.exp(-t) * s


def _normalized_series(nu: float, z: float) -> float:
    """``sum_k (z^2/4)^k / (k! (nu+1)_k)``, i.e. ``Gamma(nu+1) I_nu(z) / (z/2)^nu``."""
    q = 0.25 * z * z
    term = 1.0
    total = 1.0
    k = 0
    while True:
        k += 1
        term *= q / (k * (nu + k))
        if term < _SERIES_RTOL * total:
            return total
        total += term


def _check_z(z: float) -> None:
    if z < 0:
        raise ValueError(f"argument must be nonnegative, got {z}")
    if z > Z_MAX:
        raise ValueError(f"argument {z} outside supported range [0, {Z_MAX}]")


def bessel_i(nu: float, z: float) -> float:
    """Modified Bessel function of the first kind ``I_nu(z)`` for ``nu >= 0``."""
    if nu < 0:
        raise ValueError(f"order must be nonnegative, got {nu}")
    _check_z(z)
    if nu == 0:
        return _normalized_series(0.0, z)
    if z == 0:
        return 0.0
    return (0.5 * z) ** nu / gamma_fn(nu + 1) * _normalized_series(nu, z)


def pan_coeff(m: int, mu: float, r: float) -> float:
    """Mean-value factor ``a(mu*r)`` for panharmonic functions in R^m.

    Equals ``I_0(mu r)`` for m=2 and ``sinh(mu r)/(mu r)`` for m=3; returns 1
    at ``r = 0``.
    """
    if int(m) != m or m < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {m}")
    if not mu > 0:
        raise ValueError(f"mu must be positive, got {mu}")
    if r < 0:
        raise ValueError(f"radius must be nonnegative, got {r}")
    z = mu * r
    _check_z(z)
    if m == 2:
        return bessel_i(0, z)
    # Gamma(m/2) I_nu(z) / (z/2)^nu with the (z/2)^nu factor cancelled analytically
    return _normalized_series((m - 2) / 2, z)


def invert_pan_coeff(m: int, r: float, rho: float, tol: float = 1e-10) -> float:
    """Solve ``pan_coeff(m, mu, r) = rho`` for ``mu >= 0``.

    The root in ``z = mu*r`` is bracketed by doubling from ``z = 1`` and
    refined by bisection until the bracket is narrower than ``tol``.
    """
    if not r > 0:
        raise ValueError(f"radius must be positive, got {r}")
    if not rho >= 1:
        raise ValueError(f"ratio {rho} < 1 has no real solution")
    if rho == 1:
        return 0.0

    def a(z):
        return pan_coeff(m, 1.0, z)

    lo, hi = 0.0, 1.0
    for _ in range(60):
        if a(hi) >= rho:
            break
        lo = hi
        hi = min(2 * hi, Z_MAX)
        if lo == Z_MAX:
            raise ValueError(f"ratio {rho} exceeds a(z) on the supported range z <= {Z_MAX}")
    else:
        raise ValueError(f"could not bracket ratio {rho} within 60 doublings")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if a(mid) < rho:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi) / r
