"""The mean-value coefficient of panharmonic functions.

Solutions of lap u = mu^2 u average to a(mu r) u(x) over a sphere. In 3D
a(z) = sinh z / z and in 2D a(z) = I_0(z). Since a is increasing, one
measured ratio M/u pins down mu.
"""

# %%
import math

import numpy as np

from sphmean.fields import make_field
from sphmean.means import spherical_mean
from sphmean.quadrature import sphere_rule
from sphmean.specialfn import bessel_i, invert_pan_coeff, pan_coeff

# %% closed forms
for z in (0.5, 2.0, 8.0):
    print(f"z={z:4.1f}  a3={pan_coeff(3, z, 1.0):.12g}  sinh/z={math.sinh(z) / z:.12g}"
          f"  a2={pan_coeff(2, z, 1.0):.12g}  I0={bessel_i(0, z):.12g}")

# %% higher dimensions follow the same series
for m in (2, 3, 4, 6):
    print(f"m={m}: a(1) = {pan_coeff(m, 1.0, 1.0):.12f}")

# %% measured ratio vs. coefficient
mu, r = 1.7, 0.3
for m, rule in ((2, sphere_rule(2, 64)), (3, sphere_rule(3, 16))):
    u = make_field(f"exp-plane:{mu}:e1", m)
    x = np.full(m, 0.1)
    rho = spherical_mean(u, x, r, rule) / u(x)
    print(f"m={m}: M/u = {rho:.14f}  a(mu r) = {pan_coeff(m, mu, r):.14f}  "
          f"recovered mu = {invert_pan_coeff(m, r, rho):.10f}")
