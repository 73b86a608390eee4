"""Spherical means of harmonic and non-harmonic fields.

A harmonic function equals its own average over any sphere inside its
domain. We check that on a few catalog fields, then watch |x|^2 fail it by
exactly r^2.
"""

# %%
import numpy as np

from sphmean.fields import make_field
from sphmean.geometry import Ball
from sphmean.means import iterated_mean, spherical_mean
from sphmean.quadrature import sphere_rule

ball = Ball([0.0, 0.0], 1.0)
rule = sphere_rule(2, 64, "circle-trapezoid")
x = np.array([0.2, -0.1])

# %% harmonic fields reproduce u(x)
for spec in ["harmonic:x1x2", "harmonic:exp-cos", "harmonic:re_z5"]:
    u = make_field(spec, 2)
    for r in (0.1, 0.4, 0.7):
        print(f"{spec:18s} r={r:.1f}  M - u = {spherical_mean(u, x, r, rule, ball) - u(x):+.2e}")

# %% |x|^2 picks up r^2
q = make_field("quadratic", 2)
for r in (0.1, 0.4, 0.7):
    print(f"quadratic          r={r:.1f}  M - u = {spherical_mean(q, x, r, rule, ball) - q(x):.6f}  (r^2 = {r * r:.6f})")

# %% iterated means are symmetric in the two radii
g = make_field("gaussian:0.4", 2)
a = iterated_mean(g, x, 0.3, 0.2, rule)
b = iterated_mean(g, x, 0.2, 0.3, rule)
print(f"I(x,0.3,0.2) = {a:.15f}\nI(x,0.2,0.3) = {b:.15f}")

# %% in 3D the product Gauss rule does the same job
rule3 = sphere_rule(3, 16, "product-gauss")
u3 = make_field("harmonic:x1x2x3", 3)
x3 = np.array([0.1, 0.2, -0.3])
print("3D harmonic M - u:", spherical_mean(u3, x3, 0.5, rule3) - u3(x3))
