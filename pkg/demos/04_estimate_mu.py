"""Estimating the screening constant mu from samples of a field.

For each lattice point and radius the ratio M/u is inverted through the
coefficient a. A panharmonic field gives the same mu everywhere; anything
else scatters.
"""

# %%
import numpy as np

from sphmean import detectors as det
from sphmean.fields import make_field
from sphmean.geometry import Ball
from sphmean.quadrature import sphere_rule

ball = Ball([0, 0, 0], 1)
rule = sphere_rule(3, 16)

# %%
for spec in ["exp-plane:2.5:1,1,0", "cosh:0.8", "product-pan:1.2:2", "harmonic:saddle3", "gaussian:0.5"]:
    u = make_field(spec, 3)
    try:
        mu_hat, disp, rep = det.estimate_mu(u, ball, 0.4, rule=rule)
        print(f"{spec:22s} {rep.verdict} mu_hat={mu_hat:.8f} dispersion={disp:.1e} below_one={rep.extra['n_ratio_below_one']}")
    except det.NoRealMu as exc:
        print(f"{spec:22s} no real mu: {exc}")

# %% with the estimate in hand, the panharmonic detector confirms it
u = make_field("exp-plane:2.5:1,1,0", 3)
mu_hat, _, _ = det.estimate_mu(u, ball, 0.4, rule=rule)
rep = det.panharmonic_test(u, ball, mu_hat, 0.4, rule=rule)
print(rep.verdict, np.round(rep.max_abs_residual, 12))
