"""Running the detector battery on a harmonic and a non-harmonic field.

Each detector samples a lattice in the domain, computes a residual per
point and compares its largest value against a tolerance.
"""

# %%
from sphmean import detectors as det
from sphmean.fields import make_field
from sphmean.geometry import Ball, Box
from sphmean.quadrature import sphere_rule

rule = sphere_rule(2, 64)
ball = Ball([0, 0], 1)


def summary(rep):
    return f"{rep.test:22s} {rep.verdict:4s} max|res|={rep.max_abs_residual:.2e} thr={rep.threshold:.1e} n={len(rep.records)}"


# %%
for spec in ["harmonic:re_z3", "quadratic", "gaussian:0.3"]:
    u = make_field(spec, 2)
    print(f"--- {spec}")
    print(summary(det.kellogg_test(u, ball, 0.2, rule=rule)))
    print(summary(det.iterated_test(u, ball, 0.25, rule=rule)))
    print(summary(det.mean_harmonicity_test(u, ball, [0.1, 0.2], 0.2, rule=rule)))
    print(summary(det.max_principle_report(u, Box([-1, -1], [1, 1]), 0.1)))

# %% reports serialize for later inspection
rep = det.kellogg_test(make_field("quadratic", 2), ball, 0.5, rule=rule)
print(rep.to_csv())
