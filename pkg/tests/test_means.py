import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sphmean.fields import make_field, read_grid_field
from sphmean.geometry import Ball, Box
from sphmean.means import iterated_mean, mean_callable, mean_field, mean_field_csv, spherical_mean
from sphmean.quadrature import sphere_rule
from sphmean.specialfn import pan_coeff

R2 = sphere_rule(2, 64, "circle-trapezoid")
R3 = sphere_rule(3, 16, "product-gauss")
D2 = Ball([0, 0], 1)


def test_constant_mean():
    u = make_field("constant:5", 2)
    assert spherical_mean(u, [0.3, -0.2], 0.4, R2) == 5.0


def test_harmonic_mean_equals_center_value():
    u = make_field("harmonic:x1x2", 2)
    assert spherical_mean(u, [1, 2], 0.3, R2) == pytest.approx(2.0, abs=1e-12)


def test_quadratic_mean_expansion():
    # oracle: M(x, r, |.|^2) = |x|^2 + r^2 (expand |x + r y|^2, average y and |y|^2)
    u = make_field("quadratic", 3)
    assert spherical_mean(u, [0, 0, 0], 0.5, R3) == pytest.approx(0.25, abs=1e-15)
    hi = sphere_rule(3, 32, "product-gauss")
    x = np.array([0.1, -0.4, 0.3])
    assert spherical_mean(u, x, 0.35, hi) == pytest.approx(x @ x + 0.35**2, abs=1e-15)


def test_zero_radius_returns_value_exactly():
    u = make_field("gaussian:0.3", 2)
    x = [0.123, -0.456]
    assert spherical_mean(u, x, 0.0, R2) == u(x)


def test_inadmissible_sphere_rejected():
    u = make_field("harmonic:x1x2", 2)
    with pytest.raises(ValueError, match="inadmissible"):
        spherical_mean(u, [0.5, 0], 0.5, R2, domain=D2)
    with pytest.raises(ValueError, match="inadmissible"):
        iterated_mean(u, [0.5, 0], 0.3, 0.3, R2, domain=D2)


def test_vectorized_centres_and_radii():
    u = make_field("harmonic:exp-cos", 2)
    pts = np.array([[0.1, 0.1], [-0.2, 0.3]])
    r = np.array([0.1, 0.5])
    out = spherical_mean(u, pts, r, R2)
    assert out.shape == (2,)
    assert out[1] == spherical_mean(u, pts[1], 0.5, R2)


def test_iterated_degenerate_cases():
    u = make_field("gaussian:0.5", 2)
    x = [0.1, 0.2]
    assert iterated_mean(u, x, 0, 0, R2) == u(x)
    assert iterated_mean(u, x, 0, 0.3, R2) == spherical_mean(u, x, 0.3, R2)
    assert iterated_mean(u, x, 0.3, 0, R2) == spherical_mean(u, x, 0.3, R2)


def test_iterated_harmonic_proposition():
    u = make_field("harmonic:x1x2", 2)
    for method in ("nested", "double-sum"):
        assert iterated_mean(u, [1, 1], 0.2, 0.3, R2, method) == pytest.approx(1.0, abs=1e-12)


def test_iterated_panharmonic_product_of_coefficients():
    # oracle: apply the panharmonic mean factor twice
    u = make_field("exp-plane:1:e1", 3)
    val = iterated_mean(u, [0, 0, 0], 0.2, 0.3, R3)
    assert val == pytest.approx(pan_coeff(3, 1, 0.2) * pan_coeff(3, 1, 0.3), rel=1e-13)


def test_iterated_quadratic_expansion():
    # oracle: I(x, r1, r2, |.|^2) = |x|^2 + r1^2 + r2^2
    u = make_field("quadratic", 3)
    x = np.array([0.2, 0.1, -0.3])
    assert iterated_mean(u, x, 0.2, 0.25, R3) == pytest.approx(x @ x + 0.04 + 0.0625, abs=1e-14)


FIELDS = ["harmonic:exp-cos", "gaussian:0.4", "exp-plane:1.3:e2", "quadratic", "harmonic:re_z5"]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(FIELDS), st.floats(-0.3, 0.3), st.floats(-0.3, 0.3), st.floats(0, 0.3), st.floats(0, 0.3))
def test_iterated_symmetry_and_method_agreement(spec, a, b, r1, r2):
    u = make_field(spec, 2)
    x = [a, b]
    ds = iterated_mean(u, x, r1, r2, R2, "double-sum")
    sw = iterated_mean(u, x, r2, r1, R2, "double-sum")
    ne = iterated_mean(u, x, r1, r2, R2, "nested")
    # relative to the summands: the mean itself can vanish (re z^5 at 0)
    reach = np.asarray(x) + (r1 + r2) * R2.nodes
    scale = max(abs(ds), float(np.max(np.abs(u(reach)))), 1e-300)
    assert abs(ds - sw) <= 1e-13 * scale
    assert abs(ds - ne) <= 1e-12 * scale


def test_iterated_symmetry_3d():
    u = make_field("gaussian:0.4", 3)
    x = [0.1, -0.2, 0.05]
    a = iterated_mean(u, x, 0.1, 0.3, R3)
    b = iterated_mean(u, x, 0.3, 0.1, R3)
    assert abs(a - b) <= 1e-13 * abs(a)


@settings(max_examples=30, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3))
def test_mean_linear_in_field(alpha, beta):
    g = make_field("gaussian:0.4", 2)
    h = make_field("harmonic:exp-cos", 2)
    combo = type(g)(2, lambda p: alpha * g(p) + beta * h(p), "combo")
    x, r = [0.1, 0.2], 0.35
    lhs = spherical_mean(combo, x, r, R2)
    rhs = alpha * spherical_mean(g, x, r, R2) + beta * spherical_mean(h, x, r, R2)
    assert lhs == pytest.approx(rhs, abs=1e-13)


def test_mean_of_one_is_exactly_one():
    for rule in (R2, sphere_rule(2, 7, "circle-trapezoid")):
        assert spherical_mean(make_field("constant:1", 2), [0.2, 0.1], 0.3, rule) == 1.0


def test_mean_converges_to_value_as_radius_shrinks():
    u = make_field("gaussian:0.3", 2)
    x = [0.1, 0.05]
    d1 = abs(spherical_mean(u, x, 1e-2, R2) - u(x))
    d2 = abs(spherical_mean(u, x, 1e-3, R2) - u(x))
    assert d2 < d1 < 1e-3


@pytest.mark.parametrize("spec", ["harmonic:x1x2", "harmonic:diffsq", "harmonic:exp-cos", "harmonic:re_z7", "harmonic:im_z3"])
def test_trapezoid_harmonic_spectral_accuracy(spec):
    u = make_field(spec, 2)
    rng = np.random.default_rng(5)
    pts = rng.uniform(-0.5, 0.5, (50, 2))
    r = rng.uniform(0.01, 0.45, 50)
    assert np.max(np.abs(spherical_mean(u, pts, r, R2) - u(pts))) <= 1e-12


@pytest.mark.parametrize("spec,m", [("exp-plane:2:e1", 2), ("exp-plane:0.5:e2", 3), ("product-pan:1:2", 2), ("cosh:1.5", 3)])
def test_panharmonic_mean_factor(spec, m):
    u = make_field(spec, m)
    rule = R2 if m == 2 else R3
    rng = np.random.default_rng(6)
    pts = rng.uniform(-0.4, 0.4, (30, m))
    for r in (0.05, 0.3, 0.5):
        got = spherical_mean(u, pts, r, rule)
        assert np.allclose(got, pan_coeff(m, u.mu, r) * u(pts), rtol=0, atol=1e-12)


def test_mean_field_values():
    d = Box([-1, -1], [1, 1])
    mf = mean_field(make_field("harmonic:diffsq", 2), d, 0.3, 0.1, R2)
    present = np.isfinite(mf.values.ravel())
    pts = mf.points()[present]
    np.testing.assert_allclose(mf.values.ravel()[present], pts[:, 0] ** 2 - pts[:, 1] ** 2, atol=1e-10)

    mq = mean_field(make_field("quadratic", 2), D2, 0.3, 0.1, R2)
    present = np.isfinite(mq.values.ravel())
    pts = mq.points()[present]
    np.testing.assert_allclose(mq.values.ravel()[present], np.sum(pts**2, axis=1) + 0.09, atol=1e-14)
    # the disc lattice leaves corner slots absent
    assert not np.all(present)

    mc = mean_field(make_field("constant:2.5", 2), D2, 0.3, 0.1, R2)
    assert np.all(mc.values[np.isfinite(mc.values)] == 2.5)


def test_mean_field_errors():
    u = make_field("quadratic", 2)
    with pytest.raises(ValueError, match="empty"):
        mean_field(u, D2, 1.0, 0.1, R2)
    with pytest.raises(ValueError, match="resolve"):
        mean_field(u, D2, 0.5, 2.0, R2)


def test_mean_field_serialization(tmp_path):
    from sphmean.fields import write_grid_field

    mf = mean_field(make_field("quadratic", 2), D2, 0.3, 0.2, R2)
    path = tmp_path / "m.gf"
    write_grid_field(mf, path)
    back = read_grid_field(path)
    np.testing.assert_array_equal(np.isnan(back.values), np.isnan(mf.values))
    np.testing.assert_array_equal(back.values[np.isfinite(back.values)], mf.values[np.isfinite(mf.values)])
    csv = mean_field_csv(mf).splitlines()
    assert csv[0] == "x1,x2,value"
    assert len(csv) - 1 == np.isfinite(mf.values).sum()


def test_mean_callable_domain():
    u = make_field("quadratic", 2)
    f = mean_callable(u, 0.3, R2, D2)
    assert f([0.2, 0.1]) == pytest.approx(0.05 + 0.09, abs=1e-15)
    assert f.domain.offset == 0.3
