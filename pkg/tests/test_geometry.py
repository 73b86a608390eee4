import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sphmean.geometry import (
    Ball,
    Box,
    distance_to_boundary,
    erode,
    inradius,
    is_admissible_sphere,
    is_admissible_triple,
    parse_domain,
    sample_interior,
)

UNIT_BALL = Ball([0, 0], 1)


def test_distance_to_boundary_examples():
    assert distance_to_boundary(UNIT_BALL, [0, 0]) == 1.0
    assert distance_to_boundary(Box([0, 0], [2, 2]), [1, 0.25]) == 0.25
    assert distance_to_boundary(UNIT_BALL, [2, 0]) == -1.0


def test_box_exterior_distance_is_euclidean():
    assert distance_to_boundary(Box([0, 0], [1, 1]), [2, 2]) == pytest.approx(-np.sqrt(2))


def test_dimension_mismatch_rejected():
    with pytest.raises(ValueError, match="dimension mismatch"):
        distance_to_boundary(UNIT_BALL, [0, 0, 0])


def test_invalid_shapes_rejected():
    with pytest.raises(ValueError):
        Ball([0, 0], 0)
    with pytest.raises(ValueError):
        Box([0, 1], [1, 1])
    with pytest.raises(ValueError):
        Ball([0.0], 1)


def test_admissible_sphere():
    assert is_admissible_sphere(UNIT_BALL, [0, 0], 0.5)
    assert not is_admissible_sphere(UNIT_BALL, [0, 0], 1.0)
    assert is_admissible_sphere(Box([0, 0], [1, 1]), [0.5, 0.5], 0.4)
    with pytest.raises(ValueError):
        is_admissible_sphere(UNIT_BALL, [0, 0], 0.0)


def test_admissible_triple():
    assert is_admissible_triple(UNIT_BALL, [0, 0], 0.4, 0.5)
    assert not is_admissible_triple(UNIT_BALL, [0, 0], 0.6, 0.5)
    assert is_admissible_triple(Box([0, 0, 0], [1, 2, 3]), [0.5, 0.5, 0.5], 0, 0)


def test_erode_ball_matches_smaller_ball():
    e = erode(UNIT_BALL, 0.3)
    pts = np.random.default_rng(1).uniform(-1, 1, (500, 2))
    np.testing.assert_array_equal(e.contains(pts), np.linalg.norm(pts, axis=1) < 0.7)


def test_erode_box_to_inradius_is_empty():
    e = erode(Box([0, 0], [1, 1]), 0.5)
    assert e.is_empty()
    assert len(sample_interior(e, 0.01)) == 0


def test_erode_zero_is_identity():
    d = Box([0, 0], [2, 1])
    pts = np.random.default_rng(2).uniform(-0.5, 2.5, (500, 2))
    np.testing.assert_array_equal(erode(d, 0).contains(pts), distance_to_boundary(d, pts) > 0)


def test_inradius():
    assert inradius(Ball([0, 0], 2)) == 2.0
    assert inradius(Box([0, 0], [4, 1])) == 0.5
    assert inradius(Box([0, 0, 0], [1, 1, 1])) == 0.5


def test_sample_interior():
    pts = sample_interior(Box([0, 0], [1, 1]), 0.5)
    assert any(np.allclose(p, [0.5, 0.5]) for p in pts)
    pts = sample_interior(UNIT_BALL, 0.5)
    assert len(pts) > 0
    assert np.all(np.linalg.norm(pts, axis=1) < 1)


def test_sample_interior_is_deterministic():
    d = Ball([0.1, -0.2, 0.3], 0.9)
    np.testing.assert_array_equal(sample_interior(d, 0.13), sample_interior(d, 0.13))


def test_parse_domain():
    b = parse_domain("ball 0 0 1")
    assert isinstance(b, Ball) and b.dim == 2 and b.radius == 1
    x = parse_domain("box 0 0 0 1 2 3")
    assert isinstance(x, Box) and x.dim == 3
    np.testing.assert_array_equal(x.hi, [1, 2, 3])
    for bad in ["", "cube 0 0 1", "ball 0 1", "box 0 0 1", "ball a b c"]:
        with pytest.raises(ValueError):
            parse_domain(bad)


domains = st.sampled_from([Ball([0, 0], 1), Box([-1, -1], [1, 1]), Ball([0.2, 0, -0.1], 0.8), Box([0, 0, 0], [1, 2, 1])])


@settings(max_examples=200, deadline=None)
@given(domains, st.data())
def test_triple_matches_eroded_membership(d, data):
    x = np.array(data.draw(st.lists(st.floats(-1.2, 2.2), min_size=d.dim, max_size=d.dim)))
    r1 = data.draw(st.floats(0, 1))
    r2 = data.draw(st.floats(0, 1))
    assert bool(erode(d, r1 + r2).contains(x)) == is_admissible_triple(d, x, r1, r2)


@settings(max_examples=200, deadline=None)
@given(domains, st.data())
def test_sphere_admissibility_is_monotone(d, data):
    x = np.array(data.draw(st.lists(st.floats(-1, 1), min_size=d.dim, max_size=d.dim)))
    r = data.draw(st.floats(1e-6, 1))
    s = data.draw(st.floats(1e-3, 1))
    if is_admissible_sphere(d, x, r):
        assert is_admissible_sphere(d, x, r * s)


@settings(max_examples=100, deadline=None)
@given(domains, st.floats(0.05, 0.4))
def test_sampled_points_belong_to_domain(d, spacing):
    for e in (d, erode(d, 0.2)):
        pts = sample_interior(e, spacing)
        if len(pts):
            assert np.all(distance_to_boundary(e, pts) > 0)


@settings(max_examples=100, deadline=None)
@given(domains, st.floats(0, 0.5), st.data())
def test_eroded_distance_is_shifted(d, r, data):
    x = np.array(data.draw(st.lists(st.floats(-1, 1), min_size=d.dim, max_size=d.dim)))
    if distance_to_boundary(d, x) > 0:
        assert distance_to_boundary(erode(d, r), x) == pytest.approx(distance_to_boundary(d, x) - r, abs=1e-15)


def test_sample_interior_drops_roundoff_boundary_nodes():
    # 0.5 +- 5 * 0.04 lands within ~1e-17 of the faces in floating point
    pts = sample_interior(Box([0.3, 0.3], [0.7, 0.7]), 0.04)
    d = Box([0.3, 0.3], [0.7, 0.7]).signed_distance(pts)
    assert d.min() > 0.039 and len(pts) == 81
