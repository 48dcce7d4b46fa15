import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from metrics_lab.errors import DomainMembership, InvalidParameter, NonConvexDomain, UnsupportedDimension
from metrics_lab.geometry import (
    Domain,
    PlaneFrame,
    ahlfors_bracket,
    as_point,
    boundary_cost_infimum,
    boundary_distance,
    nearest_boundary_points,
    plane_coordinates,
)

# 10^6-point scan of |x-z|+|z-y| on the circle, locally rescanned (tests/oracles.py)
SUM_INFIMUM_ORACLE = 1.1089384816473498

coord = st.floats(-0.69, 0.69)
disk_point = st.tuples(coord, coord).map(lambda p: complex(*p))


def test_boundary_distance_examples():
    assert boundary_distance(Domain.ball(2), 0.3 + 0.4j) == pytest.approx(0.5, abs=1e-15)
    assert boundary_distance(Domain.half_space(2), 2 + 3j) == 3.0
    assert boundary_distance(Domain.sector(math.pi / 2), 1 + 1j) == pytest.approx(1.0, abs=1e-15)


def test_boundary_distance_rejects_outside_points():
    with pytest.raises(DomainMembership):
        boundary_distance(Domain.ball(2), 1.0 + 0j)
    with pytest.raises(DomainMembership):
        boundary_distance(Domain.half_space(3), [0.0, 0.0, -1.0])
    with pytest.raises(DomainMembership):
        boundary_distance(Domain.sector(math.pi / 2), -1 + 1j)


def test_nearest_boundary_points_examples():
    (foot,) = nearest_boundary_points(Domain.ball(2), 0.5 + 0j)
    np.testing.assert_allclose(foot, [1.0, 0.0])
    feet = nearest_boundary_points(Domain.sector(math.pi / 2), 1 + 1j)
    assert sorted(tuple(np.round(f, 12)) for f in feet) == [(0.0, 1.0), (1.0, 0.0)]
    (foot,) = nearest_boundary_points(Domain.half_space(2), 2 + 3j)
    np.testing.assert_allclose(foot, [2.0, 0.0])


def test_nearest_boundary_points_needs_convexity():
    with pytest.raises(NonConvexDomain):
        nearest_boundary_points(Domain.sector(1.5 * math.pi), 1 + 1j)


@given(st.floats(0.05, 3.0), st.floats(0.01, 0.99))
def test_nearest_feet_realise_the_boundary_distance(theta, frac):
    dom = Domain.sector(theta)
    z = 0.7 * complex(math.cos(frac * theta), math.sin(frac * theta))
    d = boundary_distance(dom, z)
    assert d > 0
    for foot in nearest_boundary_points(dom, z):
        assert abs(z - complex(*foot)) == pytest.approx(d, abs=1e-12)


@given(disk_point)
def test_ball_feet_realise_the_boundary_distance(z):
    if z == 0:
        return
    d = boundary_distance(Domain.ball(2), z)
    (foot,) = nearest_boundary_points(Domain.ball(2), z)
    assert abs(z - complex(*foot)) == pytest.approx(d, abs=1e-12)


def test_ahlfors_bracket_examples():
    assert ahlfors_bracket(0j, 0.3 + 0.2j) == pytest.approx(1.0, abs=1e-15)
    assert ahlfors_bracket(0.5 + 0j, 0.5 + 0j) == pytest.approx(0.75, abs=1e-15)


def test_ahlfors_bracket_matches_the_hyperbolic_distance():
    x, y = 0.1 + 0.3j, 0.3 + 0.5j
    rho = math.acosh(1 + 2 * abs(x - y) ** 2 / ((1 - abs(x) ** 2) * (1 - abs(y) ** 2)))
    assert abs(x - y) / ahlfors_bracket(x, y) == pytest.approx(math.tanh(rho / 2), abs=1e-14)


@given(disk_point, disk_point)
def test_ahlfors_bracket_dominates_both_terms(x, y):
    a = ahlfors_bracket(x, y)
    assert a >= abs(x - y) - 1e-15
    assert a >= math.sqrt((1 - abs(x) ** 2) * (1 - abs(y) ** 2)) - 1e-15


def test_boundary_infimum_examples():
    val, arg = boundary_cost_infimum(Domain.ball(2), lambda z: np.abs(z) + np.abs(z - 0.5))
    assert val == pytest.approx(1.5, abs=1e-12)
    np.testing.assert_allclose(arg, [1.0, 0.0], atol=1e-6)
    val, arg = boundary_cost_infimum(Domain.half_space(2), lambda z: 2 * np.abs(1j - z), scale=1.0)
    assert val == pytest.approx(2.0, abs=1e-12)
    np.testing.assert_allclose(arg, [0.0, 0.0], atol=1e-6)


def test_boundary_infimum_against_dense_scan():
    x, y = 0.1 + 0.3j, 0.3 + 0.5j
    val, _ = boundary_cost_infimum(Domain.ball(2), lambda z: np.abs(x - z) + np.abs(z - y))
    assert abs(val - SUM_INFIMUM_ORACLE) < 1e-6
    assert val <= SUM_INFIMUM_ORACLE + 1e-9


def test_boundary_infimum_includes_the_sector_vertex():
    # both points hug the vertex from different rays: the corner is the minimiser
    x, y = 0.2 * np.exp(0.1j), 0.2 * np.exp(1.4j)
    val, arg = boundary_cost_infimum(Domain.sector(1.5), lambda z: np.abs(x - z) + np.abs(z - y))
    assert val <= abs(x) + abs(y) + 1e-12


def test_boundary_infimum_is_planar_only():
    with pytest.raises(UnsupportedDimension):
        boundary_cost_infimum(Domain.ball(3), lambda z: np.abs(z))


@given(disk_point, disk_point)
def test_boundary_infimum_is_symmetric(x, y):
    ball = Domain.ball(2)
    a, _ = boundary_cost_infimum(ball, lambda z: np.abs(x - z) + np.abs(z - y))
    b, _ = boundary_cost_infimum(ball, lambda z: np.abs(y - z) + np.abs(z - x))
    assert a == pytest.approx(b, abs=1e-12)


@pytest.mark.parametrize("text, expected", [
    ("ball2", Domain.ball(2)),
    ("half3", Domain.half_space(3)),
    ("sector:1.5", Domain.sector(1.5)),
])
def test_domain_parse(text, expected):
    assert Domain.parse(text) == expected


@pytest.mark.parametrize("kwargs", [
    dict(kind="sector", n=3, theta=1.0),
    dict(kind="sector", n=2, theta=0.0),
    dict(kind="sector", n=2, theta=2 * math.pi),
    dict(kind="ball", n=1),
    dict(kind="ball", n=2, theta=1.0),
    dict(kind="annulus", n=2),
])
def test_domain_validation(kwargs):
    with pytest.raises(InvalidParameter):
        Domain(**kwargs)


def test_domain_parse_rejects_garbage():
    with pytest.raises(InvalidParameter):
        Domain.parse("torus")
    with pytest.raises(InvalidParameter):
        Domain.parse("sector:abc")


def test_membership_rules():
    assert Domain.half_space(3).contains([5, -2, 1e-9])
    assert not Domain.half_space(3).contains([0, 0, 0])
    assert Domain.sector(math.pi / 2).contains(1 + 1j)
    assert not Domain.sector(math.pi / 2).contains(1 + 0j)
    assert not Domain.sector(math.pi / 2).contains(0j)
    assert Domain.sector(1.5 * math.pi).contains(-1 - 0.1j)


def test_points_must_be_finite_and_at_least_planar():
    with pytest.raises(InvalidParameter):
        as_point([0.1])
    with pytest.raises(InvalidParameter):
        as_point([0.1, float("nan")])
    with pytest.raises(InvalidParameter):
        as_point([0.1, 0.2], n=3)


@given(st.lists(st.floats(-0.5, 0.5), min_size=6, max_size=6))
def test_plane_frame_is_an_isometry(c):
    x, y = np.array(c[:3]), np.array(c[3:])
    frame = PlaneFrame.through(Domain.ball(3), x, y)
    zx, zy = frame.project(x), frame.project(y)
    assert abs(zx - zy) == pytest.approx(np.linalg.norm(x - y), abs=1e-12)
    assert abs(zx) == pytest.approx(np.linalg.norm(x), abs=1e-12)
    assert abs(zy) == pytest.approx(np.linalg.norm(y), abs=1e-12)
    np.testing.assert_allclose(frame.embed(zy), y, atol=1e-12)


def test_vectorised_plane_coordinates_agree_with_frames():
    rng = np.random.default_rng(3)
    X, Y = rng.uniform(-0.5, 0.5, (50, 4)), rng.uniform(-0.5, 0.5, (50, 4))
    zx, zy = plane_coordinates(Domain.ball(4), X, Y)
    np.testing.assert_allclose(np.abs(zx - zy), np.linalg.norm(X - Y, axis=1), atol=1e-12)
    np.testing.assert_allclose(np.abs(zy), np.linalg.norm(Y, axis=1), atol=1e-12)
    Y[:, -1] = np.abs(Y[:, -1]) + 0.1
    X[:, -1] = np.abs(X[:, -1]) + 0.1
    zx, zy = plane_coordinates(Domain.half_space(4), X, Y)
    np.testing.assert_allclose(zx.imag, X[:, -1])
    np.testing.assert_allclose(np.abs(zx - zy), np.linalg.norm(X - Y, axis=1), atol=1e-12)
