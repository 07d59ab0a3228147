import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from jwckit.core import DomainError
from jwckit.domains import (
    ball,
    boundary_distance,
    boundary_point,
    contains,
    directional_boundary_distance,
    disc,
    egg,
    halfplane,
    load_polynomial_domain,
    midpoint_convexity_violations,
    nearest_boundary_point,
    parse_domain,
    polynomial,
    ray_exit,
    ray_exits_batch,
    sample_interior,
    supporting_halfspace,
    tube,
)

ALL = [disc(), halfplane(), ball(2), ball(3), egg(2), egg(4), egg(6), tube()]


@pytest.mark.parametrize("D", ALL, ids=lambda D: D.name)
def test_fast_defining_function_matches_polynomial(D):
    Z = sample_interior(D, 200, seed=3, box=2.0)
    assert np.allclose(D.r(Z), D.poly(Z), atol=1e-12)


@pytest.mark.parametrize("D", ALL, ids=lambda D: D.name)
def test_midpoint_convexity(D):
    assert midpoint_convexity_violations(D, n=2000) == 0


def test_parse_domain_names():
    assert parse_domain("EGG:4").param == 4
    assert parse_domain("ball:3").dim == 3
    assert parse_domain("HALFPLANE").bounded is False
    for bad in ("EGG", "EGG:3", "SQUARE"):
        with pytest.raises(DomainError):
            parse_domain(bad)


def test_polynomial_domain_from_config(tmp_path):
    cfg = {"dim": 2, "name": "E4", "monomials": [
        {"coef": 1, "re": [2, 0], "im": [0, 0]}, {"coef": 1, "re": [0, 0], "im": [2, 0]},
        {"coef": 1, "re": [0, 4], "im": [0, 0]}, {"coef": 2, "re": [0, 2], "im": [0, 2]},
        {"coef": 1, "re": [0, 0], "im": [0, 4]}, {"coef": -1, "re": [0, 0], "im": [0, 0]}]}
    path = tmp_path / "e4.json"
    path.write_text(json.dumps(cfg))
    D = load_polynomial_domain(str(path))
    Z = sample_interior(egg(4), 100)
    assert np.allclose(D.r(Z), egg(4).r(Z))
    with pytest.raises(DomainError):
        load_polynomial_domain({"monomials": []})


def test_boundary_point_normals():
    bp = boundary_point(egg(4), [1.0, 0.0])
    assert np.allclose(bp.normal, [1, 0])
    bp = boundary_point(tube(), [0.0, 0.0])
    assert np.allclose(bp.normal, [1, 0])
    bp = boundary_point(ball(2), [0.6, 0.8j])
    assert np.allclose(bp.normal, [0.6, 0.8j])


def test_supporting_halfspace_is_negative_inside():
    D = egg(4)
    bp = boundary_point(D, [0.0, 1.0])
    ell = supporting_halfspace(D, bp)
    Z = sample_interior(D, 500)
    assert np.all(ell(Z).real < 0)


@given(st.floats(0.05, 0.95), st.floats(0, 2 * math.pi))
def test_ball_distances_are_exact(rho, t):
    D = ball(2)
    z = rho * np.array([math.cos(t), 1j * math.sin(t)])
    assert boundary_distance(D, z) == pytest.approx(1 - rho)
    q, d = nearest_boundary_point(D, z)
    assert d == pytest.approx(1 - rho, abs=1e-10)
    assert np.allclose(q, z / rho, atol=1e-9)


def test_egg_nearest_point_off_axis():
    D = egg(4)
    z = np.array([0.2, 0.5 + 0.1j])
    q, d = nearest_boundary_point(D, z)
    assert abs(D.r(q)) < 1e-9
    # the nearest point beats every sampled boundary point
    th = np.linspace(0, 2 * np.pi, 400)
    best = min(np.linalg.norm(z - boundary_point(D, z + ray_exit(D, z, u) * u).xi)
               for u in np.stack([np.cos(th), np.sin(th) * 1j], axis=1)[::20])
    assert d <= best + 1e-9


def test_ray_exit_and_batch_agree():
    D = egg(4)
    z = np.array([0.1, 0.2j])
    rng = np.random.default_rng(1)
    U = rng.normal(size=(20, 2)) + 1j * rng.normal(size=(20, 2))
    U /= np.linalg.norm(U, axis=1, keepdims=True)
    batch = ray_exits_batch(D, np.repeat(z[None, :], 20, axis=0), U, 4.0)
    single = np.array([ray_exit(D, z, u) for u in U])
    assert np.allclose(batch, single, rtol=1e-9)


def test_ray_exit_unbounded_returns_none():
    assert ray_exit(halfplane(), [-1.0], [-1.0]) is None or ray_exit(halfplane(), [-1.0], [-1.0]) >= 999


@pytest.mark.parametrize("z,v,expected", [
    ([0.5], [1j], math.sqrt(0.75) * 0 + 0.5),
    ([0.0, 0.0], [1, 0], 1.0),
    ([0.3, 0.0], [0, 1], math.sqrt(0.91)),
])
def test_directional_distance_in_balls(z, v, expected):
    D = disc() if len(z) == 1 else ball(2)
    assert directional_boundary_distance(D, z, v, refine=True) == pytest.approx(expected, rel=1e-7)


def test_directional_distance_in_egg_along_axis():
    # r(0, zeta) = |zeta|^4 - 1 on the z_1-axis
    assert directional_boundary_distance(egg(4), [0, 0], [0, 1], refine=True) == pytest.approx(1.0, rel=1e-7)


def test_refined_radius_keeps_circle_inside():
    D = egg(6)
    z = np.array([0.4 + 0.1j, 0.3])
    u = np.array([0.6, 0.8j])
    rho = directional_boundary_distance(D, z, u, refine=True)
    ring = np.exp(2j * np.pi * np.arange(8192) / 8192)
    assert np.all(D.r(z + rho * ring[:, None] * u) < 0)


def test_points_outside_rejected():
    with pytest.raises(DomainError):
        boundary_distance(disc(), [1.5])
    assert not contains(tube(), [0.1, 0.5])
    assert contains(tube(), [-0.5, 0.5j])


def test_custom_polynomial_is_usable():
    D = polynomial(1, [{"coef": 1, "re": [4], "im": [0]}, {"coef": 1, "re": [0], "im": [2]},
                       {"coef": -1, "re": [0], "im": [0]}])
    assert contains(D, [0.5 + 0.5j])
    assert midpoint_convexity_violations(D, n=500) == 0
