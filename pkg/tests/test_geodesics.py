import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from jwckit.core import DomainError, poincare_distance_disc
from jwckit.domains import ball, disc, egg, halfplane
from jwckit.geodesics import (
    DiscAutomorphism,
    ball_geodesic,
    egg_geodesic,
    geodesic_ray_distance,
    halfplane_normal_derivative,
    horofunction,
    in_geodesic_region,
    in_horosphere,
    in_kregion,
    normal_derivative_limit,
    poisson_kernel,
    poisson_kernel_ball,
    poisson_kernel_egg,
    solve_egg_geodesic,
)
from jwckit.kobayashi import egg_axis_distance


@pytest.mark.parametrize("m", [2, 4, 6])
@pytest.mark.parametrize("a", [0.0, 0.5, 0.5 + 0.3j, 0.9j])
def test_egg_geodesics_stay_inside_and_land_at_the_pole(m, a):
    phi = egg_geodesic(m, a)
    assert phi.check_inside(egg(m))
    assert np.allclose(phi(np.array(1.0 + 0j)), [1, 0])


@pytest.mark.parametrize("m,a,expected", [(4, 0.0, 1.0), (4, 0.5, 1 / 1.0625), (2, 0.5, 0.8), (6, 0.9j, 1 / (1 + 0.9**6))])
def test_normal_derivative_limits(m, a, expected):
    phi = egg_geodesic(m, a)
    assert normal_derivative_limit(phi, [1, 0]).value == pytest.approx(expected, rel=1e-9)
    assert halfplane_normal_derivative(phi, [1, 0]).value == pytest.approx(2 * expected, rel=1e-9)


def test_axis_geodesic_is_isometric():
    phi = egg_geodesic(4, 0.0)
    for t in (0.3, 0.7, 0.99):
        assert egg_axis_distance(4, 0.0, phi(np.array(t + 0j))) == pytest.approx(poincare_distance_disc(0, t))


def test_odd_egg_rejected():
    with pytest.raises(DomainError):
        egg_geodesic(3)


@given(st.floats(-0.9, 0.9), st.floats(-0.4, 0.4))
def test_automorphism_fixes_one(x, y):
    tau = DiscAutomorphism(complex(x, y))
    assert abs(tau(0.0) - complex(x, y)) < 1e-12
    assert abs(tau(1.0) - 1) < 1e-12
    assert tau.derivative(np.array(1.0 + 0j)) == pytest.approx(tau.angular_derivative, rel=1e-9)
    s = complex(x, y)
    assert tau.angular_derivative == pytest.approx(abs(1 - s) ** 2 / (1 - abs(s) ** 2))


def test_ball_geodesic_passes_through_point():
    xi = np.array([0.6, 0.8j])
    z = np.array([0.1, -0.2 + 0.1j])
    phi = ball_geodesic(xi, z)
    assert np.allclose(phi(0.0), z)
    assert np.allclose(phi(np.array(1.0 + 0j)), xi)
    assert phi.check_inside(ball(2))


@pytest.mark.parametrize("z", [[0.3, 0.2], [0.0, 0.8], [-0.5 + 0.2j, 0.4j]])
def test_egg_kernel_matches_closed_form(z):
    val = poisson_kernel(egg(4), [1, 0], z)
    assert val.value == pytest.approx(poisson_kernel_egg(4, np.array(z)), rel=1e-9)
    assert val.spread < 1e-8
    assert val.value < 0


def test_egg_kernel_at_rotated_pole():
    z = np.array([0.3j, 0.2])
    val = poisson_kernel(egg(4), [1j, 0], z)
    assert val.value == pytest.approx(poisson_kernel_egg(4, np.array([0.3, 0.2])), rel=1e-9)


def test_geodesic_solver_finds_the_closed_form_parameters():
    z = np.array([0.2 + 0.1j, 0.3])
    a, sigma, res = solve_egg_geodesic(4, z)[0]
    phi = egg_geodesic(4, a)
    assert np.allclose(phi(np.array(sigma)), z, atol=1e-9)


def test_ball_kernel():
    xi = np.array([1.0, 0.0])
    z = np.array([0.2, 0.3j])
    val = poisson_kernel(ball(2), xi, z)
    assert val.value == pytest.approx(poisson_kernel_ball(xi, z), rel=1e-10)
    assert poisson_kernel_ball([1.0], [0.0]) == -1.0


def test_kernel_unavailable_for_halfplane():
    with pytest.raises(DomainError):
        poisson_kernel(halfplane(), [0.0], [-1.0])


@pytest.mark.parametrize("w", [0.5, -0.5j, 0.3 + 0.6j])
def test_disc_horofunction(w):
    est = horofunction(disc(), [1.0], [0.0], [w])
    assert est.value == pytest.approx(math.log(abs(1 - w) ** 2 / (1 - abs(w) ** 2)), abs=1e-7)
    assert est.trace


def test_horofunction_vectorized():
    W = np.array([[0.1], [0.2j], [-0.4]])
    est = horofunction(disc(), [1.0], [0.0], W)
    assert est.value.shape == (3,)


def test_region_membership():
    D = disc()
    assert in_horosphere(D, [1.0], [0.0], 1.0, [0.5])
    assert not in_horosphere(D, [1.0], [0.0], 1.0, [-0.5])
    assert in_kregion(D, [1.0], [0.0], 2.0, [0.9])
    with pytest.raises(DomainError):
        in_kregion(D, [1.0], [0.0], 1.0, [0.5])


def test_geodesic_region():
    D = egg(4)
    phi = egg_geodesic(4, 0.0)
    assert geodesic_ray_distance(D, phi, [0.5, 0.0]) == pytest.approx(0.0, abs=1e-9)
    m = in_geodesic_region(D, phi, 0.5, [0.5, 0.3])
    assert m.value > 0
