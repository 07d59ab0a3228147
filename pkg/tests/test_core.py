import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from jwckit.core import (
    DomainError,
    cayley,
    cayley_inverse,
    disc_distance_from_origin,
    halfplane_distance,
    halfplane_metric,
    halton,
    hermitian,
    poincare_distance_disc,
    poincare_metric_disc,
    sphere_points,
)


def disc_points():
    r = st.floats(0.0, 0.999)
    t = st.floats(0.0, 2 * math.pi)
    return st.builds(lambda a, b: a * complex(math.cos(b), math.sin(b)), r, t)


def test_distance_from_origin_closed_form():
    for rho in (0.1, 0.5, 0.9, 0.999):
        assert poincare_distance_disc(0, rho) == pytest.approx(math.log((1 + rho) / (1 - rho)), rel=1e-13)


def test_distance_near_boundary_keeps_precision():
    gap = 1e-14
    val = disc_distance_from_origin(1 - gap, gap)
    assert val == pytest.approx(math.log(2 - gap) - math.log(gap), rel=1e-14)


def test_metric_normalization():
    assert poincare_metric_disc(0, 1) == pytest.approx(2.0)
    assert poincare_metric_disc(0.5, 1j) == pytest.approx(2 / 0.75)


def test_halfplane_metric_at_minus_one():
    # the Cayley map sends 0 to -1 with derivative 2, so kappa = 1 there
    assert halfplane_metric(-1.0, 1.0) == pytest.approx(1.0)


@given(disc_points(), disc_points())
def test_cayley_is_an_isometry(z1, z2):
    d = poincare_distance_disc(z1, z2)
    assert halfplane_distance(cayley(z1), cayley(z2)) == pytest.approx(d, rel=1e-8, abs=1e-9)


@given(disc_points())
def test_cayley_round_trip(z):
    assert abs(cayley_inverse(cayley(z)) - z) < 1e-9


@given(disc_points(), disc_points(), disc_points())
def test_triangle_inequality(a, b, c):
    assert poincare_distance_disc(a, c) <= poincare_distance_disc(a, b) + poincare_distance_disc(b, c) + 1e-9


@given(disc_points(), disc_points(), st.floats(0, 2 * math.pi), disc_points())
def test_automorphism_invariance(z1, z2, phase, a):
    def phi(z):
        return np.exp(1j * phase) * (z - a) / (1 - np.conj(a) * z)

    d = poincare_distance_disc(z1, z2)
    assert poincare_distance_disc(phi(z1), phi(z2)) == pytest.approx(d, rel=1e-6, abs=1e-7)


def test_vectorized_distance():
    z = np.array([0.1, 0.2j, -0.3])
    out = poincare_distance_disc(0, z)
    assert out.shape == (3,)
    assert out[1] == pytest.approx(poincare_distance_disc(0, 0.2j))


def test_points_outside_raise():
    with pytest.raises(DomainError):
        poincare_distance_disc(0, 1.0)
    with pytest.raises(DomainError):
        halfplane_distance(-1, 0.5)
    with pytest.raises(DomainError):
        cayley(-1)


def test_hermitian_is_conjugate_linear_in_second_slot():
    u = np.array([1 + 1j, 2])
    v = np.array([1j, 1])
    assert hermitian(u, v) == pytest.approx(np.sum(u * np.conj(v)))
    assert hermitian(u, 1j * v) == pytest.approx(-1j * hermitian(u, v))


def test_quasi_random_points_are_deterministic():
    assert np.array_equal(halton(32, 3, seed=7), halton(32, 3, seed=7))
    pts = sphere_points(50, 2)
    assert np.allclose(np.linalg.norm(pts, axis=1), 1.0)
