import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from jwckit.poly import RealPoly

coords = st.floats(-2, 2)


def egg4():
    return RealPoly.modulus_power(2, 0, 2) + RealPoly.modulus_power(2, 1, 4) + RealPoly(2, {(0, 0, 0, 0): -1.0})


@given(coords, coords, coords, coords)
def test_modulus_power_matches_direct_evaluation(a, b, c, d):
    z = np.array([a + 1j * b, c + 1j * d])
    assert egg4()(z) == pytest.approx(abs(z[0]) ** 2 + abs(z[1]) ** 4 - 1, abs=1e-9)


def test_monomial_round_trip():
    p = egg4()
    q = RealPoly.from_monomials(2, p.to_monomials())
    assert q.terms == p.terms
    assert p.degree == 4


def test_odd_modulus_power_rejected():
    with pytest.raises(ValueError):
        RealPoly.modulus_power(1, 0, 3)


@given(coords, coords, coords, coords)
def test_restriction_to_line(x, y, a, b):
    p = egg4()
    base = np.array([0.3 + 0.1j, -0.2j])
    v = np.array([0.6, 0.8j])
    P = p.restrict_to_line(base, v)
    val = sum(P[i, j] * a**i * b**j for i in range(P.shape[0]) for j in range(P.shape[1]))
    assert val == pytest.approx(p(base + (a + 1j * b) * v), rel=1e-9, abs=1e-9)


def test_complex_gradient_of_ball():
    ball = RealPoly.modulus_power(2, 0, 2) + RealPoly.modulus_power(2, 1, 2)
    z = np.array([0.3 + 0.4j, 0.1j])
    g = ball.complex_gradient(z)
    # with the convention that the gradient points outward along z
    assert np.allclose(g / np.linalg.norm(g), z / np.linalg.norm(z))


def test_compose_affine_and_weighted_part():
    p = egg4()
    q = p.compose_affine(np.array([1.0, 0.0]), np.diag([-1.0, 1.0]).astype(complex))
    w = np.array([0.2 + 0.1j, 0.3j])
    assert q(w) == pytest.approx(p(np.array([1.0, 0.0]) - np.array([w[0], -w[1]])))
    part = q.weighted_part([1.0, 0.25])
    assert part.min_weighted_degree([1.0, 0.25]) == pytest.approx(1.0)
