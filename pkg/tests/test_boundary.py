import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from jwckit.boundary import (
    classify_curve,
    dilation,
    estimate_exponent,
    julia_check,
    make_curve,
    parse_curve,
)
from jwckit.core import DomainError, EstimationError
from jwckit.domains import ball, disc, egg, tube
from jwckit.maps import catalog_map, disc_power, disc_shift, egg_down, egg_projection, identity
from jwckit.multitype import multitype_basis


@given(st.floats(-3, 3), st.floats(0.1, 10))
def test_exponent_of_exact_power_law(p, c):
    d = 2.0 ** -np.arange(20)
    est = estimate_exponent(zip(d, c * d**p))
    assert est.slope == pytest.approx(p, abs=1e-9)
    assert est.r2 == pytest.approx(1.0)


def test_exponent_needs_decades_and_samples():
    d = 1 - np.linspace(0, 0.1, 20)
    with pytest.raises(EstimationError):
        estimate_exponent(zip(d, d))
    with pytest.raises(EstimationError):
        estimate_exponent([(0.1, 1.0)] * 3)
    with pytest.raises(EstimationError):
        estimate_exponent([(-0.1, 1.0)] * 20)


def test_parse_curve():
    assert parse_curve("cone:0.5") == ("cone", {"aperture": 0.5})
    assert parse_curve("gamma_lambda:0.5") == ("gamma_lambda", {"lambda": 0.5 + 0j})
    assert parse_curve("normal") == ("normal", {})
    for bad in ("spiral", "normal:2"):
        with pytest.raises(DomainError):
            parse_curve(bad)


def test_curves_end_at_the_boundary_point():
    c = make_curve(egg(4), [1, 0], "gamma_lambda", {"lambda": 0.5})
    assert np.linalg.norm(c.z[-1] - np.array([1, 0])) < 1e-2
    assert np.all(np.diff(c.deltas()) < 0)


def test_curve_leaving_the_domain_is_rejected():
    with pytest.raises(DomainError):
        make_curve(egg(4), [1, 0], "gamma_lambda", {"lambda": 1.5})
    with pytest.raises(DomainError):
        make_curve(disc(), [1], "tube_alpha")
    with pytest.raises(DomainError):
        make_curve(disc(), [1], "zigzag")


def test_user_curve():
    c = make_curve(disc(), [1], "user", {"func": lambda s: (1 - s)[:, None] + 0j})
    assert c.kind == "user"
    assert "func" not in c.params


@pytest.mark.parametrize("D,xi,kind,params,label", [
    (egg(4), [1, 0], "normal", {}, "K_prime"),
    (egg(4), [1, 0], "gamma_lambda", {"lambda": 0.5}, "K_only"),
    (egg(4), [1, 0], "cone", {"aperture": 0.5}, "K_prime"),
    (tube(), [0, 0], "tube_alpha", {"alpha": 0.25}, "not_K"),
    (tube(), [0, 0], "tube_alpha", {"alpha": 0.75}, "K_prime"),
    (ball(2), [1, 0], "cone", {"aperture": 0.5}, "K_prime"),
    (ball(2), [1, 0], "gamma_lambda", {"lambda": 0.5}, "K_only"),
])
def test_classifier(D, xi, kind, params, label):
    data = multitype_basis(D, xi)
    curve = make_curve(D, xi, kind, params, data=data)
    assert classify_curve(data, curve).label == label


@pytest.mark.parametrize("f,xi,lam", [
    (disc_power(2), [1.0], 2.0),
    (disc_shift(0.5), [1.0], 2 / 3),
    (identity(egg(4)), [1.0, 0.0], 1.0),
    (egg_projection(4), [1.0, 0.0], 1.0),
    (egg_down(4, 2, 0.5), [1.0, 0.0], 2 / 3),
])
def test_dilation_coefficients(f, xi, lam):
    assert dilation(f, xi).lam == pytest.approx(lam, rel=1e-6)


def test_dilation_chain_rule():
    f, g = egg_projection(4), disc_power(2)
    whole = dilation(f.compose(g), [1.0, 0.0]).lam
    assert whole == pytest.approx(dilation(f, [1.0, 0.0]).lam * dilation(g, [1.0]).lam, rel=1e-8)


def test_dilation_refuses_irregular_contact():
    with pytest.raises(EstimationError):
        dilation(catalog_map("rudin"), [1.0, 0.0])


@pytest.mark.parametrize("name", ["disc_shift", "egg_down", "spiral"])
def test_julia_inequality(name):
    f = catalog_map(name)
    xi = [1.0] if f.source.dim == 1 else [1.0, 0.0]
    rep = julia_check(f, xi, n=300)
    assert rep.ok
    assert rep.witness is None
    assert rep.max_violation <= 1e-2
