import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from jwckit.core import DomainError
from jwckit.domains import egg, sample_interior
from jwckit.maps import (
    catalog_map,
    contact_point_check,
    egg_down,
    egg_projection,
    egg_up,
    example_catalog,
    jacobian_entries,
    jacobian_entry,
    numeric_jacobian,
    theta,
)

CATALOG = example_catalog()


@pytest.mark.parametrize("f", CATALOG, ids=lambda f: f.name)
def test_maps_send_source_into_target(f):
    assert f.check_inclusion(n=3000) == 0


@pytest.mark.parametrize("f", CATALOG, ids=lambda f: f.name)
def test_closed_form_jacobians(f):
    Z = sample_interior(f.source, 5, seed=11) * 0.9
    for z in Z:
        assert np.allclose(f.jacobian(z), numeric_jacobian(f, z), atol=1e-8)


@given(st.floats(0.0, 0.999), st.floats(0, 2 * math.pi))
def test_theta_maps_disc_into_disc(rho, t):
    zeta = rho * complex(math.cos(t), math.sin(t))
    assert abs(theta(zeta)) < 1


def test_theta_modulus_on_real_axis():
    x = np.linspace(-0.9, 0.99, 7)
    assert np.allclose(np.abs(theta(x)), math.exp(-math.pi / 2))


def test_composition_follows_chain_rule():
    g = egg_down(4, 2, 0.5).compose(egg_projection(2))
    z = np.array([0.3 + 0.1j, 0.4])
    assert np.allclose(g.jacobian(z), numeric_jacobian(g, z), atol=1e-8)


def test_catalog_lookup():
    assert catalog_map("egg_up", m1=2, m2=6).target.param == 6
    with pytest.raises(DomainError):
        catalog_map("nope")
    with pytest.raises(DomainError):
        egg_up(4, 2)
    with pytest.raises(DomainError):
        egg_down(4, 2, 0.0)


def test_jacobian_entry_numeric_matches_exact():
    f = egg_up(2, 4)
    z = np.array([0.2, 0.3j])
    exact = jacobian_entry(f, z, [0, 1], [0, 1])
    assert jacobian_entry(f, z, [0, 1], [0, 1], numeric=True) == pytest.approx(exact, abs=1e-9)
    E = jacobian_entries(f, np.stack([z, 0.5 * z]), np.eye(2), np.eye(2))
    assert E.shape == (2, 2, 2)
    assert E[0, 1, 1] == pytest.approx(exact)


@pytest.mark.parametrize("name,eta", [
    ("egg_down", [1, 0]), ("egg_up", [1, 0]), ("disc_shift", [1]), ("spiral", [1]), ("egg_projection", [1]),
])
def test_regular_contact_points(name, eta):
    f = catalog_map(name)
    xi = [1.0] * 1 if f.source.dim == 1 else [1.0, 0.0]
    cc = contact_point_check(f, xi)
    assert cc.regular
    assert np.allclose(cc.eta.xi, eta, atol=1e-6)


def test_rudin_contact_is_not_regular():
    cc = contact_point_check(catalog_map("rudin"), [1.0, 0.0])
    assert not cc.regular
    assert "interior" in cc.reason
