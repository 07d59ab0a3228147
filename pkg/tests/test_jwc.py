import numpy as np
import pytest

from jwckit.boundary import estimate_exponent, make_curve
from jwckit.domains import ball, egg
from jwckit.jwc import (
    exponent_matrix,
    function_kprime_limit,
    jacobian_determinant_exponent,
    jwc_report,
    kobayashi_type,
    kprime_limit,
    restricted_bundle,
    scaling_limit_errors,
)
from jwckit.maps import catalog_map, egg_down, egg_up, identity, jacobian_entries, spiral_function
from jwckit.multitype import multitype_basis

XI = [1.0, 0.0]


@pytest.fixture(scope="module")
def up():
    return exponent_matrix(egg_up(2, 4), XI)


@pytest.fixture(scope="module")
def down():
    return exponent_matrix(egg_down(4, 2, 0.5), XI)


def test_predicted_exponents(up, down):
    assert np.allclose(up.predicted, [[0.0, 0.5], [-0.75, -0.25]])
    assert np.allclose(down.predicted, [[0.0, 0.75], [-0.5, 0.25]])


def test_verdicts(up, down):
    expected = [["sharp", "consistent"], ["sharp", "sharp"]]
    assert up.verdicts == expected
    assert down.verdicts == expected
    assert not up.violated


def test_kprime_limits_match_alpha():
    lim = kprime_limit(egg_down(4, 2, 0.5), XI)
    assert lim.consistent
    assert lim.value.real == pytest.approx(2 / 3, abs=1e-6)
    assert lim.matches_alpha
    assert kprime_limit(egg_up(2, 4), XI).value.real == pytest.approx(1.0, abs=1e-6)


def test_restricted_bundle_has_geodesic_trace():
    D = egg(4)
    curves = restricted_bundle(D, multitype_basis(D, XI).xi)
    assert len(curves) >= 3
    assert curves[-1].params["label"] == "geodesic"


def test_spiral_function_has_restricted_limit():
    lim = function_kprime_limit(spiral_function(4), XI)
    assert lim.consistent
    assert lim.value == pytest.approx(1.0, abs=1e-6)


def test_rudin_restricted_limit_and_gamma_values():
    f = catalog_map("rudin")
    assert abs(function_kprime_limit(f, XI).value) < 1e-9
    for lam in (0.3, 0.5, 0.8):
        c = make_curve(ball(2), XI, "gamma_lambda", {"lambda": lam})
        assert f(c.z[-1:])[0, 0] == pytest.approx(lam**2, abs=1e-12)


def test_spiral_tangential_entries_are_small_o():
    f = spiral_function(4)
    D = f.source
    data = multitype_basis(D, XI)
    slopes = []
    for c in restricted_bundle(D, data.xi):
        E = jacobian_entries(f, c.z, data.basis, np.array([[1.0 + 0j]]))[8:, 0, 1]
        if np.all(np.abs(E) < 1e-12):
            continue
        d = c.deltas()[8:]
        # o(delta^{1 - 1/m}): the rescaled entry decays as delta -> 0
        slopes.append(estimate_exponent(zip(d, np.abs(E) * d ** (1 / 4 - 1))).slope)
    assert slopes
    assert all(s >= 0.02 for s in slopes)
    assert slopes == pytest.approx([2.25, 0.75], abs=1e-3)


def test_spiral_has_no_k_limit_along_gamma():
    f = spiral_function(4)
    D = f.source
    data = multitype_basis(D, XI)
    c = make_curve(D, data.xi, "gamma_lambda", {"lambda": 0.5}, data=data)
    E = jacobian_entries(f, c.z, data.basis, np.array([[1.0 + 0j]]))[8:, 0, 1]
    d = c.deltas()[8:]
    scaled = E * d ** (1 / 4 - 1)
    assert np.ptp(np.unwrap(np.angle(scaled))) >= 0.1
    assert abs(estimate_exponent(zip(d, np.abs(scaled))).slope) < 0.02


@pytest.mark.parametrize("m,expected", [(4, 0.25)])
def test_kobayashi_type_tangent(m, expected):
    kt = kobayashi_type(egg(m), XI, [0, 1])
    assert kt.verdict == "consistent"
    assert kt.estimate == pytest.approx(expected, abs=0.01)


def test_kobayashi_type_normal():
    kt = kobayashi_type(egg(4), XI, [1, 0])
    assert kt.estimate == pytest.approx(1.0, abs=0.01)


def test_determinant_exponents():
    det = jacobian_determinant_exponent(egg_down(4, 2, 0.5), XI)
    assert det.predicted == pytest.approx(0.25)
    assert det.slope == pytest.approx(0.25, abs=0.01)
    assert det.tends_to_zero
    assert jacobian_determinant_exponent(identity(egg(4)), XI).slope == pytest.approx(0.0, abs=1e-9)


@pytest.mark.parametrize("m,a", [(2, 0.5), (4, 0.2)])
def test_scaling_errors_decrease(m, a):
    lams = 2.0 ** np.arange(8, 21, 4)
    err = scaling_limit_errors(m, a, lams)
    assert np.all(np.diff(err) < 0)
    assert err[-1] < 0.01


def test_report_schema():
    rep = jwc_report(egg_down(4, 2, 0.5), XI)
    for key in ("map", "multitypes", "predicted", "estimated", "verdicts", "alpha", "lambda", "curves"):
        assert key in rep
    assert rep["lambda"] == pytest.approx(2 / 3, rel=1e-6)
