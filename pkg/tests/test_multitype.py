import math

import numpy as np
import pytest

from jwckit.core import DomainError, EstimationError
from jwckit.domains import ball, egg, polynomial, tube
from jwckit.multitype import (
    cotype,
    line_type,
    multitype_basis,
    multitype_report,
    scaling_defect,
    scaling_map,
    scaling_model,
)


@pytest.mark.parametrize("D,xi,expected", [
    (egg(2), [1, 0], (1, 2)),
    (egg(4), [1, 0], (1, 4)),
    (egg(6), [1, 0], (1, 6)),
    (egg(4), [0, 1], (1, 2)),
    (ball(3), [1, 0, 0], (1, 2, 2)),
    (tube(), [0, 0], (1, 2)),
])
def test_multitypes(D, xi, expected):
    assert multitype_basis(D, xi).multitype == expected


def test_basis_is_unitary_and_adapted():
    data = multitype_basis(egg(4), [1, 0])
    B = data.basis
    assert np.allclose(B.conj().T @ B, np.eye(2))
    assert np.allclose(B[:, 0], [1, 0])
    assert np.allclose(np.abs(B[:, 1]), [0, 1])


def test_line_types():
    D = egg(4)
    assert line_type(D, [1, 0], [0, 1]) == 4
    assert line_type(D, [1, 0], [0, 1], method="numeric") == 4
    assert line_type(D, [1, 0], [1, 0]) == 1
    assert line_type(D, [1, 0], [1j, 0]) == 1
    with pytest.raises(DomainError):
        line_type(D, [1, 0], [0, 0])


def test_flat_direction_has_infinite_type():
    # r = Re z_0 is flat along z_1
    D = polynomial(2, [{"coef": 1, "re": [1, 0], "im": [0, 0]}], bounded=False)
    assert line_type(D, [0, 0], [0, 1]) == math.inf


def test_cotype():
    data = multitype_basis(egg(4), [1, 0])
    assert cotype(data, [0, 1]) == (4, 4)
    assert cotype(data, [1, 1]) == (4, 1)
    assert cotype(data, [1j, 0]) == (1, 1)
    with pytest.raises(DomainError):
        cotype(data, [0, 0])


def test_scaling_map_diagonal():
    data = multitype_basis(egg(4), [1, 0])
    assert np.allclose(np.diag(scaling_map(data, 16.0)), [16.0, 2.0])


def test_egg_scaling_model_and_defect_decay():
    model = scaling_model(egg(4), [1, 0])
    assert model.weights == (4,)
    mons = model.H.to_monomials()
    w = np.array([[0.0, 0.7 + 0.2j]])
    assert model.H(w[:, 1:])[0] == pytest.approx(0.5 * abs(w[0, 1]) ** 4)
    assert len(mons) == 3
    d2, d3 = scaling_defect(model, 1e2), scaling_defect(model, 1e3)
    assert d3 < d2
    assert d2 / d3 == pytest.approx(10.0, rel=0.05)


def test_report_includes_model():
    rep = multitype_report(tube(), [0, 0])
    assert rep["multitype"] == [1, 2]
    assert "H_monomials" in rep["model"]


def test_unadapted_basis_detected():
    # a domain whose boundary is tilted in a way the greedy basis cannot straighten is still modelled,
    # but a nonconvex model polynomial must be refused
    D = polynomial(2, [{"coef": 1, "re": [1, 0], "im": [0, 0]}, {"coef": -1, "re": [0, 2], "im": [0, 0]},
                       {"coef": 2, "re": [0, 0], "im": [0, 2]}], bounded=False)
    with pytest.raises(EstimationError):
        scaling_model(D, [0, 0])
