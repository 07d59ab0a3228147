"""Boundary behaviour of maps between eggs: dilation, exponent matrix and restricted limits."""

import numpy as np

from jwckit.boundary import dilation, estimate_exponent, julia_check, make_curve
from jwckit.jwc import exponent_matrix, function_kprime_limit, kprime_limit
from jwckit.maps import catalog_map, egg_down, jacobian_entries, spiral_function
from jwckit.multitype import multitype_basis

xi = [1.0, 0.0]
f = egg_down(4, 2, 0.5)
print("dilation lambda", dilation(f, xi).lam)
print("Julia check", julia_check(f, xi, n=300).as_dict()["violations"], "violations")

M = exponent_matrix(f, xi)
print("predicted exponents\n", M.predicted)
print("verdicts", M.verdicts)
lim = kprime_limit(f, xi)
print("restricted limit of the normal entry", lim.value.real, "alpha", lim.alpha)

# the spiral function has a restricted limit at (1, 0) but its scaled tangential
# derivative keeps turning along gamma_lambda, so there is no K-limit
g = spiral_function(4)
print("restricted limit of the spiral", function_kprime_limit(g, xi).value)
data = multitype_basis(g.source, xi)
c = make_curve(g.source, data.xi, "gamma_lambda", {"lambda": 0.5}, data=data)
E = jacobian_entries(g, c.z, data.basis, np.array([[1.0 + 0j]]))[8:, 0, 1]
d = c.deltas()[8:]
scaled = E * d ** -0.75
print("modulus slope", estimate_exponent(zip(d, np.abs(scaled))).slope)
print("argument range", np.ptp(np.unwrap(np.angle(scaled))))

rudin = catalog_map("rudin")
print("Rudin function: restricted limit", abs(function_kprime_limit(rudin, [1.0, 0.0]).value))
