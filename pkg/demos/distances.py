"""Certified Kobayashi distances: closed forms, bare certificates and refinement."""

import numpy as np

from jwckit import distance_bounds, refine_distance_upper
from jwckit.domains import ball, egg
from jwckit.kobayashi import egg_axis_distance, exact_distance, verify_witness

B = ball(2)
z, w = np.array([0.5, 0.1j]), np.array([-0.2, 0.6])

print("ball, closed form      ", exact_distance(B, z, w))
iv = distance_bounds(B, z, w, use_oracle=False)
print("ball, certificates only", iv.lo, iv.hi, "witnesses ok:", verify_witness(B, z, w, iv))
iv = refine_distance_upper(B, z, w, budget=800, degree=4, initial=iv)
print("ball, refined upper    ", iv.hi, "via", iv.hi_witness["kind"])

# on the egg only pairs with one point on the z_0-axis have a closed form
E = egg(4)
a, b = np.array([0.2, 0.0]), np.array([-0.1 + 0.2j, 0.5])
iv = distance_bounds(E, a, b, use_oracle=False)
print("egg, axis pair         ", egg_axis_distance(4, a[0], b), "in", (iv.lo, iv.hi))
iv = distance_bounds(E, np.array([0.1, 0.3]), b)
print("egg, generic pair      ", (iv.lo, iv.hi))
