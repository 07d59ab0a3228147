"""Complex geodesics of the egg ending at (1, 0), their normal derivatives and the Poisson kernel."""

import numpy as np

from jwckit.domains import egg
from jwckit.geodesics import egg_geodesic, horofunction, normal_derivative_limit, poisson_kernel, poisson_kernel_egg
from jwckit.kobayashi import egg_axis_distance

m = 4
for a in (0.0, 0.5, 0.5 + 0.3j):
    phi = egg_geodesic(m, a)
    lim = normal_derivative_limit(phi, [1, 0]).value
    print(f"a = {a!s:10} inside: {phi.check_inside(egg(m))}  <phi'(1), n> = {lim:.12f}")

# along the axis geodesic the egg distance is the disc distance of the parameters
phi = egg_geodesic(m, 0.0)
for t in (0.5, 0.9, 0.999):
    print(f"t = {t}: k_E = {egg_axis_distance(m, 0.0, phi(np.array(t + 0j))):.12f}, "
          f"k_disc = {np.log((1 + t) / (1 - t)):.12f}")

z = np.array([0.3 - 0.1j, 0.4])
val = poisson_kernel(egg(m), [1, 0], z)
print("Poisson kernel via geodesic", val.value, "closed form", poisson_kernel_egg(m, z))
print("horofunction at z", horofunction(egg(m), [1, 0], [0, 0], z).value)
