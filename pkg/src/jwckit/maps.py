"""Holomorphic maps between catalog domains, their Jacobians and contact checks."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .core import DomainError, as_vector, halton, hermitian
from .domains import BoundaryPoint, Domain, _inside, ball, boundary_distance, boundary_point, disc, egg, sample_interior


@dataclass(frozen=True, eq=False)
class HolomorphicMap:
    """f: source -> target, vectorized over leading axes; ``jac`` returns (..., q, d)."""

    name: str
    f: Callable
    source: Domain
    target: Domain
    jac: Callable | None = None
    params: dict = field(default_factory=dict)

    def __call__(self, z):
        return self.f(np.asarray(z, dtype=complex))

    def jacobian(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        if self.jac is not None:
            return self.jac(z)
        return numeric_jacobian(self, z)

    def compose(self, other: "HolomorphicMap") -> "HolomorphicMap":
        """other o self."""
        jac = None
        if self.jac is not None and other.jac is not None:
            def jac(z):
                return other.jac(self.f(z)) @ self.jac(z)
        return HolomorphicMap(f"{other.name}o{self.name}", lambda z: other.f(self.f(z)),
                              self.source, other.target, jac, {"inner": self.name, "outer": other.name})

    def check_inclusion(self, n: int = 10_000, seed: int = 42) -> int:
        """Number of quasi-random source samples whose image leaves the target."""
        Z = sample_interior(self.source, n, seed)
        return int(np.sum(~_inside(self.target, self(Z))))


def _stack(*cols):
    return np.stack(np.broadcast_arrays(*cols), axis=-1)


def _jac(rows):
    return np.stack([_stack(*r) for r in rows], axis=-2)


# ------------------------------------------------------------------ catalog

def theta(zeta):
    """exp(-pi/2 - i log(1 - zeta)): a self-map of the disc spiralling at 1."""
    zeta = np.asarray(zeta, dtype=complex)
    return np.exp(-math.pi / 2 - 1j * np.log(1 - zeta))


def theta_prime(zeta):
    zeta = np.asarray(zeta, dtype=complex)
    return 1j * theta(zeta) / (1 - zeta)


def identity(D: Domain) -> HolomorphicMap:
    d = D.dim
    return HolomorphicMap(f"identity[{D.name}]", lambda z: z, D, D,
                          lambda z: np.broadcast_to(np.eye(d, dtype=complex), z.shape[:-1] + (d, d)).copy())


def disc_power(k: int = 2) -> HolomorphicMap:
    D = disc()
    return HolomorphicMap(f"disc_power{k}", lambda z: z**k, D, D,
                          lambda z: (k * z ** (k - 1))[..., None], {"k": k})


def disc_shift(r: float) -> HolomorphicMap:
    """zeta -> (zeta + r)/(1 + r), fixing 1 with angular derivative 1/(1 + r)."""
    if r < 0:
        raise DomainError("shift parameter must be nonnegative")
    D = disc()
    return HolomorphicMap(f"disc_shift{r:g}", lambda z: (z + r) / (1 + r), D, D,
                          lambda z: np.full(z.shape[:-1] + (1, 1), 1 / (1 + r), dtype=complex), {"r": r})


def egg_projection(m: int) -> HolomorphicMap:
    return HolomorphicMap(f"egg_projection{m}", lambda z: z[..., :1], egg(m), disc(),
                          lambda z: _jac([[np.ones(z.shape[:-1], complex), np.zeros(z.shape[:-1], complex)]]),
                          {"m": m})


def egg_inclusion(m: int) -> HolomorphicMap:
    def f(z):
        return np.concatenate([z, np.zeros_like(z)], axis=-1)

    def jac(z):
        one = np.ones(z.shape[:-1], complex)
        return _jac([[one], [0 * one]])

    return HolomorphicMap(f"egg_inclusion{m}", f, disc(), egg(m), jac, {"m": m})


def spiral_function(m: int) -> HolomorphicMap:
    """z_0 + z_1^m theta(z_0) / 2 on E_m, a function into the disc."""

    def f(z):
        return (z[..., 0] + 0.5 * z[..., 1] ** m * theta(z[..., 0]))[..., None]

    def jac(z):
        z0, z1 = z[..., 0], z[..., 1]
        return _jac([[1 + 0.5 * z1**m * theta_prime(z0), 0.5 * m * z1 ** (m - 1) * theta(z0)]])

    return HolomorphicMap(f"spiral{m}", f, egg(m), disc(), jac, {"m": m})


def egg_up(m1: int, m2: int) -> HolomorphicMap:
    """E_{m1} -> E_{m2} for m1 <= m2: (z_0, 2^{-1/m1} z_1 (1-z_0)^{-e} theta(z_0)), e = 1/m1 - 1/m2."""
    if m1 > m2:
        raise DomainError("egg_up needs m1 <= m2")
    e = (m2 - m1) / (m1 * m2)
    c = 2.0 ** (-1.0 / m1)

    def f(z):
        z0, z1 = z[..., 0], z[..., 1]
        return _stack(z0, c * z1 * (1 - z0) ** (-e) * theta(z0))

    def jac(z):
        z0, z1 = z[..., 0], z[..., 1]
        th = theta(z0)
        one = np.ones_like(z0)
        return _jac([[one, 0 * one],
                      [c * z1 * (1 - z0) ** (-e - 1) * th * (e + 1j), c * (1 - z0) ** (-e) * th]])

    return HolomorphicMap(f"egg_up{m1}_{m2}", f, egg(m1), egg(m2), jac, {"m1": m1, "m2": m2})


def egg_down(m1: int, m2: int, r: float = 0.5) -> HolomorphicMap:
    """E_{m1} -> E_{m2} for m2 <= m1 with shift r > 0 in the first coordinate."""
    if m2 > m1:
        raise DomainError("egg_down needs m2 <= m1")
    if r <= 0:
        raise DomainError("shift parameter must be positive")
    e = (m1 - m2) / (m1 * m2)
    K = 2.0 ** (-1.0 / m1) * r ** (1.0 / m2) / (1 + r) ** (2.0 / m2)

    def f(z):
        z0, z1 = z[..., 0], z[..., 1]
        return _stack((z0 + r) / (1 + r), K * z1 * (1 - z0) ** e * theta(z0))

    def jac(z):
        z0, z1 = z[..., 0], z[..., 1]
        th = theta(z0)
        one = np.ones_like(z0)
        return _jac([[one / (1 + r), 0 * one],
                      [K * z1 * (1 - z0) ** (e - 1) * th * (1j - e), K * (1 - z0) ** e * th]])

    return HolomorphicMap(f"egg_down{m1}_{m2}", f, egg(m1), egg(m2), jac, {"m1": m1, "m2": m2, "r": r})


def rudin_function() -> HolomorphicMap:
    """w^2 / (1 - z^2) on the ball of C^2: radial limit 0 at (1, 0) but no K-limit."""

    def f(z):
        a, b = z[..., 0], z[..., 1]
        return (b**2 / ((1 - a) * (1 + a)))[..., None]

    def jac(z):
        a, b = z[..., 0], z[..., 1]
        g = (1 - a) * (1 + a)
        return _jac([[2 * a * b**2 / g**2, 2 * b / g]])

    return HolomorphicMap("rudin", f, ball(2), disc(), jac)


CATALOG = {
    "identity_disc": lambda: identity(disc()),
    "identity_egg4": lambda: identity(egg(4)),
    "disc_square": lambda: disc_power(2),
    "disc_shift": lambda: disc_shift(0.5),
    "egg_projection": lambda: egg_projection(4),
    "egg_inclusion": lambda: egg_inclusion(4),
    "spiral": lambda: spiral_function(4),
    "egg_up": lambda: egg_up(2, 4),
    "egg_down": lambda: egg_down(4, 2, 0.5),
    "rudin": rudin_function,
}


def catalog_map(name: str, **kw) -> HolomorphicMap:
    """Catalog lookup; ``egg_up``/``egg_down``/``spiral`` accept exponents through keywords."""
    builders = {"egg_up": egg_up, "egg_down": egg_down, "spiral": spiral_function,
                "disc_power": disc_power, "disc_shift": disc_shift,
                "egg_projection": egg_projection, "egg_inclusion": egg_inclusion}
    if kw and name in builders:
        return builders[name](**kw)
    if name not in CATALOG:
        raise DomainError(f"unknown map {name!r}; known: {', '.join(sorted(CATALOG))}")
    return CATALOG[name]()


def example_catalog() -> list[HolomorphicMap]:
    return [build() for build in CATALOG.values()]


# ------------------------------------------------------------ derivatives

CAUCHY_NODES = 32


def _cauchy_derivative(fmap: HolomorphicMap, z, v, rho: float) -> np.ndarray:
    th = np.exp(2j * np.pi * np.arange(CAUCHY_NODES) / CAUCHY_NODES)
    vals = fmap(z[None, :] + rho * th[:, None] * v[None, :])
    return np.mean(vals * np.conj(th)[:, None], axis=0) / rho


def _cauchy_radius(fmap: HolomorphicMap, z, v) -> float:
    nv = np.linalg.norm(v)
    rho = min(1e-3, boundary_distance(fmap.source, z) / 4) / nv
    th = np.exp(2j * np.pi * np.arange(CAUCHY_NODES) / CAUCHY_NODES)
    while not np.all(_inside(fmap.source, z[None, :] + rho * th[:, None] * v[None, :])):
        rho /= 2
        if rho < 1e-12:
            raise DomainError("Cauchy circle cannot be placed inside the domain")
    return rho


def numeric_directional_derivative(fmap: HolomorphicMap, z, v) -> np.ndarray:
    """df_z(v) from Cauchy circles at radii rho and rho/2, combined by Richardson."""
    z = as_vector(z, fmap.source.dim)
    v = as_vector(v, fmap.source.dim)
    rho = _cauchy_radius(fmap, z, v)
    a = _cauchy_derivative(fmap, z, v, rho)
    b = _cauchy_derivative(fmap, z, v, rho / 2)
    # trapezoid aliasing error is O(rho^N) for N nodes
    w = 2.0**CAUCHY_NODES
    return (w * b - a) / (w - 1)


def numeric_jacobian(fmap: HolomorphicMap, z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    if z.ndim > 1:
        return np.stack([numeric_jacobian(fmap, zz) for zz in z.reshape(-1, z.shape[-1])]).reshape(
            z.shape[:-1] + (-1, z.shape[-1]))
    d = fmap.source.dim
    return np.stack([numeric_directional_derivative(fmap, z, e) for e in np.eye(d)], axis=-1)


def jacobian_entry(fmap: HolomorphicMap, z, v, u, numeric: bool = False) -> complex:
    """<df_z(v), u>, exact when the map carries its Jacobian unless ``numeric``."""
    z = as_vector(z, fmap.source.dim)
    v = as_vector(v, fmap.source.dim)
    u = as_vector(u, fmap.target.dim)
    if fmap.jac is not None and not numeric:
        dv = fmap.jac(z) @ v
    else:
        dv = numeric_directional_derivative(fmap, z, v)
    return complex(hermitian(dv, u))


def jacobian_entries(fmap: HolomorphicMap, Z, V, U) -> np.ndarray:
    """Matrix <df_z(v_j), u_i> for every row z of Z; V and U hold basis columns."""
    Z = np.atleast_2d(np.asarray(Z, dtype=complex))
    J = fmap.jacobian(Z) if fmap.jac is not None else numeric_jacobian(fmap, Z)
    return np.einsum("qi,nqd,dj->nij", np.conj(U), J, V)


# --------------------------------------------------------------- contact

@dataclass(frozen=True)
class ContactCheck:
    regular: bool
    limit: np.ndarray | None
    eta: BoundaryPoint | None
    derivative_growth: float
    decades: float
    reason: str
    inconclusive: bool = False

    def __bool__(self) -> bool:
        return self.regular

    def as_dict(self) -> dict:
        return {"regular": self.regular, "inconclusive": self.inconclusive, "reason": self.reason,
                "limit": None if self.limit is None else [[float(x.real), float(x.imag)] for x in self.limit],
                "derivative_growth": self.derivative_growth, "decades": self.decades}


def normal_segment(D: Domain, xi: BoundaryPoint, n_terms: int = 40) -> tuple[np.ndarray, np.ndarray]:
    s = 2.0 ** -np.arange(1, n_terms + 1)
    return s, xi.xi[None, :] - s[:, None] * xi.normal[None, :]


def contact_point_check(fmap: HolomorphicMap, xi, n_terms: int = 40, tol: float = 1e-6) -> ContactCheck:
    """Regular contact test along the normal segment: boundary limit plus bounded normal derivative."""
    from .boundary import estimate_exponent

    bp = xi if isinstance(xi, BoundaryPoint) else boundary_point(fmap.source, xi)
    s, Z = normal_segment(fmap.source, bp, n_terms)
    F = fmap(Z)
    tail = F[-6:]
    spread = float(np.max(np.linalg.norm(tail - tail[-1], axis=1)))
    delta = np.array([boundary_distance(fmap.source, z) for z in Z])
    decades = float(np.log10(delta.max() / delta.min()))
    if decades < 2:
        return ContactCheck(False, None, None, math.nan, decades, "fewer than two decades", True)
    limit = tail[-1]
    if spread > tol:
        return ContactCheck(False, None, None, math.nan, decades, f"no limit along the normal (spread {spread:.2e})")
    T = fmap.target
    gap = abs(float(T.r(limit)))
    scale = float(np.linalg.norm(T.gradient(limit))) if np.all(np.isfinite(limit)) else 1.0
    if gap > 1e-6 * max(scale, 1.0):
        return ContactCheck(False, limit, None, math.nan, decades, "normal limit is an interior point of the target")
    eta = boundary_point(T, limit)
    vals = np.abs(jacobian_entries(fmap, Z, bp.normal[:, None], eta.normal[:, None])[:, 0, 0])
    est = estimate_exponent(list(zip(delta[4:], vals[4:])))
    growth = -est.slope
    if growth > 0.02:
        return ContactCheck(False, limit, eta, growth, decades, "normal derivative is unbounded")
    return ContactCheck(True, limit, eta, growth, decades, "regular contact point")
