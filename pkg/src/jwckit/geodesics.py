"""Complex geodesics, normal derivatives, Poisson kernels and horofunctions.

Boundary points of eggs handled in closed form are the axis points (e^{i t}, 0);
a rotation of the first coordinate reduces them to (1, 0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .core import (DomainError, EstimationError, as_vector, halfplane_distance, hermitian,
                   poincare_distance_disc)
from .domains import BoundaryPoint, Domain, _inside, boundary_point, contains
from .kobayashi import ball_distance, distance_estimate, egg_axis_distance

N_TERMS = 40


@dataclass(frozen=True, eq=False)
class DiscMap:
    """Holomorphic map of the unit disc into C^d with its derivative."""

    f: Callable
    df: Callable
    tag: str
    params: dict = field(default_factory=dict)

    def __call__(self, zeta):
        return self.f(np.asarray(zeta, dtype=complex))

    def derivative(self, zeta):
        return self.df(np.asarray(zeta, dtype=complex))

    def compose(self, tau: "DiscAutomorphism") -> "DiscMap":
        return DiscMap(lambda z: self.f(tau(z)),
                       lambda z: self.df(tau(z)) * tau.derivative(z)[..., None],
                       self.tag, {**self.params, "reparam": tau.sigma})

    def check_inside(self, D: Domain, n: int = 1000, radius: float = 0.9999) -> bool:
        zeta = radius * np.exp(2j * np.pi * np.arange(n) / n) * np.linspace(0.0, 1.0, n) ** 0.25
        return bool(np.all(_inside(D, self(zeta))))


@dataclass(frozen=True)
class DiscAutomorphism:
    """The automorphism of the disc fixing 1 with tau(0) = sigma.

    Through W(z) = (1+z)/(1-z) it is the affine map u -> alpha u + i beta of the
    right half-plane, with alpha + i beta = W(sigma); its angular derivative at 1
    is 1/alpha.
    """

    sigma: complex

    @property
    def _ab(self) -> complex:
        return (1 + self.sigma) / (1 - self.sigma)

    def __call__(self, zeta):
        zeta = np.asarray(zeta, dtype=complex)
        c = self._ab
        u = c.real * (1 + zeta) + 1j * c.imag * (1 - zeta)
        return (u - (1 - zeta)) / (u + (1 - zeta))

    def derivative(self, zeta):
        zeta = np.asarray(zeta, dtype=complex)
        c = self._ab
        u = c.real * (1 + zeta) + 1j * c.imag * (1 - zeta)
        return 4 * c.real / (u + (1 - zeta)) ** 2

    @property
    def angular_derivative(self) -> float:
        return 1.0 / self._ab.real


def _egg_param(a: complex, m: int) -> float:
    return abs(a) ** m


def egg_geodesic(m: int, a: complex = 0.0) -> DiscMap:
    """phi_a(z) = ((z + c)/(1 + c), a ((1 - z)/(1 + c))^(2/m)) with c = |a|^m, ending at (1, 0)."""
    if m < 2 or m % 2:
        raise DomainError("egg exponent m must be an even integer >= 2")
    a = complex(a)
    c = _egg_param(a, m)
    p = 2.0 / m

    def f(z):
        base = (1 - z) / (1 + c)
        return np.stack([(z + c) / (1 + c), a * base**p], axis=-1)

    def df(z):
        base = (1 - z) / (1 + c)
        with np.errstate(divide="ignore", invalid="ignore"):
            d1 = np.where(a == 0, 0.0, -a * p * base ** (p - 1) / (1 + c))
        return np.stack([np.full(np.shape(z), 1 / (1 + c), dtype=complex), d1], axis=-1)

    return DiscMap(f, df, "egg_geodesic", {"m": m, "a": a})


def _rotate_egg(xi0: complex, z):
    """Rotation of the first coordinate taking the axis point (xi0, 0) to (1, 0)."""
    z = np.array(z, dtype=complex)
    z[..., 0] = z[..., 0] * np.conj(xi0)
    return z


def _as_bp(D: Domain, xi) -> BoundaryPoint:
    return xi if isinstance(xi, BoundaryPoint) else boundary_point(D, xi)


def _egg_axis_xi(D: Domain, bp: BoundaryPoint) -> complex:
    if abs(bp.xi[1]) > 1e-12:
        raise DomainError("closed-form egg geodesics are only available at axis boundary points")
    return bp.xi[0] / abs(bp.xi[0])


# ------------------------------------------------------- normal derivatives

@dataclass(frozen=True)
class LimitEstimate:
    value: float
    tail_variation: float
    trace: tuple = ()

    def __float__(self) -> float:
        return float(self.value)


def _richardson_limit(vals: np.ndarray, tol: float) -> LimitEstimate:
    # errors are O(1 - t) and t_k halves the gap, so 2 v_{k+1} - v_k kills the leading term
    rich = 2 * vals[1:] - vals[:-1]
    tail = rich[-6:]
    var = float(np.max(tail) - np.min(tail))
    if not np.isfinite(var) or var > tol:
        raise EstimationError(f"normal derivative tail does not settle (variation {var:.3g})")
    return LimitEstimate(float(rich[-1]), var, tuple(map(float, vals)))


def normal_derivative_limit(phi: DiscMap, normal, n_terms: int = N_TERMS, tol: float = 1e-6) -> LimitEstimate:
    """lim_{t -> 1-} <phi'(t), n> along t_k = 1 - 2^-k."""
    n = np.asarray(normal, dtype=complex)
    t = 1.0 - 2.0 ** -np.arange(1, n_terms + 1)
    vals = hermitian(phi.derivative(t), n)
    if abs(vals[-1].imag) > tol * (1 + abs(vals[-1])):
        raise EstimationError("normal derivative keeps a nonzero imaginary part")
    return _richardson_limit(vals.real, tol)


def halfplane_transport(phi: DiscMap) -> DiscMap:
    """psi = phi o C^{-1}, a map of the left half-plane sending 0 to the endpoint of phi."""

    def f(w):
        return phi((1 + w) / (1 - w))

    def df(w):
        return phi.derivative((1 + w) / (1 - w)) * (2 / (1 - w) ** 2)[..., None]

    return DiscMap(f, df, phi.tag + "@halfplane", dict(phi.params))


def halfplane_normal_derivative(phi: DiscMap, normal, n_terms: int = N_TERMS,
                                tol: float = 1e-6) -> LimitEstimate:
    """lim_{s -> 0+} <psi'(-s), n> for psi = phi o C^{-1}; equals twice the disc value."""
    psi = halfplane_transport(phi)
    s = 2.0 ** -np.arange(1, n_terms + 1)
    vals = hermitian(psi.derivative(-s), np.asarray(normal, dtype=complex))
    if abs(vals[-1].imag) > tol * (1 + abs(vals[-1])):
        raise EstimationError("normal derivative keeps a nonzero imaginary part")
    return _richardson_limit(vals.real, tol)


# ------------------------------------------------------------ Poisson kernels

@dataclass(frozen=True, eq=False)
class PoissonKernelValue:
    value: float
    method: str
    residual: float = 0.0
    geodesic: DiscMap | None = None
    spread: float = 0.0  # max disagreement between independent solver restarts
    closed_form: float | None = None

    def __post_init__(self):
        if not self.value < 0:
            raise EstimationError("Poisson kernel must be strictly negative")

    def __float__(self) -> float:
        return float(self.value)


def poisson_kernel_egg(m: int, z) -> float:
    """-(1 - |z_0|^2 - |z_1|^m) / |1 - z_0|^2, the kernel of E_m at (1, 0); vectorized."""
    z = np.asarray(z, dtype=complex)
    a0 = np.abs(z[..., 0])
    num = (1 - a0) * (1 + a0) - np.abs(z[..., 1]) ** m
    if np.any(num <= 0):
        raise DomainError("point outside the egg")
    out = -num / np.abs(1 - z[..., 0]) ** 2
    return float(out) if out.ndim == 0 else out


def poisson_kernel_ball(xi, z) -> float:
    """-(1 - |z|^2) / |1 - <z, xi>|^2 on the unit ball (the disc when d = 1); vectorized."""
    z = np.asarray(z, dtype=complex)
    nz = np.linalg.norm(z, axis=-1)
    if np.any(nz >= 1):
        raise DomainError("point outside the unit ball")
    out = -(1 - nz) * (1 + nz) / np.abs(1 - hermitian(z, np.asarray(xi, dtype=complex))) ** 2
    return float(out) if np.ndim(out) == 0 else out


def ball_geodesic(xi, z) -> DiscMap:
    """Geodesic phi of the ball with phi(0) = z and radial limit xi at 1."""
    xi = np.asarray(xi, dtype=complex)
    z = np.asarray(z, dtype=complex)
    diff = xi - z
    L = np.linalg.norm(diff)
    u = diff / L
    zu = complex(hermitian(z, u))
    R = math.sqrt(max(1 - float(np.linalg.norm(z)) ** 2 + abs(zu) ** 2, 0.0))
    alpha = zu / R
    beta = (L + zu) / R
    e = (beta - alpha) / (1 - np.conj(alpha) * beta)
    e /= abs(e)
    base = z - zu * u  # center of the slice disc

    def mob(zeta):
        return (e * zeta + alpha) / (1 + np.conj(alpha) * e * zeta)

    def f(zeta):
        return base + R * mob(zeta)[..., None] * u

    def df(zeta):
        dm = e * (1 - abs(alpha) ** 2) / (1 + np.conj(alpha) * e * zeta) ** 2
        return R * dm[..., None] * u

    return DiscMap(f, df, "slice", {"xi": xi, "z": z})


def _egg_geodesic_through(m: int, z) -> tuple[complex, complex]:
    """Closed form of (a, sigma) with phi_a(sigma) = z for the (1,0)-endpoint family."""
    z0, z1 = complex(z[0]), complex(z[1])
    a = z1 * (1 - z0) ** (-2.0 / m)
    c = _egg_param(a, m)
    return a, z0 * (1 + c) - c


def _residual(m, x, z):
    a = complex(x[0], x[1])
    s = complex(x[2], x[3])
    c = _egg_param(a, m)
    val = np.array([(s + c) / (1 + c), a * ((1 - s) / (1 + c)) ** (2.0 / m)])
    r = val - z
    return np.array([r[0].real, r[0].imag, r[1].real, r[1].imag])


def solve_egg_geodesic(m: int, z, restarts: int = 16, seed: int = 42, tol: float = 1e-10):
    """Damped Newton for (a, sigma) with phi_a(sigma) = z, from ``restarts`` random starts.

    Returns the list of converged (a, sigma, residual) triples, best first.
    """
    z = np.asarray(z, dtype=complex)
    rng = np.random.default_rng(seed)
    found = []
    for _ in range(restarts):
        x = np.concatenate([rng.uniform(-1, 1, 2), 0.9 * rng.uniform(-1, 1, 2) / math.sqrt(2)])
        F = _residual(m, x, z)
        for _ in range(100):
            nF = np.linalg.norm(F)
            if nF <= 1e-14:
                break
            J = np.empty((4, 4))
            for k in range(4):
                h = 1e-7 * max(1.0, abs(x[k]))
                e = np.zeros(4)
                e[k] = h
                J[:, k] = (_residual(m, x + e, z) - _residual(m, x - e, z)) / (2 * h)
            try:
                step = np.linalg.solve(J, -F)
            except np.linalg.LinAlgError:
                break
            lam = 1.0
            while lam > 1e-6:
                xn = x + lam * step
                if abs(complex(xn[2], xn[3])) < 1:
                    Fn = _residual(m, xn, z)
                    if np.linalg.norm(Fn) < (1 - 1e-4 * lam) * nF:
                        break
                lam *= 0.5
            else:
                break
            x, F = xn, Fn
        res = float(np.linalg.norm(F))
        if res <= tol:
            found.append((complex(x[0], x[1]), complex(x[2], x[3]), res))
    found.sort(key=lambda t: t[2])
    return found


def poisson_kernel(D: Domain, xi, z, restarts: int = 16, seed: int = 42) -> PoissonKernelValue:
    """Omega_xi(z) = -1/phi'_N(1) for a geodesic phi with phi(0) = z ending at xi."""
    bp = _as_bp(D, xi)
    z = as_vector(z, D.dim)
    if not contains(D, z):
        raise DomainError("point outside the domain")
    if D.kind in ("disc", "ball"):
        phi = ball_geodesic(bp.xi, z)
        dn = complex(hermitian(phi.derivative(np.array(1.0 + 0j)), bp.normal)).real
        closed = poisson_kernel_ball(bp.xi, z)
        return PoissonKernelValue(-1.0 / dn, "slice", float(np.linalg.norm(phi(0.0) - z)), phi,
                                  closed_form=closed)
    if D.kind != "egg":
        raise DomainError(f"no geodesic construction for {D.name}")
    m = D.param
    x0 = _egg_axis_xi(D, bp)
    w = _rotate_egg(x0, z)
    closed = poisson_kernel_egg(m, w)
    sols = solve_egg_geodesic(m, w, restarts, seed)
    if not sols:
        raise EstimationError("geodesic solve failed from every restart")
    vals = []
    for a, sigma, _ in sols:
        tau = DiscAutomorphism(sigma)
        vals.append(-(1 + _egg_param(a, m)) / tau.angular_derivative)
    a, sigma, res = sols[0]
    phi = egg_geodesic(m, a).compose(DiscAutomorphism(sigma))
    if x0 != 1:
        base = phi
        phi = DiscMap(lambda t: _rotate_egg(np.conj(x0), base(t)),
                      lambda t: _rotate_egg(np.conj(x0), base.derivative(t)), base.tag, base.params)
    value = vals[0]
    if abs(value - closed) > 1e-8 * max(1.0, abs(closed)):
        raise EstimationError(f"geodesic kernel {value} disagrees with the closed form {closed}")
    return PoissonKernelValue(value, "newton", res, phi, float(np.ptp(vals)), closed)


# --------------------------------------------------------------- horofunctions

def pair_distances(D: Domain, a, B) -> np.ndarray:
    """k_D(a, b) for every row b of B, exact whenever a closed form applies."""
    a = as_vector(a, D.dim)
    B = np.atleast_2d(np.asarray(B, dtype=complex))
    if D.kind == "disc":
        return np.atleast_1d(poincare_distance_disc(a[0], B[:, 0]))
    if D.kind == "halfplane":
        return np.atleast_1d(halfplane_distance(a[0], B[:, 0]))
    if D.kind == "ball":
        return np.atleast_1d(ball_distance(a[None, :], B))
    if D.kind == "egg":
        if a[1] == 0:
            return np.atleast_1d(egg_axis_distance(D.param, a[0], B))
        if np.all(B[:, 1] == 0):
            return np.atleast_1d(egg_axis_distance(D.param, B[:, 0], a))
    return np.array([distance_estimate(D, a, b)[0] for b in B])


@dataclass(frozen=True)
class HorofunctionEstimate:
    value: np.ndarray | float
    tail_variation: float
    terms: int
    trace: tuple = ()  # (t_k, first sample's term) pairs


def horofunction(D: Domain, xi, p, w, n_terms: int = N_TERMS, tol: float = 1e-8) -> HorofunctionEstimate:
    """h_{xi,p}(w) as the limit of k(w, g(t)) - k(g(t), p) along g(t) = xi - (1 - t) n.

    ``w`` may be a stack of points; the estimate is vectorized over it.  The
    sequence stops at t = 1 - 2^-n_terms or once two successive terms agree to ``tol``.
    """
    bp = _as_bp(D, xi)
    p = as_vector(p, D.dim)
    W = np.asarray(w, dtype=complex)
    single = W.ndim == 1
    W = np.atleast_2d(W)
    prev = None
    var = math.inf
    k = 0
    trace = []
    for k in range(1, n_terms + 1):
        g = bp.xi - 2.0**-k * bp.normal
        cur = pair_distances(D, g, W) - pair_distances(D, g, p[None, :])[0]
        trace.append((1.0 - 2.0**-k, float(cur[0])))
        if prev is not None:
            var = float(np.max(np.abs(cur - prev)))
            if var < tol:
                break
        prev = cur
    val = float(cur[0]) if single else cur
    return HorofunctionEstimate(val, var, k, tuple(trace))


# -------------------------------------------------------------------- regions

REGION_TOL = 1e-3


@dataclass(frozen=True)
class Membership:
    inside: bool
    indeterminate: bool
    value: float
    threshold: float

    def __bool__(self) -> bool:
        return self.inside


def _membership(value: float, threshold: float) -> Membership:
    return Membership(value < threshold, abs(value - threshold) < REGION_TOL, value, threshold)


def in_horosphere(D: Domain, xi, p, R: float, z) -> Membership:
    if R <= 0:
        raise DomainError("horosphere radius must be positive")
    h = horofunction(D, xi, p, as_vector(z, D.dim)).value
    return _membership(h, math.log(R))


def in_kregion(D: Domain, xi, p, M: float, z) -> Membership:
    if M <= 1:
        raise DomainError("K-region parameter must exceed 1")
    z = as_vector(z, D.dim)
    h = horofunction(D, xi, p, z).value
    k = float(pair_distances(D, p, z[None, :])[0])
    return _membership(h + k, 2 * math.log(M))


def geodesic_ray_distance(D: Domain, gamma: DiscMap, z) -> float:
    """inf over t in [0, 1) of k_D(z, gamma(t))."""
    from scipy.optimize import minimize_scalar

    z = as_vector(z, D.dim)
    ts = np.unique(np.concatenate([np.linspace(0, 0.99, 100), 1 - 2.0 ** -np.arange(7, 41)]))
    vals = pair_distances(D, z, gamma(ts))
    i = int(np.argmin(vals))
    lo, hi = ts[max(i - 1, 0)], ts[min(i + 1, len(ts) - 1)]
    best = float(vals[i])
    if hi > lo:
        res = minimize_scalar(lambda t: float(pair_distances(D, z, gamma(np.array([t])))[0]),
                              bounds=(lo, hi), method="bounded", options={"xatol": 1e-12})
        best = min(best, float(res.fun))
    return best


def in_geodesic_region(D: Domain, gamma: DiscMap, R: float, z) -> Membership:
    if R <= 0:
        raise DomainError("region radius must be positive")
    return _membership(geodesic_ray_distance(D, gamma, z), R)
