"""Convex domains given by a polynomial defining function r (r < 0 inside).

Catalog: unit disc, left half-plane, unit ball B^d, eggs
E_m = {|z_0|^2 + |z_1|^m < 1} and the tube {Re z_0 + (Re z_1)^2 < 0}.
Arbitrary polynomial domains can be loaded from JSON monomial lists.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.optimize import minimize_scalar

from .core import DegenerateBoundaryError, DomainError, as_vector, hermitian, sphere_points
from .poly import RealPoly


@dataclass(frozen=True, eq=False)
class Domain:
    kind: str
    dim: int
    poly: RealPoly
    param: int | None = None
    box: float = 10.0
    bounded: bool = True
    label: str = ""

    @property
    def name(self) -> str:
        if self.label:
            return self.label
        if self.param is not None:
            return f"{self.kind.upper()}:{self.param}"
        return self.kind.upper()

    def r(self, z):
        """Defining function, vectorized over leading axes."""
        fast = _FAST_R.get(self.kind)
        if fast is None:
            return self.poly(z)
        z = np.asarray(z, dtype=complex)
        return fast(z, self.param)

    def gradient(self, z):
        return self.poly.complex_gradient(z)

    def __repr__(self) -> str:
        return f"Domain({self.name})"


def _abs2(z):
    return z.real**2 + z.imag**2


# closed forms equal to the expanded polynomials of the built-in domains, without the per-monomial work
_FAST_R = {
    "disc": lambda z, _: np.sum(_abs2(z), axis=-1) - 1.0,
    "ball": lambda z, _: np.sum(_abs2(z), axis=-1) - 1.0,
    "halfplane": lambda z, _: z[..., 0].real,
    "egg": lambda z, m: _abs2(z[..., 0]) + _abs2(z[..., 1]) ** (m // 2) - 1.0,
    "tube": lambda z, _: z[..., 0].real + z[..., 1].real ** 2,
}


@dataclass(frozen=True)
class BoundaryPoint:
    xi: np.ndarray
    normal: np.ndarray


@dataclass(frozen=True)
class HalfSpaceFunctional:
    """l(z) = <z, normal> + const, with Re l < 0 on the domain."""

    normal: np.ndarray
    const: complex

    def __call__(self, z):
        return hermitian(z, self.normal) + self.const

    def linear(self, v):
        return hermitian(v, self.normal)


# ---------------------------------------------------------------- catalog

def disc() -> Domain:
    r = RealPoly.modulus_power(1, 0, 2) + RealPoly(1, {(0, 0): -1.0})
    return Domain("disc", 1, r, box=1.0)


def halfplane() -> Domain:
    return Domain("halfplane", 1, RealPoly(1, {(1, 0): 1.0}), bounded=False, box=1e3)


def ball(d: int = 2) -> Domain:
    if d < 1:
        raise DomainError("ball dimension must be >= 1")
    r = RealPoly(d, {(0,) * (2 * d): -1.0})
    for j in range(d):
        r = r + RealPoly.modulus_power(d, j, 2)
    return Domain("ball", d, r, param=d, box=1.0)


def egg(m: int) -> Domain:
    if m < 2 or m % 2:
        raise DomainError("egg exponent m must be an even integer >= 2")
    r = RealPoly.modulus_power(2, 0, 2) + RealPoly.modulus_power(2, 1, m)
    r = r + RealPoly(2, {(0, 0, 0, 0): -1.0})
    return Domain("egg", 2, r, param=m, box=1.0)


def tube() -> Domain:
    r = RealPoly(2, {(1, 0, 0, 0): 1.0, (0, 2, 0, 0): 1.0})
    return Domain("tube", 2, r, bounded=False)


def polynomial(dim: int, monomials, name: str = "", box: float = 10.0, bounded: bool = True) -> Domain:
    poly = RealPoly.from_monomials(dim, monomials)
    return Domain("polynomial", dim, poly, box=box, bounded=bounded, label=name or "POLY")


def load_polynomial_domain(source) -> Domain:
    """Load ``{"dim": d, "monomials": [...], "box": B, "bounded": bool}`` from a path or dict."""
    if isinstance(source, (str, Path)):
        cfg = json.loads(Path(source).read_text())
    else:
        cfg = dict(source)
    try:
        dim = int(cfg["dim"])
        monomials = cfg["monomials"]
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed polynomial domain config: {exc}") from None
    return polynomial(dim, monomials, name=cfg.get("name", ""), box=float(cfg.get("box", 10.0)),
                      bounded=bool(cfg.get("bounded", True)))


def parse_domain(text: str) -> Domain:
    """Parse names like ``DISC``, ``HALFPLANE``, ``BALL:3``, ``EGG:4``, ``TUBE``, ``POLY:file.json``."""
    head, _, arg = text.partition(":")
    head = head.strip().upper()
    if head == "DISC":
        return disc()
    if head == "HALFPLANE":
        return halfplane()
    if head == "TUBE":
        return tube()
    if head == "BALL":
        return ball(int(arg or 2))
    if head == "EGG":
        if not arg:
            raise DomainError("EGG needs an exponent, e.g. EGG:4")
        return egg(int(arg))
    if head == "POLY":
        return load_polynomial_domain(arg)
    raise DomainError(f"unknown domain {text!r}")


# ---------------------------------------------------------------- queries

def contains(D: Domain, z) -> bool:
    z = as_vector(z, D.dim)
    return bool(D.r(z) < 0.0)


def _inside(D: Domain, Z) -> np.ndarray:
    Z = np.asarray(Z, dtype=complex)
    ok = D.r(Z) < 0.0
    if not D.bounded:
        ok &= np.linalg.norm(Z, axis=-1) <= D.box
    return ok


def ray_exit(D: Domain, z, u, tol: float = 1e-13) -> float | None:
    """Largest s with z + s u inside D (u is a unit direction); None if the ray leaves the box."""
    z = np.asarray(z, dtype=complex)
    u = np.asarray(u, dtype=complex)
    u = u / np.linalg.norm(u)
    hi = 1.0
    while D.r(z + hi * u) < 0.0:
        hi *= 2.0
        if hi > 4 * D.box:
            return None
    lo = 0.0
    while hi - lo > tol * max(hi, 1e-300):
        mid = 0.5 * (lo + hi)
        if D.r(z + mid * u) < 0.0:
            lo = mid
        else:
            hi = mid
    return lo


def project_to_boundary(D: Domain, z, interior=None, tol: float = 1e-10, max_iter: int = 100) -> np.ndarray:
    """Damped Newton on r along its gradient, falling back to bisection toward ``interior``."""
    q = as_vector(z, D.dim).copy()
    val = float(D.r(q))
    for _ in range(max_iter):
        if abs(val) <= tol:
            return q
        g = D.gradient(q)
        gg = float(np.real(np.vdot(g, g)))
        if gg == 0.0:
            break
        step = 1.0
        while step > 1e-6:
            cand = q - step * val * g / gg
            cv = float(D.r(cand))
            if abs(cv) < abs(val):
                q, val = cand, cv
                break
            step *= 0.5
        else:
            break
    if abs(val) <= tol:
        return q
    # fallback: bisection on the segment from an interior point
    p = np.zeros(D.dim, complex) if interior is None else as_vector(interior, D.dim)
    if D.r(p) >= 0:
        raise DomainError("boundary projection needs an interior reference point")
    u = q - p
    s = ray_exit(D, p, u / np.linalg.norm(u), tol=1e-15)
    if s is None:
        raise DomainError("boundary projection failed")
    return p + s * u / np.linalg.norm(u)


def boundary_point(D: Domain, xi) -> BoundaryPoint:
    """Project ``xi`` onto the boundary and attach its outer unit normal."""
    q = project_to_boundary(D, xi)
    return BoundaryPoint(q, outer_normal(D, q))


def outer_normal(D: Domain, xi) -> np.ndarray:
    xi = as_vector(xi, D.dim)
    if abs(float(D.r(xi))) > 1e-8:
        raise DomainError("point is not on the boundary")
    g = D.gradient(xi)
    n = np.linalg.norm(g)
    if n < 1e-14:
        raise DegenerateBoundaryError("gradient of the defining function vanishes")
    return g / n


def supporting_halfspace(D: Domain, bp: BoundaryPoint) -> HalfSpaceFunctional:
    n = bp.normal / np.linalg.norm(bp.normal)
    return HalfSpaceFunctional(n, -complex(hermitian(bp.xi, n)))


def _kkt_newton(D: Domain, z, e0, max_iter: int = 60):
    """Solve e + mu * grad r(z+e) = 0, r(z+e) = 0 for the offset e (real 2d-vector)."""
    d = D.dim
    zr = np.concatenate([z.real, z.imag])

    def pt(e):
        w = zr + e
        return w[:d] + 1j * w[d:]

    e = e0.copy()
    g = D.poly.real_gradient(pt(e))
    gg = float(g @ g)
    if gg == 0.0:
        return None
    mu = -float(e @ g) / gg
    last = np.inf
    for it in range(max_iter):
        q = pt(e)
        g = D.poly.real_gradient(q)
        F = np.concatenate([e + mu * g, [float(D.r(q))]])
        H = D.poly.real_hessian(q)
        J = np.zeros((2 * d + 1, 2 * d + 1))
        J[: 2 * d, : 2 * d] = np.eye(2 * d) + mu * H
        J[: 2 * d, 2 * d] = g
        J[2 * d, : 2 * d] = g
        try:
            step = np.linalg.solve(J, -F)
        except np.linalg.LinAlgError:
            return None
        e = e + step[: 2 * d]
        mu = mu + step[2 * d]
        size = np.linalg.norm(step[: 2 * d])
        # offsets cannot be resolved below the rounding of z itself
        if size <= 1e-14 * np.linalg.norm(e) + 4e-16 * (1 + np.linalg.norm(zr)):
            break
        if it > 8 and size >= last:
            break
        last = size
    q = pt(e)
    if not np.isfinite(e).all() or abs(float(D.r(q))) > 1e-9 or mu > 0:
        return None
    return q, float(np.linalg.norm(e))


def nearest_boundary_point(D: Domain, z) -> tuple[np.ndarray, float]:
    """Nearest boundary point and the distance, by Newton on the optimality conditions."""
    z = as_vector(z, D.dim)
    if not contains(D, z):
        raise DomainError("point outside the domain")
    if D.kind in ("disc", "ball") and np.any(z != 0):
        nz = float(np.linalg.norm(z))
        return z / nz, 1.0 - nz
    if D.kind == "halfplane":
        return np.array([1j * z[0].imag]), float(-z[0].real)
    d = D.dim
    best = None
    candidates = []
    g = D.gradient(z)
    if np.linalg.norm(g) > 0:
        s = ray_exit(D, z, g / np.linalg.norm(g))
        if s is not None:
            candidates.append(s * g / np.linalg.norm(g))
    res = None
    if candidates:
        c = candidates[0]
        res = _kkt_newton(D, z, np.concatenate([c.real, c.imag]))
        if res is not None:
            best = res
    # deep points: try coordinate rays as extra starts and as upper bounds
    if best is None or best[1] > 1e-2:
        eye = np.eye(d)
        for k in range(d):
            for u in (eye[k], -eye[k], 1j * eye[k], -1j * eye[k]):
                s = ray_exit(D, z, u)
                if s is None:
                    continue
                q = z + s * u
                if best is None or s < best[1]:
                    best = (q, s)
                res = _kkt_newton(D, z, np.concatenate([(s * u).real, (s * u).imag]))
                if res is not None and res[1] < best[1]:
                    best = res
    if best is None:
        raise DomainError("could not locate a boundary point within the bounding box")
    return best


def boundary_distance(D: Domain, z) -> float:
    """Euclidean distance to the boundary; exact for disc, half-plane and ball."""
    z = as_vector(z, D.dim)
    if not contains(D, z):
        raise DomainError("point outside the domain")
    if D.kind in ("disc", "ball"):
        return float(1.0 - np.linalg.norm(z))
    if D.kind == "halfplane":
        return float(-z[0].real)
    if D.kind == "egg" and z[1] == 0:
        # the unit ball lies inside the egg and touches it at (z_0/|z_0|, 0)
        return float(1.0 - abs(z[0]))
    if D.kind == "tube":
        return _tube_distance(z[0].real, z[1].real)
    return nearest_boundary_point(D, z)[1]


def _tube_distance(a: float, b: float) -> float:
    # the tube depends on real parts only: distance from (a, b) to the parabola x = -y^2
    roots = np.roots([4.0, 0.0, 4.0 * a + 2.0, -2.0 * b])
    u = roots[np.abs(roots.imag) < 1e-9].real
    return float(np.sqrt(np.min((u**2 + a) ** 2 + (u - b) ** 2)))


def _circle_max(D: Domain, z, u, rho, angles):
    return np.max(D.r(z[None, :] + rho * np.exp(1j * angles)[:, None] * u[None, :]))


def _circle_ok(D: Domain, z, u, rho, angles, refine: bool) -> bool:
    pts = z[None, :] + rho * np.exp(1j * angles)[:, None] * u[None, :]
    vals = D.r(pts)
    if not D.bounded and np.any(np.linalg.norm(pts, axis=1) > D.box):
        return False
    if np.any(vals >= 0):
        return False
    if not refine:
        return True
    # check between samples around the worst few angles
    h = angles[1] - angles[0]
    for k in np.argsort(vals)[-3:]:
        f = lambda th: -float(D.r(z + rho * np.exp(1j * th) * u))
        res = minimize_scalar(f, bounds=(angles[k] - h, angles[k] + h), method="bounded",
                              options={"xatol": 1e-12})
        if -res.fun >= 0:
            return False
    return True


def _cheb_inverse(n: int):
    s = 0.5 * (1 - np.cos(np.pi * (np.arange(n) + 0.5) / n))
    return s, np.linalg.inv(np.vander(s, n, increasing=True))


_CHEB: dict = {}


def _smallest_roots(coef: np.ndarray) -> np.ndarray:
    """Smallest root in (0, 1] of each row of increasing-order coefficients, inf if none."""
    n_rows, n = coef.shape
    scale = np.max(np.abs(coef), axis=1)
    out = np.full(n_rows, np.inf)
    big = np.abs(coef) > 1e-11 * scale[:, None]
    eff = np.where(big.any(axis=1), n - 1 - np.argmax(big[:, ::-1], axis=1), 0)
    for deg in np.unique(eff):
        if deg == 0:
            continue
        rows = np.nonzero(eff == deg)[0]
        c = coef[rows, : deg + 1]
        comp = np.zeros((len(rows), deg, deg))
        comp[:, 0, :] = -c[:, deg - 1::-1] / c[:, deg : deg + 1]
        if deg > 1:
            comp[:, np.arange(1, deg), np.arange(deg - 1)] = 1.0
        rts = np.linalg.eigvals(comp)
        good = (np.abs(rts.imag) <= 1e-7) & (rts.real > 0) & (rts.real <= 1 + 1e-12)
        out[rows] = np.where(good, rts.real, np.inf).min(axis=1)
    return out


def ray_exits_batch(D: Domain, C, U, T: float) -> np.ndarray:
    """Exit distance of each ray C_k + t U_k (unit U_k) from D, or inf beyond t = T.

    Along a ray r is a polynomial of known degree, so it is interpolated at
    Chebyshev nodes and the exits come from one batched eigenvalue solve.
    """
    C = np.asarray(C, dtype=complex)
    U = np.asarray(U, dtype=complex)
    n = max(D.poly.degree, 1) + 1
    if n not in _CHEB:
        _CHEB[n] = _cheb_inverse(n)
    nodes, inv = _CHEB[n]
    pts = C[:, None, :] + (T * nodes)[None, :, None] * U[:, None, :]
    coef = D.r(pts) @ inv.T
    out = T * _smallest_roots(coef)
    if not D.bounded:
        b = np.real(hermitian(C, U))
        out = np.minimum(out, -b + np.sqrt(np.maximum(b**2 - (np.sum(np.abs(C) ** 2, axis=1) - D.box**2), 0)))
    return out


def _ray_exits_poly(D: Domain, z, u, P, thetas) -> np.ndarray:
    """Smallest positive root of t -> r(z + t e^{i theta} u) for each theta (inf if none)."""
    c, s = np.cos(thetas), np.sin(thetas)
    deg = P.shape[0] + P.shape[1] - 2
    coef = np.zeros((len(thetas), deg + 1))
    for i, j in zip(*np.nonzero(P)):
        coef[:, i + j] += P[i, j] * c**i * s**j
    out = np.full(len(thetas), np.inf)
    scale = np.max(np.abs(coef), axis=1, keepdims=True)
    while deg > 0 and np.all(np.abs(coef[:, deg]) <= 1e-14 * scale[:, 0]):
        deg -= 1
    if deg == 0:
        pass
    elif np.all(np.abs(coef[:, deg]) > 1e-10 * scale[:, 0]):
        # batched companion matrices
        comp = np.zeros((len(thetas), deg, deg))
        comp[:, 0, :] = -coef[:, deg - 1::-1] / coef[:, deg : deg + 1]
        comp[:, np.arange(1, deg), np.arange(deg - 1)] = 1.0
        rts = np.linalg.eigvals(comp)
        good = (np.abs(rts.imag) <= 1e-9 * np.maximum(1.0, np.abs(rts))) & (rts.real > 0)
        out = np.where(good, rts.real, np.inf).min(axis=1)
    else:
        for k in range(len(thetas)):
            row = np.trim_zeros(coef[k, ::-1], "f")
            if len(row) < 2:
                continue
            rts = np.roots(row)
            real = rts.real[(np.abs(rts.imag) <= 1e-9 * np.maximum(1.0, np.abs(rts))) & (rts.real > 0)]
            if real.size:
                out[k] = real.min()
    if not D.bounded:
        # the truncating ball of radius D.box
        b = np.real(np.exp(-1j * thetas) * hermitian(z, u))
        out = np.minimum(out, -b + np.sqrt(b**2 - (np.vdot(z, z).real - D.box**2)))
    return out


def _exact_disc_radius(D: Domain, z, u, n_angles: int) -> float:
    P = D.poly.restrict_to_line(z, u)
    th = 2 * np.pi * np.arange(n_angles) / n_angles
    ex = _ray_exits_poly(D, z, u, P, th)
    k = int(np.argmin(ex))
    if not np.isfinite(ex[k]):
        return math.inf
    h = th[1] - th[0]
    f = lambda t: float(_ray_exits_poly(D, z, u, P, np.array([t]))[0])
    res = minimize_scalar(f, bounds=(th[k] - h, th[k] + h), method="bounded", options={"xatol": 1e-13})
    return float(min(ex[k], res.fun))


def directional_boundary_distance(D: Domain, z, v, n_angles: int = 64, rtol: float = 1e-8,
                                  refine: bool = False, cap: float | None = None) -> float:
    """Radius of the largest affine disc z + zeta*rho*v/|v| (|zeta|<1) inside D, by bisection.

    ``refine`` also checks the circle between sample angles, which makes the
    radius safe to use in upper bounds.
    """
    z = as_vector(z, D.dim)
    v = as_vector(v, D.dim)
    if not contains(D, z):
        raise DomainError("point outside the domain")
    nv = np.linalg.norm(v)
    if nv == 0:
        raise DomainError("zero direction")
    u = v / nv
    angles = 2 * np.pi * np.arange(n_angles) / n_angles
    top = 4 * D.box if cap is None else cap
    if refine:
        # exits along each ray are polynomial roots; the radius is their minimum over the angle
        rho = min(_exact_disc_radius(D, z, u, n_angles), top) * (1 - 1e-12)
        if _circle_ok(D, z, u, rho, angles, True):
            return rho
    ok = lambda rho: _circle_ok(D, z, u, rho, angles, False)
    lo, hi = 0.0, 1.0
    if ok(hi):
        lo = hi
        while True:
            hi = 2 * lo
            if not ok(hi):
                break
            lo = hi
            if lo > top:
                return lo
    else:
        hi = 1.0
        lo = 0.5
        while not ok(lo):
            hi = lo
            lo *= 0.5
            if lo < 1e-300:
                raise DomainError("no feasible disc radius")
    while hi - lo > rtol * lo:
        mid = 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
    if refine:
        # the sampled radius can overshoot between angles; back off until the full circle is inside
        step = 4 * max(rtol, 1e-15)
        while not _circle_ok(D, z, u, lo, angles, True):
            lo *= 1.0 - step
            step = min(2 * step, 0.5)
            if lo < 1e-300:
                raise DomainError("no feasible disc radius")
    return lo


def sample_interior(D: Domain, n: int, seed: int = 42, box: float | None = None) -> np.ndarray:
    """Scrambled Halton points of the cube [-B, B]^{2d} that fall in D, in sequence order."""
    from scipy.stats import qmc

    engine = qmc.Halton(d=2 * D.dim, scramble=True, seed=seed)
    B = box if box is not None else (1.0 if D.bounded and D.box <= 1 else D.box)
    out = []
    while sum(len(o) for o in out) < n:
        raw = B * (2.0 * engine.random(4 * n) - 1.0)
        Z = raw[:, : D.dim] + 1j * raw[:, D.dim :]
        out.append(Z[_inside(D, Z)])
    return np.concatenate(out)[:n]


def midpoint_convexity_violations(D: Domain, n: int = 10_000, seed: int = 42) -> int:
    """Count sampled pairs in D whose midpoint is not in D."""
    Z = sample_interior(D, 2 * n, seed)
    mid = 0.5 * (Z[:n] + Z[n:])
    return int(np.sum(D.r(mid) >= 0))


def quasi_random_contacts(D: Domain, z, count: int = 16, seed: int = 42) -> list[BoundaryPoint]:
    """Boundary points hit by rays from ``z`` in quasi-random directions."""
    z = as_vector(z, D.dim)
    out = []
    for u in sphere_points(count, D.dim, seed):
        s = ray_exit(D, z, u)
        if s is None:
            continue
        q = z + s * u
        try:
            out.append(BoundaryPoint(q, outer_normal(D, q)))
        except DomainError:
            continue
    return out
