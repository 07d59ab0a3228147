"""Two-sided bounds for the Kobayashi distance and metric on convex domains.

Lower bounds come from supporting half-spaces (every affine functional with
Re l < 0 on D is a holomorphic map into the half-plane, so it contracts the
distance).  Upper bounds come from analytic discs inside D: affine discs in
the complex line through the two points, and polynomial discs improved by a
Nelder-Mead search.

Closed forms are available for the disc, the half-plane and the ball.  On the
egg E_m the distance from any point of the axis {z_1 = 0} is also explicit:
the automorphisms of E_m act transitively on the axis and E_m is balanced, so
k(0, z) = k_disc(0, mu(z)) with mu the Minkowski functional.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .core import (
    DomainError,
    as_vector,
    halfplane_distance,
    hermitian,
    poincare_distance_disc,
    sphere_points,
)
from .domains import (
    BoundaryPoint,
    Domain,
    _inside,
    contains,
    directional_boundary_distance,
    nearest_boundary_point,
    outer_normal,
    ray_exit,
    ray_exits_batch,
)

SLACK = 1e-12


def _cv(v):
    return [[float(np.real(x)), float(np.imag(x))] for x in np.atleast_1d(v)]


def _from_cv(pairs):
    return np.array([complex(a, b) for a, b in pairs])


@dataclass
class Interval:
    lo: float
    hi: float
    lo_witness: dict = field(default_factory=dict)
    hi_witness: dict = field(default_factory=dict)

    def __post_init__(self):
        if not (np.isfinite(self.lo) and np.isfinite(self.hi)):
            raise ValueError("interval ends must be finite")
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, x: float, tol: float = 0.0) -> bool:
        return self.lo - tol <= x <= self.hi + tol

    def as_dict(self) -> dict:
        return {"lo": self.lo, "hi": self.hi, "lo_witness": self.lo_witness,
                "hi_witness": self.hi_witness}


def _outward(lo: float, hi: float) -> tuple[float, float]:
    return lo - SLACK * (1 + abs(lo)), hi + SLACK * (1 + abs(hi))


# ------------------------------------------------------------------ oracles

def ball_distance(z, w):
    """Closed-form distance on the unit ball, vectorized over leading axes."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    nz = np.linalg.norm(z, axis=-1)
    nw = np.linalg.norm(w, axis=-1)
    if np.any(nz >= 1) or np.any(nw >= 1):
        raise DomainError("point outside the unit ball")
    den = np.abs(1.0 - hermitian(z, w)) ** 2
    diff = z - w
    # |1-<z,w>|^2 - (1-|z|^2)(1-|w|^2) = |z-w|^2 - |(z-w) ^ w|^2 (Lagrange identity)
    d2 = np.sum(np.abs(diff) ** 2, axis=-1)
    wedge = np.sum(np.abs(diff) ** 2, axis=-1) * nw**2 - np.abs(hermitian(diff, w)) ** 2
    num = np.maximum(d2 - np.maximum(wedge, 0.0), 0.0)
    rho = np.sqrt(num / den)
    one_minus = (1 - nz) * (1 + nz) * (1 - nw) * (1 + nw) / den
    out = np.where(rho == 0, 0.0, 2 * np.log1p(rho) - np.log(one_minus))
    out = np.maximum(out, 0.0)
    return float(out) if out.ndim == 0 else out


def exact_distance(D: Domain, z, w) -> float:
    """Closed-form Kobayashi distance on the disc, half-plane or ball."""
    if D.kind == "disc":
        return poincare_distance_disc(as_vector(z, 1)[0], as_vector(w, 1)[0])
    if D.kind == "halfplane":
        return halfplane_distance(as_vector(z, 1)[0], as_vector(w, 1)[0])
    if D.kind == "ball":
        return ball_distance(as_vector(z, D.dim), as_vector(w, D.dim))
    raise DomainError(f"no closed-form distance for {D.name}")


def _solve_minkowski_log(A, B, g, m):
    """s >= 0 with A*expm1(2s) + B*expm1(m s) = g; then mu = exp(-s)."""
    A, B, g = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (A, B, g)))
    with np.errstate(divide="ignore", invalid="ignore"):
        s0 = g / (2 * A + m * B)
        sa = np.where(A > 0, -0.5 * np.log(A), np.inf)
        sb = np.where(B > 0, -np.log(B) / m, np.inf)
    s = np.minimum(np.minimum(s0, sa), sb)
    s = np.where(np.isfinite(s), s, 0.0)
    for _ in range(200):
        e2 = np.exp(2 * s)
        em = np.exp(m * s)
        F = A * np.expm1(2 * s) + B * np.expm1(m * s) - g
        dF = 2 * A * e2 + m * B * em
        with np.errstate(divide="ignore", invalid="ignore"):
            step = np.where(dF > 0, F / dF, 0.0)
        s = s - step
        if np.all(np.abs(step) <= 1e-15 * np.maximum(s, 1e-300)):
            break
    return s


def egg_axis_distance(m: int, b, w):
    """k_{E_m}((b, 0), w), vectorized over ``b`` (scalars) and ``w`` (..., 2)."""
    b = np.asarray(b, dtype=complex)
    w = np.asarray(w, dtype=complex)
    w0, w1 = w[..., 0], w[..., 1]
    ab = np.abs(b)
    aw0 = np.abs(w0)
    if np.any(ab >= 1):
        raise DomainError("axis point outside the egg")
    rw = (1 - aw0) * (1 + aw0) - np.abs(w1) ** m
    if np.any(rw <= 0):
        raise DomainError("point outside the egg")
    one_b = (1 - ab) * (1 + ab)
    den = 1 - np.conj(b) * w0
    den2 = np.abs(den) ** 2
    A = np.abs((w0 - b) / den) ** 2
    B = np.abs(w1) ** m * one_b / den2
    g = one_b * rw / den2
    s = _solve_minkowski_log(A, B, g, m)
    mu = np.exp(-s)
    with np.errstate(divide="ignore"):
        out = np.where(A + B == 0, 0.0, np.log1p(mu) - np.log(-np.expm1(-s)))
    return float(out) if out.ndim == 0 else out


def egg_minkowski(m: int, z):
    """Minkowski functional of E_m: the mu > 0 with |z_0/mu|^2 + |z_1/mu|^m = 1."""
    z = np.asarray(z, dtype=complex)
    A = np.abs(z[..., 0]) ** 2
    B = np.abs(z[..., 1]) ** m
    lo = np.full(np.shape(A), -80.0)
    hi = np.full(np.shape(A), 80.0)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        big = A * np.exp(-2 * mid) + B * np.exp(-m * mid) > 1
        lo = np.where(big, mid, lo)
        hi = np.where(big, hi, mid)
    out = np.where(A + B == 0, 0.0, np.exp(0.5 * (lo + hi)))
    return float(out) if np.ndim(out) == 0 else out


def oracle_distance(D: Domain, z, w) -> float | None:
    """Exact distance when a closed form applies, else None."""
    if D.kind in ("disc", "halfplane", "ball"):
        return exact_distance(D, z, w)
    if D.kind == "egg":
        z = as_vector(z, 2)
        w = as_vector(w, 2)
        if z[1] == 0:
            return egg_axis_distance(D.param, z[0], w)
        if w[1] == 0:
            return egg_axis_distance(D.param, w[0], z)
    return None


# ------------------------------------------------------------ lower bounds

def _halfspace_value(ell_z, ell_w) -> float:
    if ell_z.real >= 0 or ell_w.real >= 0:
        return -np.inf
    return halfplane_distance(ell_z, ell_w)


def _contact(D: Domain, q) -> BoundaryPoint | None:
    try:
        return BoundaryPoint(q, outer_normal(D, q))
    except DomainError:
        return None


def _nearest_contact(D: Domain, z) -> BoundaryPoint | None:
    if D.kind in ("disc", "ball"):
        nz = np.linalg.norm(z)
        q = z / nz if nz > 0 else np.eye(D.dim)[0].astype(complex)
        return BoundaryPoint(q, q.copy())
    if D.kind == "halfplane":
        return BoundaryPoint(np.array([1j * z[0].imag]), np.array([1.0 + 0j]))
    try:
        q, _ = nearest_boundary_point(D, z)
    except DomainError:
        return None
    return _contact(D, q)


def ray_exits(D: Domain, z, U) -> np.ndarray:
    """Vectorized exit distances along unit directions U (rows); inf if beyond the box."""
    z = np.asarray(z, dtype=complex)
    U = np.asarray(U, dtype=complex)
    return ray_exits_batch(D, np.broadcast_to(z, U.shape), U, 4.0 * D.box)


def contact_family(D: Domain, points, extra: int = 16, seed: int = 42) -> list[BoundaryPoint]:
    """Nearest contacts of ``points`` plus quasi-random ray contacts from their centroid."""
    out = []
    for p in points:
        bp = _nearest_contact(D, p)
        if bp is not None:
            out.append(bp)
    if extra:
        c = np.mean(np.array(points), axis=0)
        U = sphere_points(extra, D.dim, seed)
        S = ray_exits(D, c, U)
        for s, u in zip(S, U):
            if np.isfinite(s):
                bp = _contact(D, c + s * u)
                if bp is not None:
                    out.append(bp)
    return out


def _functional_lower(D: Domain, z, w, contacts) -> tuple[float, dict]:
    best, wit = 0.0, {"kind": "trivial"}
    for bp in contacts:
        n = bp.normal
        lz = complex(hermitian(z - bp.xi, n))
        lw = complex(hermitian(w - bp.xi, n))
        val = _halfspace_value(lz, lw)
        if val > best:
            best, wit = val, {"kind": "halfspace", "xi": _cv(bp.xi), "normal": _cv(n)}
    return best, wit


# ------------------------------------------------------------ upper bounds

def _radius_cap(D: Domain, L: float = 0.0) -> float:
    return 4.0 * D.box if D.bounded else 64.0 * max(D.box, L)


def _disc_radii(D: Domain, centers, u, n_angles: int = 64, top: float | None = None) -> np.ndarray:
    """Largest radius rho_i with c_i + rho_i e^{i theta} u inside D at the sampled angles."""
    C = np.asarray(centers, dtype=complex)
    k = len(C)
    top = _radius_cap(D) if top is None else top
    ring = np.exp(2j * np.pi * np.arange(n_angles) / n_angles)[:, None] * u[None, :]
    starts = np.repeat(C, n_angles, axis=0)
    dirs = np.tile(ring, (k, 1))
    ex = ray_exits_batch(D, starts, dirs, top).reshape(k, n_angles)
    rho = np.minimum(ex.min(axis=1), top)
    return np.where(_inside(D, C), rho, 0.0)


def _slice_value(L, zeta, rho):
    # the disc c + rho t u with c = z + zeta u meets z at t = -zeta/rho and w at (L - zeta)/rho
    with np.errstate(divide="ignore", invalid="ignore"):
        p = -zeta / rho
        q = (L - zeta) / rho
    ok = (rho > 0) & (np.abs(p) < 1) & (np.abs(q) < 1)
    out = np.full(np.shape(zeta), np.inf)
    if np.any(ok):
        out[ok] = poincare_distance_disc(p[ok], q[ok])
    return out


def affine_slice_bound(D: Domain, z, w, rounds: int = 5, n: int = 7) -> tuple[float, dict]:
    """Best round disc in the complex line through z and w, found by a zooming grid of centres."""
    e = w - z
    L = np.linalg.norm(e)
    u = e / L
    mid = z + 0.5 * e
    dirs = np.array([u, -u, 1j * u, -1j * u])
    ext = ray_exits(D, mid, dirs)
    top = _radius_cap(D, L)
    ext = np.where(np.isfinite(ext), ext, top / 4)
    centre, half = 0.5 * L + 0j, float(np.max(ext))
    g = np.linspace(-1, 1, n)
    grid = (g[:, None] + 1j * g[None, :]).ravel()
    # extra seeds: centres pushed inward along the normal at the nearest contact of the midpoint
    seeds = np.zeros(0, complex)
    bp = _nearest_contact(D, mid)
    if bp is not None:
        inward = -complex(hermitian(bp.normal, u))
        if abs(inward) > 1e-12:
            seeds = 0.5 * L + np.geomspace(1e-2 * L, top / 4, 16) * inward / abs(inward)
    # chord midpoints along u and iu in turn; exact centre for round slices
    zc = 0.5 * L + 0j
    chords = []
    for k in range(6):
        dirn = u if k % 2 == 0 else 1j * u
        ex = ray_exits(D, z + zc * u, np.array([dirn, -dirn]))
        if not np.all(np.isfinite(ex)):
            break
        zc += 0.5 * (ex[0] - ex[1]) * (1.0 if k % 2 == 0 else 1j)
        chords.append(zc)
    seeds = np.concatenate([seeds, chords])
    best = (np.inf, centre)
    ranked = []
    for rnd in range(rounds):
        zeta = np.concatenate([centre + half * grid, [0.5 * L]] + ([seeds] if rnd == 0 else []))
        # coarse radii only rank the centres; the chosen one is re-measured below
        radii = _disc_radii(D, z[None, :] + zeta[:, None] * u[None, :], u, n_angles=32, top=top)
        # for convex D the inscribed 32-gon holds the disc of radius rho cos(pi/32); rank by that first
        safe = _slice_value(L, zeta, radii * np.cos(np.pi / 32))
        vals = _slice_value(L, zeta, radii)
        fin = np.isfinite(vals)
        ranked.extend(zip(safe[fin], vals[fin], zeta[fin]))
        key = np.where(np.isfinite(safe), safe, vals + 1e6)
        k = int(np.argmin(key))
        if key[k] < best[0]:
            best = (key[k], zeta[k])
        centre = best[1]
        half /= 3.0
    ranked.sort(key=lambda item: (item[0], item[1]))
    # a centre near a thin feasible sliver can lose a point once the radius is certified
    for _, _, zeta in ranked[:8]:
        c = z + zeta * u
        if not contains(D, c):
            continue
        rho = directional_boundary_distance(D, c, u, refine=True, rtol=1e-10, cap=top)
        val = float(_slice_value(L, np.array([zeta]), np.array([rho]))[0])
        if np.isfinite(val):
            wit = {"kind": "affine_disc", "center": _cv(c), "direction": _cv(u), "radius": rho,
                   "z_coord": _cv(-zeta / rho), "w_coord": _cv((L - zeta) / rho)}
            return val, wit
    return np.inf, {"kind": "none"}


def distance_bounds(D: Domain, z, w, use_oracle: bool = True, contacts: int = 16,
                    seed: int = 42) -> Interval:
    """Certified interval for k_D(z, w)."""
    z = as_vector(z, D.dim)
    w = as_vector(w, D.dim)
    if not (contains(D, z) and contains(D, w)):
        raise DomainError("points must lie in the domain")
    if np.array_equal(z, w):
        return Interval(0.0, 0.0, {"kind": "coincident"}, {"kind": "coincident"})
    if use_oracle:
        val = oracle_distance(D, z, w)
        if val is not None:
            lo, hi = _outward(val, val)
            wit = {"kind": "oracle", "domain": D.name}
            return Interval(max(lo, 0.0), hi, wit, wit)
    fam = contact_family(D, [z, w, 0.5 * (z + w)], extra=contacts, seed=seed)
    lo, lo_wit = _functional_lower(D, z, w, fam)
    hi, hi_wit = affine_slice_bound(D, z, w)
    if not np.isfinite(hi):
        raise DomainError("no admissible disc through the two points was found")
    lo, hi = _outward(lo, hi)
    return Interval(max(lo, 0.0), hi, lo_wit, hi_wit)


def metric_bounds(D: Domain, z, v, contacts: int = 16, seed: int = 42) -> Interval:
    """Certified interval for the Kobayashi-Royden metric kappa_D(z, v)."""
    z = as_vector(z, D.dim)
    v = as_vector(v, D.dim)
    if not contains(D, z):
        raise DomainError("point outside the domain")
    nv = np.linalg.norm(v)
    if nv == 0:
        zero = {"kind": "zero_vector"}
        return Interval(0.0, 0.0, zero, zero)
    u = v / nv
    rho = directional_boundary_distance(D, z, u, refine=True)
    hi = 2 * nv / rho
    fam = contact_family(D, [z], extra=contacts, seed=seed)
    # contacts where the extremal affine disc touches the boundary
    ring = np.exp(2j * np.pi * np.arange(64) / 64)
    vals = D.r(z[None, :] + 1.0001 * rho * ring[:, None] * u[None, :])
    for k in np.argsort(vals)[-4:]:
        dirn = ring[k] * u
        s = ray_exit(D, z, dirn)
        if s is not None:
            bp = _contact(D, z + s * dirn)
            if bp is not None:
                fam.append(bp)
    lo, lo_wit = 0.0, {"kind": "trivial"}
    for bp in fam:
        ell = complex(hermitian(z - bp.xi, bp.normal))
        if ell.real >= 0:
            continue
        val = abs(complex(hermitian(v, bp.normal))) / abs(ell.real)
        if val > lo:
            lo, lo_wit = val, {"kind": "halfspace", "xi": _cv(bp.xi), "normal": _cv(bp.normal)}
    lo, hi = _outward(lo, hi)
    return Interval(max(lo, 0.0), hi, lo_wit,
                    {"kind": "affine_disc", "center": _cv(z), "direction": _cv(u), "radius": rho})


# ------------------------------------------------------- polynomial discs

@dataclass(frozen=True, eq=False)
class AnalyticDisc:
    """Polynomial map zeta -> sum_k c_k zeta^k into C^d."""

    coefficients: np.ndarray  # shape (N+1, d)

    @property
    def degree(self) -> int:
        return self.coefficients.shape[0] - 1

    def __call__(self, zeta):
        zeta = np.asarray(zeta, dtype=complex)
        powers = zeta[..., None] ** np.arange(self.degree + 1)
        return powers @ self.coefficients

    def derivative(self, zeta):
        zeta = np.asarray(zeta, dtype=complex)
        k = np.arange(1, self.degree + 1)
        powers = zeta[..., None] ** (k - 1)
        return (powers * k) @ self.coefficients[1:]

    def shrink(self, s: float) -> "AnalyticDisc":
        return AnalyticDisc(self.coefficients * (s ** np.arange(self.degree + 1))[:, None])

    def contained_in(self, D: Domain, samples: int = 256, radius: float = 0.999) -> bool:
        ring = radius * np.exp(2j * np.pi * np.arange(samples) / samples)
        return bool(np.all(_inside(D, self(ring))))


_RINGS: dict = {}


def _ring_powers(samples: int, N: int) -> np.ndarray:
    key = (samples, N)
    if key not in _RINGS:
        th = np.exp(2j * np.pi * np.arange(samples) / samples)
        _RINGS[key] = th[:, None] ** np.arange(N + 1)
    return _RINGS[key]


def _max_shrink(D: Domain, C: np.ndarray, samples: int, steps: int) -> float:
    """Largest s <= 1 (to bisection accuracy) with C(s e^{i theta_j}) in D for all samples."""
    N = C.shape[0] - 1
    pw = _ring_powers(samples, N)
    k = np.arange(N + 1)

    def ok(s):
        return np.all(_inside(D, pw @ (C * (s**k)[:, None])))

    if ok(1.0):
        return 1.0
    lo, hi = 0.0, 1.0
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo


CERT_SAMPLES = 8192


def _certified_shrink(D: Domain, C: np.ndarray) -> float:
    """Shrink factor s with P(s zeta) inside D on a dense ring, using the smallest safe margin."""
    raw = _max_shrink(D, C, 256, 50)
    P = AnalyticDisc(C)
    for eps in (1e-9, 1e-7, 1e-5, 1e-3, 1e-2):
        s = raw * (1 - eps)
        if P.shrink(s).contained_in(D, samples=CERT_SAMPLES, radius=1.0):
            return s
    return 0.0


def _interpolating(z, w, p, q, tail: np.ndarray) -> np.ndarray:
    """Coefficients with prescribed c_2.. such that P(p) = z and P(q) = w."""
    N = tail.shape[0] + 1
    k = np.arange(2, N + 1)
    rz = z - (p**k) @ tail
    rw = w - (q**k) @ tail
    c1 = (rw - rz) / (q - p)
    c0 = rz - c1 * p
    return np.vstack([c0, c1, tail])


def _preimage(P: AnalyticDisc, target, guess) -> complex:
    zeta = complex(guess)
    for _ in range(50):
        f = P(zeta) - target
        df = P.derivative(zeta)
        step = np.vdot(df, f) / max(np.vdot(df, df).real, 1e-300)
        zeta -= step
        if abs(step) < 1e-15:
            break
    return zeta


def _unpack(x, N: int, d: int):
    p = x[0] + 1j * x[1]
    q = x[2] + 1j * x[3]
    t = x[4:].reshape(-1, 2)
    return p, q, (t[:, 0] + 1j * t[:, 1]).reshape(N - 1, d)


def _pack(p, q, tail):
    return np.concatenate([[p.real, p.imag, q.real, q.imag],
                           np.column_stack([tail.real, tail.imag]).ravel()])


def _slsqp_search(D, z, w, p, q, tail, N, maxiter, samples=128):
    """Minimize k_disc(p, q) subject to r(P(e^{i theta_j})) <= 0 at circle samples."""
    d = D.dim
    pw = _ring_powers(samples, N)

    def obj(x):
        p, q, _ = _unpack(x, N, d)
        if max(abs(p), abs(q)) >= 1:
            return 50.0
        return poincare_distance_disc(p, q)

    def cons(x):
        p, q, tail = _unpack(x, N, d)
        if abs(p - q) < 1e-12:
            return np.full(samples, -1.0)
        return -D.r(pw @ _interpolating(z, w, p, q, tail))

    x0 = _pack(p, q, tail)
    bounds = [(-0.999, 0.999)] * 4 + [(None, None)] * (len(x0) - 4)
    with np.errstate(all="ignore"), warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        res = minimize(obj, x0, method="SLSQP", bounds=bounds,
                       constraints=[{"type": "ineq", "fun": cons}],
                       options={"maxiter": maxiter, "ftol": 1e-10})
    return _unpack(res.x, N, d) if np.all(np.isfinite(res.x)) else (p, q, tail)


def _simplex_search(D, z, w, p, q, tail, stages, budget):
    """Nelder-Mead on the shrink-penalized bound, growing the degree in stages."""
    d = D.dim

    def objective_factory(N, samples=256, steps=16):
        def f(x):
            p, q, tail = _unpack(x, N, d)
            if abs(p - q) < 1e-12:
                return 1e3
            C = _interpolating(z, w, p, q, tail)
            s = 0.999 * _max_shrink(D, C, samples, steps)
            m = max(abs(p), abs(q))
            if s <= 0 or m >= s:
                return 50.0 + m / max(s, 1e-12)
            return poincare_distance_disc(p / s, q / s)
        return f

    dims = [4 + 2 * d * (N - 1) for N in stages]
    for N, nd in zip(stages, dims):
        grown = np.zeros((N - 1, d), complex)
        grown[: min(len(tail), N - 1)] = tail[: N - 1]
        x = _pack(p, q, grown)
        f = objective_factory(N)
        fev = max(50, int(budget * nd / sum(dims)))
        res = minimize(f, x, method="Nelder-Mead",
                       options={"maxfev": fev, "adaptive": True, "xatol": 1e-9, "fatol": 1e-11})
        if res.fun <= f(x):
            x = res.x
        p, q, tail = _unpack(x, N, d)
    return p, q, tail


def refine_distance_upper(D: Domain, z, w, budget: int = 4000, degree: int = 8,
                          initial: Interval | None = None, start: dict | None = None,
                          seed: int = 42, method: str = "slsqp") -> Interval:
    """Improve the upper bound with polynomial discs P of the given degree.

    The disc passes through z and w at free parameters p, q.  ``method="slsqp"``
    minimizes k_disc(p, q) with r(P) <= 0 imposed on circle samples;
    ``method="simplex"`` runs Nelder-Mead on the shrink-penalized bound.  Either
    way the result is certified afterwards: P is shrunk to zeta -> P(s zeta) with
    the largest s keeping 256 circle samples in D, backed off by the smallest
    margin that keeps a dense ring of 8192 samples inside, and the bound is
    k_disc(p/s, q/s).  ``start`` may be a previous
    hi witness (a polynomial disc) to warm-start from.  ``budget`` counts
    objective evaluations for the simplex search and caps SLSQP at budget/40
    iterations.
    """
    z = as_vector(z, D.dim)
    w = as_vector(w, D.dim)
    initial = initial or distance_bounds(D, z, w, use_oracle=False, seed=seed)
    if np.array_equal(z, w):
        return initial
    d = D.dim
    if start is not None and start.get("kind") == "polynomial_disc":
        Cs = _from_cv_matrix(start["coefficients"])
        P = AnalyticDisc(Cs)
        p = _preimage(P, z, complex(*start["z_param"]))
        q = _preimage(P, w, complex(*start["w_param"]))
        N0 = P.degree
        tail = np.zeros((max(degree, N0) - 1, d), complex)
        tail[: N0 - 1] = Cs[2:]
        stages = [max(degree, N0)]
    else:
        hw = initial.hi_witness
        if not (hw.get("kind") == "affine_disc" and "z_coord" in hw):
            _, hw = affine_slice_bound(D, z, w)
        p = complex(*hw["z_coord"][0])
        q = complex(*hw["w_coord"][0])
        tail = np.zeros((0, d), complex)
        stages = sorted({min(2, degree), min(4, degree), degree})
    if method == "slsqp":
        N = stages[-1]
        grown = np.zeros((N - 1, d), complex)
        grown[: min(len(tail), N - 1)] = tail[: N - 1]
        p, q, tail = _slsqp_search(D, z, w, p, q, grown, N, max(10, budget // 40))
    elif method == "simplex":
        p, q, tail = _simplex_search(D, z, w, p, q, tail, stages, budget)
    else:
        raise ValueError(f"unknown refinement method {method!r}")
    best = initial.hi
    wit = initial.hi_witness
    if abs(p - q) > 1e-12:
        C = _interpolating(z, w, p, q, tail)
        s = _certified_shrink(D, C)
        if s > max(abs(p), abs(q)):
            val = poincare_distance_disc(p / s, q / s)
            _, val = _outward(0.0, val)
            if val < best:
                best = val
                wit = {"kind": "polynomial_disc", "coefficients": [_cv(c) for c in C],
                       "z_param": [p.real, p.imag], "w_param": [q.real, q.imag], "shrink": s}
    return Interval(initial.lo, max(best, initial.lo), initial.lo_witness, wit)


def _from_cv_matrix(rows):
    return np.array([[complex(a, b) for a, b in row] for row in rows])


def verify_witness(D: Domain, z, w, interval: Interval, tol: float = 1e-10) -> bool:
    """Re-evaluate both witnesses and check they reproduce the interval ends."""
    z = as_vector(z, D.dim)
    w = as_vector(w, D.dim)
    lw, hw = interval.lo_witness, interval.hi_witness
    if lw.get("kind") == "oracle":
        val = oracle_distance(D, z, w)
        return val is not None and interval.contains(val, tol)
    ok = True
    if lw.get("kind") == "halfspace":
        xi, n = _from_cv(lw["xi"]), _from_cv(lw["normal"])
        val = _halfspace_value(complex(hermitian(z - xi, n)), complex(hermitian(w - xi, n)))
        ok &= abs(val - interval.lo) <= tol * (1 + abs(val)) + 2 * SLACK * (1 + abs(val))
    if hw.get("kind") == "affine_disc" and "z_coord" in hw:
        c, u, rho = _from_cv(hw["center"]), _from_cv(hw["direction"]), hw["radius"]
        ring = np.exp(2j * np.pi * np.arange(256) / 256)
        ok &= bool(np.all(_inside(D, c[None, :] + rho * ring[:, None] * u[None, :])))
        pz, pw = complex(*hw["z_coord"][0]), complex(*hw["w_coord"][0])
        ok &= np.allclose(c + rho * pz * u, z, atol=1e-9) and np.allclose(c + rho * pw * u, w, atol=1e-9)
        val = poincare_distance_disc(pz, pw)
        ok &= abs(val - interval.hi) <= tol * (1 + abs(val)) + 2 * SLACK * (1 + abs(val))
    if hw.get("kind") == "polynomial_disc":
        P = AnalyticDisc(_from_cv_matrix(hw["coefficients"]))
        p, q, s = complex(*hw["z_param"]), complex(*hw["w_param"]), hw["shrink"]
        ok &= np.allclose(P(p), z, atol=1e-9) and np.allclose(P(q), w, atol=1e-9)
        ok &= P.shrink(s).contained_in(D, samples=CERT_SAMPLES, radius=1.0)
        val = poincare_distance_disc(p / s, q / s)
        ok &= abs(val - interval.hi) <= tol * (1 + abs(val)) + 2 * SLACK * (1 + abs(val))
    return bool(ok)


def gromov_product(D: Domain, z, w, p, **kw) -> Interval:
    """(z|w)_p = (k(z,p) + k(w,p) - k(z,w)) / 2 in interval arithmetic."""
    a = distance_bounds(D, z, p, **kw)
    b = distance_bounds(D, w, p, **kw)
    c = distance_bounds(D, z, w, **kw)
    lo = 0.5 * (a.lo + b.lo - c.hi)
    hi = 0.5 * (a.hi + b.hi - c.lo)
    lo, hi = _outward(lo, hi)
    wit = {"kind": "gromov", "parts": [a.as_dict(), b.as_dict(), c.as_dict()]}
    return Interval(lo, hi, wit, wit)


def distance_estimate(D: Domain, z, w) -> tuple[float, bool]:
    """Exact distance when available, else the midpoint of the certified interval."""
    val = oracle_distance(D, z, w)
    if val is not None:
        return val, True
    return distance_bounds(D, z, w, use_oracle=False).mid, False
