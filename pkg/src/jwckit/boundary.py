"""Approach curves, K/K' classification, exponent fits, dilation and the Julia inequality."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import DomainError, EstimationError, as_vector, halton, hermitian
from .domains import BoundaryPoint, Domain, _inside, boundary_distance, boundary_point, sample_interior
from .geodesics import horofunction, pair_distances, poisson_kernel
from .maps import HolomorphicMap, contact_point_check, normal_segment
from .multitype import MultitypeData, multitype_basis

N_SAMPLES = 40
SLOPE_TOL = 0.02
R2_MIN = 0.9


# ----------------------------------------------------------------- curves

@dataclass(frozen=True, eq=False)
class ApproachCurve:
    """Samples z(t_k), t_k = 1 - r 2^-k, of a curve ending at ``xi``."""

    domain: Domain
    xi: BoundaryPoint
    kind: str
    params: dict
    t: np.ndarray
    z: np.ndarray

    @property
    def gap(self) -> np.ndarray:
        return 1.0 - self.t

    def deltas(self) -> np.ndarray:
        return np.array([boundary_distance(self.domain, z) for z in self.z])

    def samples(self) -> list:
        return list(zip(self.t.tolist(), self.z))


def _as_bp(D: Domain, xi) -> BoundaryPoint:
    return xi if isinstance(xi, BoundaryPoint) else boundary_point(D, xi)


def make_curve(D: Domain, xi, kind: str, params: dict | None = None, K: int = N_SAMPLES,
               r: float = 1.0, data: MultitypeData | None = None) -> ApproachCurve:
    """Sample an approach curve with s = 1 - t = r 2^-k, k = 0..K.

    kinds: ``normal`` (xi - s n), ``cone`` (xi + s(-n + a e^{i phase} v_1); in one
    variable the tangent is i n), ``gamma_lambda`` (xi - s n + lambda (s(2-s))^{1/m} v,
    v the highest-type basis vector), ``tube_alpha`` (xi - s n + i s^alpha v_1) and
    ``user`` (``params["func"]`` maps an array of s to points, or ``params["points"]``).
    """
    params = dict(params or {})
    bp = _as_bp(D, xi)
    n = bp.normal
    s = r * 2.0 ** -np.arange(K + 1)
    if kind not in ("normal", "cone", "gamma_lambda", "tube_alpha", "user"):
        raise DomainError(f"unknown curve kind {kind!r}")
    if kind in ("gamma_lambda", "tube_alpha") or (kind == "cone" and D.dim > 1):
        if D.dim < 2:
            raise DomainError(f"{kind} curves need a tangential direction")
        data = data or multitype_basis(D, bp)
    S = s[:, None]
    if kind == "normal":
        Z = bp.xi - S * n
    elif kind == "cone":
        a = float(params.get("aperture", 0.5))
        ph = np.exp(1j * float(params.get("phase", 0.0)))
        tang = data.basis[:, 1] if D.dim > 1 else 1j * n
        Z = bp.xi + S * (-n + a * ph * tang)
    elif kind == "gamma_lambda":
        lam = complex(params.get("lambda", 0.5))
        m = int(params.get("m", data.multitype[-1]))
        Z = bp.xi - S * n + lam * (S * (2 - S)) ** (1.0 / m) * data.basis[:, -1]
    elif kind == "tube_alpha":
        alpha = float(params.get("alpha", 0.5))
        if alpha <= 0:
            raise DomainError("tube_alpha exponent must be positive")
        Z = bp.xi - S * n + 1j * S**alpha * data.basis[:, 1]
    else:
        if "func" in params:
            Z = np.asarray(params["func"](s), dtype=complex)
        elif "points" in params:
            Z = np.asarray(params["points"], dtype=complex)
            s = np.asarray(params.get("s", r * 2.0 ** -np.arange(len(Z))), dtype=float)
        else:
            raise DomainError("user curves need 'func' or 'points'")
    ok = _inside(D, Z)
    if not np.all(ok):
        bad = int(np.argmin(ok))
        raise DomainError(f"curve sample {bad} (s = {s[bad]:.3g}) lies outside the domain")
    clean = {k: v for k, v in params.items() if k != "func"}
    return ApproachCurve(D, bp, kind, clean, 1.0 - s, Z)


def parse_curve(text: str) -> tuple[str, dict]:
    """``normal``, ``cone:0.5``, ``gamma_lambda:0.5``, ``tube_alpha:0.25``."""
    head, _, arg = text.partition(":")
    key = {"cone": "aperture", "gamma_lambda": "lambda", "tube_alpha": "alpha"}.get(head)
    if head not in ("normal", "cone", "gamma_lambda", "tube_alpha"):
        raise DomainError(f"unknown curve {text!r}")
    params = {}
    if arg:
        if key is None:
            raise DomainError(f"curve {head} takes no parameter")
        params[key] = complex(arg) if head == "gamma_lambda" else float(arg)
    return head, params


# -------------------------------------------------------------- exponents

@dataclass(frozen=True)
class AsymptoticEstimate:
    """Least-squares fit of log value against log delta."""

    slope: float
    r2: float
    decades: float
    intercept: float = 0.0
    n: int = 0
    dropped: int = 0

    def as_dict(self) -> dict:
        return {"slope": self.slope, "r2": self.r2, "decades": self.decades,
                "n": self.n, "dropped": self.dropped}


def estimate_exponent(pairs, min_samples: int = 12, min_decades: float = 2.0) -> AsymptoticEstimate:
    arr = np.asarray([(float(d), float(v)) for d, v in pairs])
    if arr.size == 0:
        raise EstimationError("no samples")
    delta, val = arr[:, 0], arr[:, 1]
    if np.any(delta <= 0) or np.any(val < 0) or not np.all(np.isfinite(arr)):
        raise EstimationError("deltas must be positive and values nonnegative and finite")
    keep = val > 0
    dropped = int(np.sum(~keep))
    delta, val = delta[keep], val[keep]
    if len(delta) < min_samples:
        raise EstimationError(f"need at least {min_samples} nonzero samples, got {len(delta)}")
    decades = float(np.log10(delta.max() / delta.min()))
    if decades < min_decades:
        raise EstimationError(f"samples span {decades:.2f} decades of delta, need {min_decades}")
    x, y = np.log(delta), np.log(val)
    slope, intercept = np.polyfit(x, y, 1)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    ss_res = float(np.sum((y - (slope * x + intercept)) ** 2))
    r2 = 1.0 if ss_tot <= 1e-24 * max(1.0, len(y)) else max(0.0, 1.0 - ss_res / ss_tot)
    return AsymptoticEstimate(float(slope), r2, decades, float(intercept), len(delta), dropped)


# ------------------------------------------------------------- classifier

@dataclass(frozen=True)
class Classification:
    label: str
    evidence: list

    def as_dict(self) -> dict:
        return {"label": self.label, "components": self.evidence,
                "thresholds": {"slope": SLOPE_TOL, "r2": R2_MIN}}


def _tail(curve: ApproachCurve, start: int) -> slice:
    return slice(min(start, max(len(curve.t) - 12, 0)), None)


def classify_curve(data: MultitypeData, curve: ApproachCurve, start: int = 8) -> Classification:
    """K/K' label from the ratios |<z - xi, v_j>| / delta^{1/m_j} on the tail.

    Growth means the ratio increases as delta -> 0, i.e. a negative slope
    against log delta.  not_K: some ratio grows (growth > 0.02 with r^2 >= 0.9).
    K_prime: the normal ratio does not grow and every tangential ratio decays
    (growth <= -0.02).  K_only otherwise.
    """
    sl = _tail(curve, start)
    Z = curve.z[sl]
    delta = curve.deltas()[sl]
    coords = np.abs((Z - data.xi.xi) @ np.conj(data.basis))
    evidence = []
    growing = False
    decaying = []
    for j, m in enumerate(data.multitype):
        rho = coords[:, j] / delta ** (1.0 / m)
        item = {"component": j, "type": m, "max_ratio": float(rho.max())}
        if np.all(rho <= 1e-12 * max(1.0, float(np.max(coords)))):
            item.update({"trend": "zero", "growth": -math.inf})
            decaying.append(True)
        else:
            est = estimate_exponent(list(zip(delta, rho)))
            g = -est.slope
            item.update({"growth": g, "r2": est.r2, "decades": est.decades})
            if g > SLOPE_TOL and est.r2 >= R2_MIN:
                item["trend"] = "growing"
                growing = True
            elif g <= -SLOPE_TOL:
                item["trend"] = "decaying"
            else:
                item["trend"] = "bounded"
            decaying.append(g <= -SLOPE_TOL)
        evidence.append(item)
    if growing:
        label = "not_K"
    elif all(decaying[1:]):
        label = "K_prime"
    else:
        label = "K_only"
    return Classification(label, evidence)


# --------------------------------------------------------------- dilation

@dataclass(frozen=True)
class DilationResult:
    log_lambda: float
    normalized_alpha: float
    tail_variation: float
    omega_p: float = math.nan
    omega_q: float = math.nan
    trace: tuple = ()

    @property
    def lam(self) -> float:
        return math.exp(self.log_lambda)

    def as_dict(self) -> dict:
        return {"log_lambda": self.log_lambda, "lambda": self.lam,
                "normalized_alpha": self.normalized_alpha, "tail_variation": self.tail_variation,
                "omega_p": self.omega_p, "omega_p_prime": self.omega_q}


DILATION_TOL = 1e-3


def _origin(D: Domain) -> np.ndarray:
    return np.zeros(D.dim, complex)


def _poisson_abs(D: Domain, xi, p) -> float:
    try:
        return abs(poisson_kernel(D, xi, p).value)
    except DomainError:
        return math.nan


def dilation(f: HolomorphicMap, xi, eta=None, p=None, q=None, n_terms: int = 26,
             check: bool = True) -> DilationResult:
    """log lambda as the limit of k(g(t), p) - k'(f(g(t)), q) along the normal segment g.

    The segment stops at s = 2^-26: further out, rounding in 1 - |f(z)| dominates.
    """
    D, T = f.source, f.target
    bp = _as_bp(D, xi)
    if check:
        cc = contact_point_check(f, bp)
        if not cc.regular:
            raise EstimationError(f"not a regular contact point: {cc.reason}")
        eta = eta if eta is not None else cc.eta
    eta = _as_bp(T, eta if eta is not None else f(bp.xi - 1e-12 * bp.normal))
    p = _origin(D) if p is None else as_vector(p, D.dim)
    q = _origin(T) if q is None else as_vector(q, T.dim)
    _, G = normal_segment(D, bp, n_terms)
    a = pair_distances(D, p, G)
    b = pair_distances(T, q, f(G))
    diff = a - b
    rich = 2 * diff[1:] - diff[:-1]
    var = float(np.ptp(rich[-6:]))
    if not np.isfinite(var) or var > DILATION_TOL:
        raise EstimationError(f"dilation does not converge along the normal (variation {var:.3g})")
    log_lam = float(rich[-1])
    wp = _poisson_abs(D, bp, p)
    wq = _poisson_abs(T, eta, q)
    alpha = math.exp(log_lam) * wp / wq
    return DilationResult(log_lam, alpha, var, wp, wq, tuple(map(float, diff)))


# -------------------------------------------------------------------- Julia

@dataclass(frozen=True)
class JuliaReport:
    samples: int
    log_lambda: float
    sup_estimate: float
    max_violation: float
    violations: int
    witness: list | None = None
    tolerance: float = 1e-2

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def as_dict(self) -> dict:
        return {"samples": self.samples, "log_lambda": self.log_lambda, "sup_estimate": self.sup_estimate,
                "max_violation": self.max_violation, "violations": self.violations,
                "witness": self.witness, "tolerance": self.tolerance}


def samples_near(D: Domain, xi: BoundaryPoint, n: int, seed: int = 42, min_scale: float = 1e-6) -> np.ndarray:
    """Points xi + e (w - xi) with w in D and e log-uniform in [min_scale, 1]; convexity keeps them in D."""
    W = sample_interior(D, n, seed)
    u = halton(n, 1, seed)[:, 0]
    e = min_scale ** u
    Z = xi.xi[None, :] + e[:, None] * (W - xi.xi[None, :])
    return Z[_inside(D, Z)]


def julia_check(f: HolomorphicMap, xi, eta=None, p=None, q=None, n: int = 1000, seed: int = 42,
                tol: float = 1e-2, dil: DilationResult | None = None) -> JuliaReport:
    """Check h_{eta,q}(f(z)) - h_{xi,p}(z) <= log lambda + tol on samples concentrated near xi."""
    D, T = f.source, f.target
    bp = _as_bp(D, xi)
    if eta is None:
        eta = contact_point_check(f, bp).eta
    eta = _as_bp(T, eta)
    p = _origin(D) if p is None else as_vector(p, D.dim)
    q = _origin(T) if q is None else as_vector(q, T.dim)
    dil = dil or dilation(f, bp, eta, p, q)
    Z = samples_near(D, bp, n, seed)
    hz = horofunction(D, bp, p, Z).value
    hf = horofunction(T, eta, q, f(Z)).value
    gap = hf - hz
    excess = gap - dil.log_lambda
    bad = excess > tol
    k = int(np.argmax(excess))
    witness = [[float(x.real), float(x.imag)] for x in Z[k]] if bad.any() else None
    return JuliaReport(len(Z), dil.log_lambda, float(gap.max()), float(excess.max()),
                       int(bad.sum()), witness, tol)
