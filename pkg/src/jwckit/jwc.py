"""Exponent matrices, restricted limits, Kobayashi type and determinant exponents."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .boundary import (
    ApproachCurve,
    AsymptoticEstimate,
    dilation,
    estimate_exponent,
    make_curve,
)
from .core import DomainError, EstimationError, as_vector
from .domains import BoundaryPoint, Domain, boundary_point, egg
from .geodesics import ball_geodesic, egg_geodesic, halfplane_normal_derivative, halfplane_transport
from .kobayashi import metric_bounds
from .maps import HolomorphicMap, contact_point_check, jacobian_entries
from .multitype import MultitypeData, line_type, multitype_basis

TAIL_START = 8
ZERO = 1e-12
SHARP_TOL = 0.05
VIOLATION_MARGIN = 0.1
VIOLATION_R2 = 0.95
# decay threshold for o-statements; an engineering choice, echoed in every report
DECAY_SLOPE = 0.02


def _bp(D: Domain, xi) -> BoundaryPoint:
    return xi if isinstance(xi, BoundaryPoint) else boundary_point(D, xi)


def curve_bundle(D: Domain, xi, data: MultitypeData | None = None, K: int = 40,
                 restricted_only: bool = False) -> list[ApproachCurve]:
    """Normal segment, a cone ray and, in dimension > 1, gamma_lambda curves for lambda in {0.3, 0.6}."""
    bp = _bp(D, xi)
    out = [make_curve(D, bp, "normal", K=K)]
    if D.dim > 1:
        data = data or multitype_basis(D, bp)
        out.append(make_curve(D, bp, "cone", {"aperture": 0.5}, K=K, data=data))
        if not restricted_only:
            for lam in (0.3, 0.6):
                out.append(make_curve(D, bp, "gamma_lambda", {"lambda": lam}, K=K, data=data))
    else:
        out.append(make_curve(D, bp, "cone", {"aperture": 0.5}, K=K))
    return out


def _curve_name(c: ApproachCurve) -> str:
    if not c.params:
        return c.kind
    return c.kind + ":" + ",".join(f"{v:g}" if isinstance(v, (int, float)) else str(v)
                                   for v in c.params.values() if not isinstance(v, np.ndarray))


# ---------------------------------------------------------- exponent matrix

@dataclass
class ExponentMatrix:
    predicted: np.ndarray
    estimated: list  # [i][j] -> list of per-curve dicts
    verdicts: list
    source_multitype: tuple
    target_multitype: tuple
    curves: list = field(default_factory=list)

    @property
    def violated(self) -> bool:
        return any(v == "violated" for row in self.verdicts for v in row)

    def as_dict(self) -> dict:
        return {"multitypes": {"source": list(self.source_multitype), "target": list(self.target_multitype)},
                "predicted": self.predicted.tolist(), "estimated": self.estimated,
                "verdicts": self.verdicts, "curves": self.curves}


def _verdict(pred: float, fits: list) -> tuple[str, str]:
    live = [f for f in fits if not f.get("zero")]
    if not live:
        return "consistent", "identically zero on every curve"
    slopes = [f["slope"] for f in live]
    if any(f["slope"] < pred - VIOLATION_MARGIN and f["r2"] >= VIOLATION_R2 for f in live):
        return "violated", ""
    if all(s >= pred - SHARP_TOL for s in slopes):
        if any(abs(s - pred) <= SHARP_TOL for s in slopes):
            return "sharp", ""
        return "consistent", ""
    return "inconclusive", ""


def exponent_matrix(f: HolomorphicMap, xi, eta=None, curves: list | None = None) -> ExponentMatrix:
    """Slopes of log|<df_z(v_j), u_i>| against log delta, checked against 1/n_i - 1/m_j."""
    D, T = f.source, f.target
    bp = _bp(D, xi)
    cc = contact_point_check(f, bp)
    if not cc.regular:
        raise EstimationError(f"not a regular contact point: {cc.reason}")
    eta = _bp(T, eta) if eta is not None else cc.eta
    src = multitype_basis(D, bp)
    tgt = multitype_basis(T, eta)
    m = np.array(src.multitype, float)
    n = np.array(tgt.multitype, float)
    pred = 1.0 / n[:, None] - 1.0 / m[None, :]
    curves = curves or curve_bundle(D, bp, src)
    q, d = pred.shape
    fits = [[[] for _ in range(d)] for _ in range(q)]
    for c in curves:
        Z = c.z[TAIL_START:]
        delta = c.deltas()[TAIL_START:]
        M = np.abs(jacobian_entries(f, Z, src.basis, tgt.basis))
        for i in range(q):
            for j in range(d):
                vals = M[:, i, j]
                item = {"curve": _curve_name(c)}
                if np.all(vals < ZERO):
                    item["zero"] = True
                else:
                    est = estimate_exponent(list(zip(delta, vals)))
                    item.update(est.as_dict())
                fits[i][j].append(item)
    verdicts = [[_verdict(pred[i, j], fits[i][j])[0] for j in range(d)] for i in range(q)]
    return ExponentMatrix(pred, fits, verdicts, src.multitype, tgt.multitype,
                          [_curve_name(c) for c in curves])


# --------------------------------------------------------- restricted limits

@dataclass
class KPrimeLimit:
    value: complex
    per_curve: dict
    spread: float
    alpha: float
    consistent: bool

    @property
    def matches_alpha(self) -> bool:
        return abs(self.value - self.alpha) <= 1e-2

    def as_dict(self) -> dict:
        return {"value": [self.value.real, self.value.imag], "spread": self.spread, "alpha": self.alpha,
                "consistent": self.consistent, "matches_alpha": self.matches_alpha,
                "per_curve": {k: [v.real, v.imag] for k, v in self.per_curve.items()}}


def restricted_bundle(D: Domain, xi: BoundaryPoint, K: int = 40) -> list[ApproachCurve]:
    """Normal segment, a cone ray and the trace of a geodesic ending at xi (at least three curves)."""
    out = curve_bundle(D, xi, K=K, restricted_only=True)
    s = 2.0 ** -np.arange(K + 1)
    if D.kind == "egg" and abs(xi.xi[1]) < 1e-12:
        rot = xi.xi[0] / abs(xi.xi[0])
        phi = egg_geodesic(D.param, 0.4)
        pts = phi(1 - s) * np.array([rot, 1.0])
    elif D.kind in ("disc", "ball"):
        start = np.zeros(D.dim, complex)
        start[-1] = 0.4j
        phi = ball_geodesic(xi.xi, start)
        pts = phi(1 - s)
    else:
        pts = None
    if pts is not None:
        out.append(make_curve(D, xi, "user", {"points": pts, "s": s, "label": "geodesic"}))
    return out


def kprime_limit(f: HolomorphicMap, xi, v=None, u=None, eta=None, curves=None,
                 tol: float = 1e-2) -> KPrimeLimit:
    """Tail limit of <df_z(v), u> (default v = n_xi, u = n_eta) agreeing across restricted curves."""
    D, T = f.source, f.target
    bp = _bp(D, xi)
    cc = contact_point_check(f, bp)
    eta = _bp(T, eta) if eta is not None else cc.eta
    v = bp.normal if v is None else as_vector(v, D.dim)
    if u is None:
        if eta is None:
            raise EstimationError("target boundary point unknown; pass u explicitly")
        u = eta.normal
    u = as_vector(u, T.dim)
    curves = curves or restricted_bundle(D, bp)
    per = {}
    for c in curves:
        vals = jacobian_entries(f, c.z, v[:, None], u[:, None])[:, 0, 0]
        per[c.params.get("label", _curve_name(c))] = complex(vals[-1])
    arr = np.array(list(per.values()))
    spread = float(np.max(np.abs(arr - arr[0])))
    value = complex(np.mean(arr))
    alpha = math.nan
    if cc.regular:
        try:
            alpha = dilation(f, bp, eta, check=False).normalized_alpha
        except (EstimationError, DomainError):
            pass
    return KPrimeLimit(value, per, spread, alpha, spread <= tol)


def kprime_limit_normal(f: HolomorphicMap, xi, eta=None) -> KPrimeLimit:
    return kprime_limit(f, xi, eta=eta)


def function_kprime_limit(f: HolomorphicMap, xi, curves=None) -> KPrimeLimit:
    """Restricted limit of a scalar function itself (not its derivative) across a restricted bundle."""
    D = f.source
    bp = _bp(D, xi)
    curves = curves or restricted_bundle(D, bp)
    per = {c.params.get("label", _curve_name(c)): complex(f(c.z[-1:])[0, 0]) for c in curves}
    arr = np.array(list(per.values()))
    spread = float(np.max(np.abs(arr - arr[0])))
    return KPrimeLimit(complex(np.mean(arr)), per, spread, math.nan, spread <= 1e-6)


# ------------------------------------------------------------ Kobayashi type

@dataclass
class KobayashiType:
    estimate: float
    predicted: float
    per_curve: list
    verdict: str

    def as_dict(self) -> dict:
        return {"estimate": self.estimate, "predicted": self.predicted,
                "verdict": self.verdict, "per_curve": self.per_curve}


def kobayashi_type(D: Domain, xi, v, curves=None, start: int = 6, stop: int = 30,
                   contacts: int = 8) -> KobayashiType:
    """Growth rate of the Kobayashi-Royden metric in direction v as z -> xi, against 1/m_xi(v)."""
    bp = _bp(D, xi)
    v = as_vector(v, D.dim)
    m = line_type(D, bp, v)
    predicted = 0.0 if math.isinf(m) else 1.0 / m
    if curves is None:
        curves = [make_curve(D, bp, "normal")]
        if D.dim > 1:
            data = multitype_basis(D, bp)
            curves.append(make_curve(D, bp, "cone", {"aperture": 0.5}, data=data))
            curves.append(make_curve(D, bp, "gamma_lambda", {"lambda": 0.3}, data=data))
    per = []
    verdicts = []
    for c in curves:
        Z = c.z[start:stop + 1]
        delta = c.deltas()[start:stop + 1]
        iv = [metric_bounds(D, z, v, contacts=contacts) for z in Z]
        mid = np.array([i.mid for i in iv])
        width = np.array([i.width for i in iv])
        est = estimate_exponent(list(zip(delta, mid)))
        wst = estimate_exponent(list(zip(delta, np.maximum(width, 1e-300))))
        s = -est.slope
        item = {"curve": _curve_name(c), "estimate": s, "r2": est.r2, "width_growth": -wst.slope}
        if -wst.slope > s + 0.05:
            item["verdict"] = "inconclusive"
        else:
            item["verdict"] = "consistent" if abs(s - predicted) <= 0.05 else "violated"
        per.append(item)
        verdicts.append(item["verdict"])
    estimate = float(np.mean([p["estimate"] for p in per]))
    if "violated" in verdicts:
        verdict = "violated"
    elif all(vd == "consistent" for vd in verdicts):
        verdict = "consistent"
    else:
        verdict = "inconclusive"
    return KobayashiType(estimate, predicted, per, verdict)


# -------------------------------------------------------- Jacobian determinant

@dataclass
class DeterminantExponent:
    predicted: float
    per_curve: list
    verdict: str
    tends_to_zero: bool | None

    @property
    def slope(self) -> float:
        return min(p["slope"] for p in self.per_curve)

    def as_dict(self) -> dict:
        return {"predicted": self.predicted, "per_curve": self.per_curve, "verdict": self.verdict,
                "tends_to_zero": self.tends_to_zero}


def jacobian_determinant_exponent(f: HolomorphicMap, xi, eta=None, curves=None) -> DeterminantExponent:
    """Slope of log|det df| against log delta, checked against sum_j (1/n_j - 1/m_j)."""
    D, T = f.source, f.target
    if D.dim != T.dim:
        raise DomainError("determinant needs a square Jacobian")
    bp = _bp(D, xi)
    eta = _bp(T, eta) if eta is not None else contact_point_check(f, bp).eta
    if eta is None:
        raise EstimationError("no target boundary point")
    src = multitype_basis(D, bp)
    tgt = multitype_basis(T, eta)
    predicted = float(sum(1.0 / n - 1.0 / m for n, m in zip(tgt.multitype, src.multitype)))
    curves = curves or curve_bundle(D, bp, src)
    per = []
    to_zero = []
    for c in curves:
        Z = c.z[TAIL_START:]
        delta = c.deltas()[TAIL_START:]
        det = np.abs(np.linalg.det(f.jacobian(Z)))
        if np.all(det < ZERO):
            raise EstimationError("determinant vanishes identically")
        est = estimate_exponent(list(zip(delta, det)))
        per.append({"curve": _curve_name(c), **est.as_dict(), "first": float(det[0]), "last": float(det[-1])})
        to_zero.append(det[-1] < 1e-2 * det[0])
    ok = all(p["slope"] >= predicted - 0.05 for p in per)
    verdict = "consistent" if ok else "violated"
    tends = None
    if predicted > 0:
        tends = all(to_zero)
        if not tends:
            verdict = "violated"
    return DeterminantExponent(predicted, per, verdict, tends)


# ---------------------------------------------------------------- scaling

def scaling_grid(n_r: int = 12, n_theta: int = 25) -> np.ndarray:
    """Points of the closed unit half-disc in the left half-plane, away from the imaginary axis."""
    r = np.linspace(0.1, 1.0, n_r)
    th = np.linspace(0.5 * np.pi + 0.05, 1.5 * np.pi - 0.05, n_theta)
    return (r[:, None] * np.exp(1j * th[None, :])).ravel()


def scaling_limit_errors(m: int, a: complex, lams, grid=None) -> np.ndarray:
    """sup over the grid of |A_lam psi(zeta/lam) - (psi'_N(0) zeta, 0)| for psi = phi_a o C^{-1}."""
    E = egg(m)
    data = multitype_basis(E, [1.0, 0.0])
    phi = egg_geodesic(m, a)
    psi = halfplane_transport(phi)
    d0 = halfplane_normal_derivative(phi, data.xi.normal).value
    grid = scaling_grid() if grid is None else np.asarray(grid, dtype=complex)
    target = np.zeros((len(grid), 2), complex)
    target[:, 0] = d0 * grid
    out = []
    for lam in lams:
        W = data.to_coords(psi(grid / lam))
        A = W * np.array([lam ** (1.0 / k) for k in data.multitype])
        out.append(float(np.max(np.linalg.norm(A - target, axis=1))))
    return np.array(out)


# -------------------------------------------------------------- report

def jwc_report(f: HolomorphicMap, xi, eta=None) -> dict:
    D = f.source
    bp = _bp(D, xi)
    cc = contact_point_check(f, bp)
    out = {"map": f.name, "source": D.name, "target": f.target.name, "contact": cc.as_dict(),
           "thresholds": {"sharp": SHARP_TOL, "violation_margin": VIOLATION_MARGIN,
                          "violation_r2": VIOLATION_R2, "decay_slope": DECAY_SLOPE}}
    if not cc.regular:
        out["verdicts"] = []
        return out
    em = exponent_matrix(f, bp, eta)
    dil = dilation(f, bp, cc.eta, check=False)
    kp = kprime_limit(f, bp, eta=cc.eta)
    out.update(em.as_dict())
    out["lambda"] = dil.lam
    out["alpha"] = dil.normalized_alpha
    out["kprime_normal"] = kp.as_dict()
    if D.dim == f.target.dim:
        out["determinant"] = jacobian_determinant_exponent(f, bp, cc.eta, None).as_dict()
    return out
