"""The acceptance battery: eleven numbered checks with fixed tolerances and seeds."""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .boundary import classify_curve, dilation, julia_check, make_curve
from .core import poincare_distance_disc
from .domains import ball, disc, egg, halfplane, sample_interior, tube
from .geodesics import egg_geodesic, horofunction, poisson_kernel
from .jwc import (
    exponent_matrix,
    function_kprime_limit,
    jacobian_determinant_exponent,
    kobayashi_type,
    kprime_limit,
    scaling_limit_errors,
)
from .kobayashi import distance_bounds, exact_distance, refine_distance_upper
from .maps import catalog_map, contact_point_check, egg_down, egg_projection, egg_up, example_catalog, identity
from .multitype import multitype_basis

SEED = 42


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} [{self.number:2d}] {self.title}"

    def as_dict(self) -> dict:
        # timings are left out so that reports are reproducible byte for byte
        return {"number": self.number, "title": self.title, "passed": self.passed, "details": self.details}


def _timed(limit: float | None):
    def wrap(fn):
        def run() -> tuple[bool, dict, float]:
            t0 = time.perf_counter()
            ok, details = fn()
            dt = time.perf_counter() - t0
            if limit is not None:
                details["runtime_limit_s"] = limit
                ok = ok and dt < limit
            return ok, details, dt
        run.__name__ = fn.__name__
        return run
    return wrap


# ------------------------------------------------------------------ 1

PAIR_SPLIT = (("DISC", 400), ("HALFPLANE", 300), ("BALL:2", 300))


@_timed(30.0)
def oracle_certification():
    doms = {"DISC": disc(), "HALFPLANE": halfplane(), "BALL:2": ball(2)}
    violations = 0
    counts = {}
    worst_gap = 0.0
    for k, (name, n) in enumerate(PAIR_SPLIT):
        D = doms[name]
        box = None if D.bounded else 10.0
        Z = sample_interior(D, n, seed=SEED + 2 * k, box=box)
        W = sample_interior(D, n, seed=SEED + 2 * k + 1, box=box)
        for z, w in zip(Z, W):
            iv = distance_bounds(D, z, w, use_oracle=False)
            exact = exact_distance(D, z, w)
            if not iv.lo <= exact <= iv.hi:
                violations += 1
            worst_gap = max(worst_gap, (iv.hi - exact) / max(exact, 1e-300))
        counts[name] = n
    return violations == 0, {"pairs": counts, "violations": violations,
                             "worst_relative_upper_gap": round(worst_gap, 6)}


# ------------------------------------------------------------------ 2

@_timed(60.0)
def egg_geodesic_isometry():
    E = egg(4)
    rng = np.random.default_rng(SEED)
    contained = True
    worst = 0.0
    for a in (0.0, 0.5, 0.5 + 0.3j):
        phi = egg_geodesic(4, a)
        for _ in range(20):
            t1, t2 = sorted(rng.uniform(0.0, 0.9, 2))
            z, w = phi(t1), phi(t2)
            exact = poincare_distance_disc(t1, t2)
            iv = distance_bounds(E, z, w, use_oracle=False)
            ref = refine_distance_upper(E, z, w, initial=iv)
            contained &= iv.lo <= exact <= ref.hi
            worst = max(worst, ref.hi / exact - 1.0)
    return bool(contained and worst <= 0.05), {"all_contained": bool(contained),
                                               "worst_relative_upper_error": round(worst, 6)}


# ------------------------------------------------------------------ 3

@_timed(30.0)
def kobayashi_types():
    out = {}
    ok = True
    for m in (2, 4, 6):
        r = kobayashi_type(egg(m), [1, 0], [0, 1])
        out[f"EGG:{m} tangent"] = round(r.estimate, 4)
        ok &= abs(r.estimate - 1.0 / m) <= 0.05
    r = kobayashi_type(egg(4), [1, 0], [1, 0])
    out["EGG:4 normal"] = round(r.estimate, 4)
    ok &= abs(r.estimate - 1.0) <= 0.05
    return bool(ok), out


# ------------------------------------------------------------------ 4

@_timed(None)
def classifier_table():
    E4, T, B = egg(4), tube(), ball(2)
    dE = multitype_basis(E4, [1, 0])
    dT = multitype_basis(T, [0, 0])
    dB = multitype_basis(B, [1, 0])
    cone = {"aperture": 0.5}
    cases = [
        ("EGG:4 normal", dE, make_curve(E4, dE.xi, "normal"), "K_prime"),
        ("EGG:4 gamma_0.5", dE, make_curve(E4, dE.xi, "gamma_lambda", {"lambda": 0.5}, data=dE), "K_only"),
        ("TUBE tube_0.25", dT, make_curve(T, dT.xi, "tube_alpha", {"alpha": 0.25}, data=dT), "not_K"),
        ("TUBE tube_0.75", dT, make_curve(T, dT.xi, "tube_alpha", {"alpha": 0.75}, data=dT), "K_prime"),
        ("EGG:4 cone", dE, make_curve(E4, dE.xi, "cone", cone, data=dE), "K_prime"),
        ("TUBE cone", dT, make_curve(T, dT.xi, "cone", cone, data=dT), "K_prime"),
        ("BALL:2 cone", dB, make_curve(B, dB.xi, "cone", cone, data=dB), "K_prime"),
    ]
    out = {}
    ok = True
    for name, data, curve, want in cases:
        got = classify_curve(data, curve).label
        out[name] = got
        ok &= got == want
    return bool(ok), out


# ------------------------------------------------------------------ 5

@_timed(None)
def dilation_values():
    lam_sq = dilation(catalog_map("disc_square"), [1]).lam
    lam_pr = dilation(egg_projection(4), [1, 0]).lam
    chains = {}
    ok = abs(lam_sq - 2) <= 1e-3 and abs(lam_pr - 1) <= 1e-3
    pairs = [(egg_projection(4), catalog_map("disc_square"), [1, 0]),
             (egg_down(4, 2, 0.5), egg_projection(2), [1, 0])]
    for f, g, xi in pairs:
        gf = f.compose(g)
        df = dilation(f, xi)
        eta = contact_point_check(f, xi).eta
        dg = dilation(g, eta)
        dgf = dilation(gf, xi)
        defect = abs(dgf.log_lambda - df.log_lambda - dg.log_lambda)
        chains[gf.name] = float(f"{defect:.3g}")
        ok &= defect < 1e-3
    return bool(ok), {"disc_square": round(lam_sq, 6), "egg_projection": round(lam_pr, 6), "chain_defects": chains}


# ------------------------------------------------------------------ 6

@_timed(None)
def poisson_horofunction():
    E = egg(4)
    xi = np.array([1.0 + 0j, 0.0])
    p = np.zeros(2, complex)
    W = sample_interior(E, 100, seed=SEED)
    h = horofunction(E, xi, p, W, n_terms=40, tol=0.0).value
    om_p = abs(poisson_kernel(E, xi, p).value)
    om_w = np.array([abs(poisson_kernel(E, xi, w).value) for w in W])
    err = float(np.max(np.abs(h - math.log(om_p) + np.log(om_w))))
    return err < 1e-2, {"max_error": float(f"{err:.3g}"), "points": len(W)}


# ------------------------------------------------------------------ 7

@_timed(None)
def jwc_exponent_matrix():
    out = {}
    ok = True
    for f in (egg_up(2, 4), egg_down(4, 2, 0.5)):
        em = exponent_matrix(f, [1, 0])
        flat = [v for row in em.verdicts for v in row]
        sharp = em.verdicts[1][1] == "sharp"
        kp = kprime_limit(f, [1, 0])
        ok &= all(v in ("consistent", "sharp") for v in flat) and sharp
        ok &= kp.consistent and kp.matches_alpha
        item = {"verdicts": em.verdicts, "predicted_11": float(em.predicted[1, 1]),
                "kprime": round(kp.value.real, 6), "alpha": round(kp.alpha, 6)}
        if f.name.startswith("egg_down"):
            ok &= abs(kp.value - 1 / 1.5) <= 1e-2
        out[f.name] = item
    return bool(ok), out


# ------------------------------------------------------------------ 8

@_timed(None)
def jacobian_determinant():
    down = jacobian_determinant_exponent(egg_down(4, 2, 0.5), [1, 0])
    ident = jacobian_determinant_exponent(identity(egg(4)), [1, 0])
    ok = down.slope >= 0.25 - 0.05 and bool(down.tends_to_zero) and abs(ident.slope) <= 0.02
    return bool(ok), {"egg_down_slope": round(down.slope, 4), "egg_down_to_zero": down.tends_to_zero,
                      "identity_slope": round(ident.slope, 4)}


# ------------------------------------------------------------------ 9

SCALING_CASES = ((2, 0.5), (4, 0.2))


@_timed(None)
def scaling_convergence():
    lams = [2.0**k for k in range(8, 21)]
    out = {}
    ok = True
    for m, a in SCALING_CASES:
        err = scaling_limit_errors(m, a, lams)
        mono = bool(np.all(np.diff(err) < 0))
        ok &= mono and err[-1] < 1e-2
        out[f"EGG:{m} a={a}"] = {"error_at_2^20": float(f"{err[-1]:.4g}"), "monotone": mono}
    return bool(ok), out


# ------------------------------------------------------------------ 10

@_timed(None)
def rudin_example():
    f = catalog_map("rudin")
    kp = function_kprime_limit(f, [1, 0])
    worst = 0.0
    for lam in (0.3, 0.6, 0.9):
        c = make_curve(f.source, [1, 0], "gamma_lambda", {"lambda": lam, "m": 2})
        worst = max(worst, float(np.max(np.abs(f(c.z)[:, 0] - lam**2))))
    ok = abs(kp.value) <= 1e-6 and kp.spread <= 1e-6 and worst <= 1e-9
    return bool(ok), {"restricted_limit": float(f"{abs(kp.value):.3g}"), "gamma_lambda_error": float(f"{worst:.3g}")}


# ------------------------------------------------------------------ 11

@_timed(None)
def julia_inequality():
    out = {}
    ok = True
    for f in example_catalog():
        xi = [1] if f.source.dim == 1 else [1, 0]
        cc = contact_point_check(f, xi)
        if not cc.regular:
            out[f.name] = {"skipped": cc.reason}
            continue
        rep = julia_check(f, xi, cc.eta, n=1000, seed=SEED)
        slack = abs(rep.sup_estimate - rep.log_lambda)
        ok &= rep.violations == 0 and slack <= 1e-2
        out[f.name] = {"violations": rep.violations, "sup_minus_log_lambda": float(f"{slack:.3g}")}
    return bool(ok), out


CRITERIA = [
    (1, "oracle certification", oracle_certification),
    (2, "egg geodesic isometry", egg_geodesic_isometry),
    (3, "Kobayashi type", kobayashi_types),
    (4, "classifier table", classifier_table),
    (5, "dilation and chain rule", dilation_values),
    (6, "Poisson kernel and horofunction", poisson_horofunction),
    (7, "JWC exponent matrix", jwc_exponent_matrix),
    (8, "Jacobian determinant", jacobian_determinant),
    (9, "scaling convergence", scaling_convergence),
    (10, "Rudin example", rudin_example),
    (11, "Julia inequality", julia_inequality),
]

PRESETS = {"paper-examples": [c[0] for c in CRITERIA]}


def run_criterion(number: int) -> CriterionResult:
    for num, title, fn in CRITERIA:
        if num == number:
            try:
                ok, details, dt = fn()
            except Exception as exc:  # a crash is reported as a failed criterion
                return CriterionResult(num, title, False, {"error": f"{type(exc).__name__}: {exc}"})
            return CriterionResult(num, title, ok, details, dt)
    raise KeyError(f"no criterion {number}")


def run_suite(preset: str = "paper-examples", threads: int = 1) -> list[CriterionResult]:
    numbers = PRESETS[preset]
    if threads <= 1:
        return [run_criterion(n) for n in numbers]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(run_criterion, numbers))
