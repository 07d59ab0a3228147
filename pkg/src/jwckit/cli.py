"""Command-line front end: one subcommand per analysis, JSON reports and optional CSV traces.

Exit codes: 0 when every verdict is consistent, 1 when something is violated or
an estimate fails, 2 for usage errors (bad names, malformed config or vectors).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .boundary import classify_curve, dilation, julia_check, make_curve, parse_curve
from .core import DomainError, EstimationError
from .domains import Domain, boundary_point, load_polynomial_domain, parse_domain
from .geodesics import ball_geodesic, egg_geodesic, horofunction, normal_derivative_limit, poisson_kernel
from .jwc import jwc_report, kobayashi_type
from .kobayashi import distance_bounds, metric_bounds, refine_distance_upper, verify_witness
from .maps import CATALOG, catalog_map
from .multitype import multitype_basis, multitype_report
from .suite import PRESETS, run_suite

DEFAULT_TOLERANCES = {"julia": 1e-2, "kprime": 1e-2, "contact": 1e-6}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    seed: int = 42
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    domains: dict = field(default_factory=dict)
    report: str | None = None
    csv: str | None = None

    @classmethod
    def load(cls, path: str | None, seed: int | None = None) -> "RunConfig":
        cfg = cls()
        if path:
            try:
                raw = json.loads(Path(path).read_text())
            except (OSError, json.JSONDecodeError) as exc:
                raise UsageError(f"cannot read config {path}: {exc}") from exc
            if not isinstance(raw, dict):
                raise UsageError("config must be a JSON object")
            unknown = set(raw) - {"seed", "tolerances", "domains"}
            if unknown:
                raise UsageError(f"unknown config keys: {sorted(unknown)}")
            cfg.seed = int(raw.get("seed", cfg.seed))
            for k, v in raw.get("tolerances", {}).items():
                if k not in DEFAULT_TOLERANCES:
                    raise UsageError(f"unknown tolerance {k!r}")
                if not isinstance(v, (int, float)) or not v > 0:
                    raise UsageError(f"tolerance {k!r} must be positive")
                cfg.tolerances[k] = float(v)
            cfg.domains = dict(raw.get("domains", {}))
        if seed is not None:
            cfg.seed = seed
        return cfg

    def domain(self, name: str) -> Domain:
        if name in self.domains:
            return load_polynomial_domain({"name": name, **self.domains[name]})
        try:
            return parse_domain(name)
        except (DomainError, OSError, ValueError) as exc:
            raise UsageError(str(exc)) from exc


# ------------------------------------------------------------------ parsing

def parse_vector(text: str, dim: int | None = None) -> np.ndarray:
    try:
        vec = np.array([complex(p.strip().replace("i", "j")) for p in text.split(",")])
    except ValueError as exc:
        raise UsageError(f"cannot parse vector {text!r}") from exc
    if dim is not None and len(vec) != dim:
        raise UsageError(f"expected {dim} coordinates, got {len(vec)}")
    return vec


def default_xi(D: Domain) -> np.ndarray:
    if D.kind == "halfplane":
        return np.zeros(1, complex)
    if D.kind == "tube":
        return np.zeros(2, complex)
    if D.kind in ("disc", "ball", "egg"):
        return np.eye(D.dim)[0].astype(complex)
    raise UsageError("--xi is required for this domain")


def _xi(D: Domain, text: str | None) -> np.ndarray:
    return default_xi(D) if text is None else parse_vector(text, D.dim)


def _direction(D: Domain, xi, text: str) -> np.ndarray:
    if text == "normal":
        return boundary_point(D, xi).normal
    if text == "tangent":
        if D.dim < 2:
            raise UsageError("no tangent direction in one variable")
        return multitype_basis(D, xi).basis[:, -1]
    return parse_vector(text, D.dim)


def _plain(obj):
    """Recursively convert to JSON-safe values (complex -> [re, im], NaN/inf -> None)."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    if isinstance(obj, (complex, np.complexfloating)):
        return [_plain(obj.real), _plain(obj.imag)]
    return obj


def emit(report: dict, cfg: RunConfig) -> None:
    text = json.dumps(_plain(report), indent=2, allow_nan=False) + "\n"
    if cfg.report:
        Path(cfg.report).write_text(text)
    else:
        sys.stdout.write(text)


def write_csv(path: str | None, header: list, rows) -> None:
    if not path:
        return
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in row])


# ---------------------------------------------------------------- commands

def cmd_multitype(a, cfg):
    D = cfg.domain(a.domain)
    emit(multitype_report(D, _xi(D, a.xi)), cfg)
    return 0


def cmd_ktype(a, cfg):
    D = cfg.domain(a.domain)
    xi = _xi(D, a.xi)
    v = _direction(D, xi, a.v)
    r = kobayashi_type(D, xi, v)
    emit({"domain": D.name, "xi": xi, "v": v, **r.as_dict()}, cfg)
    return 1 if r.verdict == "violated" else 0


def cmd_distance(a, cfg):
    D = cfg.domain(a.domain)
    z, w = parse_vector(a.z, D.dim), parse_vector(a.w, D.dim)
    iv = distance_bounds(D, z, w, use_oracle=not a.no_oracle, seed=cfg.seed)
    if a.refine and iv.lo_witness.get("kind") != "oracle":
        iv = refine_distance_upper(D, z, w, initial=iv, seed=cfg.seed)
    ok = verify_witness(D, z, w, iv)
    emit({"domain": D.name, "z": z, "w": w, **iv.as_dict(), "witnesses_verified": ok}, cfg)
    return 0 if ok else 1


def cmd_metric(a, cfg):
    D = cfg.domain(a.domain)
    z = parse_vector(a.z, D.dim)
    v = parse_vector(a.v, D.dim)
    iv = metric_bounds(D, z, v, seed=cfg.seed)
    emit({"domain": D.name, "z": z, "v": v, **iv.as_dict()}, cfg)
    return 0


def cmd_geodesic(a, cfg):
    D = cfg.domain(a.domain)
    if D.kind == "egg":
        phi = egg_geodesic(D.param, complex(a.a.replace("i", "j")))
        xi = np.array([1.0 + 0j, 0.0])
    elif D.kind in ("disc", "ball"):
        xi = _xi(D, a.xi)
        through = np.zeros(D.dim, complex) if a.through is None else parse_vector(a.through, D.dim)
        phi = ball_geodesic(xi, through)
    else:
        raise UsageError("geodesics are available on DISC, BALL:d and EGG:m")
    t = np.linspace(0.0, 1.0, a.samples, endpoint=False)
    Z = phi(t)
    nd = normal_derivative_limit(phi, boundary_point(D, xi).normal)
    inside = phi.check_inside(D)
    write_csv(a.csv, ["t"] + [f"{p}{j}" for j in range(D.dim) for p in ("re_z", "im_z")],
              ([tk] + [x for zj in zk for x in (zj.real, zj.imag)] for tk, zk in zip(t, Z)))
    emit({"domain": D.name, "geodesic": phi.tag, "params": phi.params, "endpoint": xi,
          "normal_derivative": nd.value, "tail_variation": nd.tail_variation,
          "inside": inside, "samples": Z}, cfg)
    return 0 if inside else 1


def cmd_poisson(a, cfg):
    D = cfg.domain(a.domain)
    xi = _xi(D, a.xi)
    z = parse_vector(a.z, D.dim)
    pk = poisson_kernel(D, xi, z, seed=cfg.seed)
    emit({"domain": D.name, "xi": xi, "z": z, "value": pk.value, "method": pk.method,
          "residual": pk.residual, "closed_form": pk.closed_form}, cfg)
    return 0


def cmd_horofunction(a, cfg):
    D = cfg.domain(a.domain)
    xi = _xi(D, a.xi)
    p = np.zeros(D.dim, complex) if a.p is None else parse_vector(a.p, D.dim)
    w = parse_vector(a.w, D.dim)
    h = horofunction(D, xi, p, w, n_terms=a.terms)
    write_csv(a.csv, ["t", "term"], h.trace)
    emit({"domain": D.name, "xi": xi, "p": p, "w": w, "value": h.value,
          "tail_variation": h.tail_variation, "terms": h.terms}, cfg)
    return 0


def cmd_classify(a, cfg):
    D = cfg.domain(a.domain)
    xi = _xi(D, a.xi)
    data = multitype_basis(D, xi)
    try:
        kind, params = parse_curve(a.curve)
    except (DomainError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    curve = make_curve(D, data.xi, kind, params, data=data)
    res = classify_curve(data, curve)
    delta = curve.deltas()
    coords = np.abs((curve.z - data.xi.xi) @ np.conj(data.basis))
    ratios = coords / delta[:, None] ** (1.0 / np.array(data.multitype, float))
    write_csv(a.csv, ["t", "delta"] + [f"ratio{j}" for j in range(D.dim)],
              ([t, d, *r] for t, d, r in zip(curve.t, delta, ratios)))
    out = {"domain": D.name, "xi": xi, "curve": a.curve, **res.as_dict()}
    code = 0
    if a.expect:
        out["expected"] = a.expect
        code = 0 if res.label == a.expect else 1
    emit(out, cfg)
    return code


def _map(a):
    if a.map not in CATALOG:
        raise UsageError(f"unknown map {a.map!r}; choose from {sorted(CATALOG)}")
    return catalog_map(a.map)


def cmd_dilation(a, cfg):
    f = _map(a)
    xi = _xi(f.source, a.xi)
    d = dilation(f, xi)
    write_csv(a.csv, ["k", "difference"], enumerate(d.trace, start=1))
    emit({"map": f.name, "xi": xi, **d.as_dict()}, cfg)
    return 0


def cmd_julia(a, cfg):
    f = _map(a)
    xi = _xi(f.source, a.xi)
    rep = julia_check(f, xi, n=a.n, seed=cfg.seed, tol=cfg.tolerances["julia"])
    emit({"map": f.name, "xi": xi, **rep.as_dict()}, cfg)
    return 0 if rep.ok else 1


def cmd_jwc(a, cfg):
    f = _map(a)
    for flag, dom in (("source", f.source), ("target", f.target)):
        given = getattr(a, flag)
        if given and cfg.domain(given).name != dom.name:
            raise UsageError(f"map {a.map} has {flag} {dom.name}, not {given}")
    xi = _xi(f.source, a.xi)
    rep = jwc_report(f, xi)
    emit(rep, cfg)
    bad = any(v == "violated" for row in rep.get("verdicts", []) for v in row)
    bad |= not rep["contact"]["regular"]
    if "kprime_normal" in rep:
        bad |= not rep["kprime_normal"]["consistent"]
    return 1 if bad else 0


def cmd_suite(a, cfg):
    threads = int(os.environ.get("JWCKIT_THREADS", "1") or 1)
    results = run_suite(a.preset, threads=threads)
    for r in results:
        print(r.line(), file=sys.stderr)
    emit({"preset": a.preset, "criteria": [r.as_dict() for r in results],
          "passed": all(r.passed for r in results)}, cfg)
    return 0 if all(r.passed for r in results) else 1


# ------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--report", help="write the JSON report here instead of stdout")
    common.add_argument("--csv", help="write a CSV trace here (where the command has one)")
    common.add_argument("--seed", type=int, help="seed for all sampling (default 42)")
    common.add_argument("--config", help="JSON file with seed, tolerances and polynomial domains")

    p = argparse.ArgumentParser(prog="jwckit", description="Kobayashi geometry and boundary behaviour toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("multitype", cmd_multitype, "multitype, adapted basis and scaling model")
    sp.add_argument("--domain", required=True)
    sp.add_argument("--xi")

    sp = add("ktype", cmd_ktype, "Kobayashi type of a direction")
    sp.add_argument("--domain", required=True)
    sp.add_argument("--xi")
    sp.add_argument("--v", default="tangent", help="'tangent', 'normal' or a vector")

    sp = add("distance", cmd_distance, "certified Kobayashi distance interval")
    sp.add_argument("--domain", required=True)
    sp.add_argument("--z", required=True)
    sp.add_argument("--w", required=True)
    sp.add_argument("--refine", action="store_true", help="improve the upper bound with polynomial discs")
    sp.add_argument("--no-oracle", action="store_true", help="skip closed forms")

    sp = add("metric", cmd_metric, "certified Kobayashi-Royden metric interval")
    sp.add_argument("--domain", required=True)
    sp.add_argument("--z", required=True)
    sp.add_argument("--v", required=True)

    sp = add("geodesic", cmd_geodesic, "sample a complex geodesic")
    sp.add_argument("--domain", required=True)
    sp.add_argument("--a", default="0", help="egg geodesic parameter")
    sp.add_argument("--xi", help="endpoint (disc and ball)")
    sp.add_argument("--through", help="interior point (disc and ball)")
    sp.add_argument("--samples", type=int, default=11)

    sp = add("poisson", cmd_poisson, "pluricomplex Poisson kernel")
    sp.add_argument("--domain", required=True)
    sp.add_argument("--xi")
    sp.add_argument("--z", required=True)

    sp = add("horofunction", cmd_horofunction, "horofunction h_{xi,p}(w)")
    sp.add_argument("--domain", required=True)
    sp.add_argument("--xi")
    sp.add_argument("--p")
    sp.add_argument("--w", required=True)
    sp.add_argument("--terms", type=int, default=40)

    sp = add("classify-curve", cmd_classify, "K / K' classification of an approach curve")
    sp.add_argument("--domain", required=True)
    sp.add_argument("--xi")
    sp.add_argument("--curve", required=True, help="e.g. normal, cone:0.5, gamma_lambda:0.5, tube_alpha:0.25")
    sp.add_argument("--expect", choices=["K_prime", "K_only", "not_K"])

    for name, fn, help_ in (("dilation", cmd_dilation, "boundary dilation of a catalog map"),
                            ("julia-check", cmd_julia, "sampled Julia inequality"),
                            ("jwc-verify", cmd_jwc, "exponent matrix and restricted limits")):
        sp = add(name, fn, help_)
        sp.add_argument("--map", required=True, help=f"one of {', '.join(sorted(CATALOG))}")
        sp.add_argument("--xi")
        if name == "julia-check":
            sp.add_argument("--n", type=int, default=1000)
        if name == "jwc-verify":
            sp.add_argument("--source")
            sp.add_argument("--target")

    sp = add("suite", cmd_suite, "run the acceptance battery")
    sp.add_argument("--preset", default="paper-examples", choices=sorted(PRESETS))
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = RunConfig.load(args.config, args.seed)
        cfg.report, cfg.csv = args.report, args.csv
        args.csv = cfg.csv
        return args.fn(args, cfg)
    except UsageError as exc:
        print(f"jwckit: error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, EstimationError) as exc:
        print(f"jwckit: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
