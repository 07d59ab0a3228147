"""Line type, multitype bases, cotype, weighted scalings and the scaling model.

Coordinates adapted to a boundary point xi with basis (v_0 = n_xi, v_1, ...)
are w_j = <z - xi, v_j>, i.e. z = xi + U w with U the basis matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import null_space

from .core import DomainError, EstimationError, as_vector, hermitian, sphere_points
from .domains import BoundaryPoint, Domain, boundary_point
from .poly import RealPoly

TYPE_CAP = 32


def _as_boundary_point(D: Domain, xi) -> BoundaryPoint:
    return xi if isinstance(xi, BoundaryPoint) else boundary_point(D, xi)


def _exact_line_type(D: Domain, xi: np.ndarray, v: np.ndarray) -> float:
    P = D.poly.restrict_to_line(xi, v)
    scale = max(1.0, float(np.max(np.abs(P))))
    nz = np.argwhere(np.abs(P) > 1e-9 * scale)
    orders = [i + j for i, j in nz if i + j > 0]
    if not orders:
        return math.inf
    k = min(orders)
    return math.inf if k > TYPE_CAP else k


def _numeric_line_type(D: Domain, xi: np.ndarray, v: np.ndarray) -> float:
    angles = np.exp(2j * np.pi * np.arange(64) / 64)
    rhos, vals = [], []
    for k in range(1, 60):
        rho = 2.0**-k
        val = float(np.max(np.abs(D.r(xi[None, :] + rho * angles[:, None] * v[None, :]))))
        if val < 1e-12:
            break
        rhos.append(rho)
        vals.append(val)
    if len(rhos) < 4:
        if not rhos:
            return math.inf
        raise EstimationError("too few resolvable radii for a line-type fit")
    slope = np.polyfit(np.log(rhos), np.log(vals), 1)[0]
    k = round(slope)
    if abs(slope - k) > 0.2:
        raise EstimationError(f"line-type slope {slope:.3f} is not close to an integer")
    return math.inf if k > TYPE_CAP else int(k)


def line_type(D: Domain, xi, v, method: str = "auto") -> float:
    """Order of vanishing of zeta -> r(xi + zeta v) at 0 (math.inf if above the cap)."""
    bp = _as_boundary_point(D, xi)
    v = as_vector(v, D.dim)
    nv = np.linalg.norm(v)
    if nv == 0:
        raise DomainError("zero direction")
    v = v / nv
    if method == "numeric":
        return _numeric_line_type(D, bp.xi, v)
    return _exact_line_type(D, bp.xi, v)


@dataclass(frozen=True, eq=False)
class MultitypeData:
    xi: BoundaryPoint
    basis: np.ndarray  # columns v_0..v_{d-1}
    multitype: tuple

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def vector(self, j: int) -> np.ndarray:
        return self.basis[:, j]

    def to_coords(self, z):
        z = np.asarray(z, dtype=complex)
        return (z - self.xi.xi) @ np.conj(self.basis)

    def from_coords(self, w):
        w = np.asarray(w, dtype=complex)
        return self.xi.xi + w @ self.basis.T

    def as_dict(self) -> dict:
        return {
            "xi": _cvec(self.xi.xi),
            "normal": _cvec(self.xi.normal),
            "basis": [_cvec(self.basis[:, j]) for j in range(self.dim)],
            "multitype": list(self.multitype),
        }


def _cvec(v):
    return [[float(np.real(x)), float(np.imag(x))] for x in np.atleast_1d(v)]


def _orth_complement(space: np.ndarray, vectors) -> np.ndarray:
    """Orthonormal basis of the part of span(space) orthogonal to ``vectors``."""
    if not vectors:
        return space
    A = np.array(vectors).conj() @ space  # coefficients of constraints in the space basis
    ns = null_space(A)
    return space @ ns


def multitype_basis(D: Domain, xi, samples: int = 1024, seed: int = 42) -> MultitypeData:
    """Greedy flag-adapted basis: repeatedly take the highest-type direction left."""
    bp = _as_boundary_point(D, xi)
    d = D.dim
    n = bp.normal
    space = null_space(n.conj()[None, :])  # columns span the complex tangent space
    picks, types = [], []
    while space.shape[1] > 0:
        k = space.shape[1]
        cands = []
        for e in np.eye(d):
            p = space @ (space.conj().T @ e)
            if np.linalg.norm(p) > 1e-8:
                cands.append(p / np.linalg.norm(p))
        cands.extend(space[:, j] for j in range(k))
        if k > 1:
            cands.extend(space @ c for c in sphere_points(samples, k, seed))
        best_t, best_v = -1.0, None
        for c in cands:
            t = line_type(D, bp, c)
            if t > best_t:
                best_t, best_v = t, c
        if math.isinf(best_t):
            raise DomainError("boundary point is not of finite type")
        picks.append(best_v)
        types.append(int(best_t))
        space = _orth_complement(space, picks)
    order = list(reversed(range(len(picks))))
    basis = np.column_stack([n] + [picks[i] for i in order])
    mt = (1,) + tuple(types[i] for i in order)
    # tidy numerical noise so catalog bases come out exactly axis-aligned
    basis = np.where(np.abs(basis) < 1e-14, 0.0, basis)
    q, _ = np.linalg.qr(basis)
    phases = np.diag(q.conj().T @ basis)
    q = q * (phases / np.abs(phases))
    return MultitypeData(bp, q, mt)


def cotype(data: MultitypeData, v) -> tuple[int, int]:
    """(M(v), m(v)): max and min multitype entries over nonzero basis coefficients."""
    v = as_vector(v, data.dim)
    if np.linalg.norm(v) == 0:
        raise DomainError("zero vector has no cotype")
    coeffs = hermitian(v[None, :], data.basis.T)
    support = [m for a, m in zip(coeffs, data.multitype) if abs(a) > 1e-10 * np.linalg.norm(v)]
    return max(support), min(support)


def scaling_map(data: MultitypeData, lam: float) -> np.ndarray:
    if lam <= 0:
        raise DomainError("scaling parameter must be positive")
    return np.diag([lam ** (1.0 / m) for m in data.multitype]).astype(complex)


@dataclass(frozen=True, eq=False)
class ScalingModel:
    H: RealPoly
    weights: tuple
    local_r: RealPoly  # normalized defining function in multitype coordinates
    data: MultitypeData

    def model(self, w):
        w = np.asarray(w, dtype=complex)
        return w[..., 0].real + self.H(w[..., 1:])

    def as_dict(self) -> dict:
        return {"weights": list(self.weights), "H_monomials": self.H.to_monomials(),
                **self.data.as_dict()}


def scaling_model(D: Domain, xi, data: MultitypeData | None = None, seed: int = 42) -> ScalingModel:
    """Weighted-homogeneous part of r in multitype coordinates, gauge Re w_0 coefficient 1."""
    data = data or multitype_basis(D, xi)
    d = D.dim
    local = D.poly.compose_affine(data.xi.xi, data.basis)
    e0 = tuple(1 if k == 0 else 0 for k in range(2 * d))
    c = local.terms.get(e0, 0.0)
    if c <= 0:
        raise EstimationError("defining function has no positive Re w_0 term")
    local = local.scale(1.0 / c)
    wts = np.array([1.0 / m for m in data.multitype])
    low = [(e, a) for e, a in local.terms.items()
           if sum(e) > 0 and float(np.dot(e, np.concatenate([wts, wts]))) < 1 - 1e-9 and abs(a) > 1e-9]
    if low:
        raise EstimationError("terms of weighted degree below one: basis is not flag-adapted")
    part = local.weighted_part(wts, 1.0)
    terms = {e: a for e, a in part.terms.items() if e != e0}
    if any(e[0] or e[d] for e in terms):
        raise EstimationError("weighted part mixes the normal coordinate")
    H = RealPoly(d, terms).drop_variables(range(1, d))
    model = ScalingModel(H, tuple(data.multitype[1:]), local, data)
    _check_model(model, seed)
    return model


def _check_model(model: ScalingModel, seed: int) -> None:
    rng = np.random.default_rng(seed)
    k = len(model.weights)
    m = np.array(model.weights, dtype=float)
    W = rng.normal(size=(200, k)) + 1j * rng.normal(size=(200, k))
    base = model.H(W)
    for t in (0.5, 2.0, 3.0):
        scaled = model.H(W * t ** (1.0 / m))
        if np.max(np.abs(scaled - t * base) / (1 + np.abs(t * base))) > 1e-10:
            raise EstimationError("model polynomial is not weighted homogeneous")
    if np.min(base) < -1e-12:
        raise EstimationError("model polynomial takes negative values")
    A, B = W[:100], W[100:]
    if np.any(model.H(0.5 * (A + B)) > 0.5 * (model.H(A) + model.H(B)) + 1e-9):
        raise EstimationError("model polynomial fails the midpoint convexity test")
    # remainder control in a small weighted neighbourhood of the origin
    eps = 1e-4
    U = rng.normal(size=(200, k + 1)) + 1j * rng.normal(size=(200, k + 1))
    U /= np.linalg.norm(U, axis=1, keepdims=True)
    w = U * np.concatenate([[eps], eps ** (1.0 / m)])
    R = model.local_r(w) - model.model(w)
    size = np.abs(w[:, 0]) + np.sum(np.abs(w[:, 1:]) ** m, axis=1)
    if np.any(np.abs(R) > 0.1 * size):
        raise EstimationError("remainder is not small compared with the weighted size")


def model_grid(model: ScalingModel, n: int = 9) -> np.ndarray:
    """A fixed compact grid inside the model domain {Re w_0 + H(w') < 0}."""
    k = len(model.weights)
    a = np.linspace(-1.0, -0.1, n)
    b = np.linspace(-1.0, 1.0, n)
    s = np.linspace(-0.9, 0.9, 5)
    pts = []
    for x0 in a:
        for y0 in b:
            for x1 in s:
                for y1 in s:
                    w = np.zeros(k + 1, complex)
                    w[0] = x0 + 1j * y0
                    w[1:] = (x1 + 1j * y1) / np.sqrt(k)
                    pts.append(w)
    P = np.array(pts)
    return P[model.model(P) < -0.05]


def scaling_defect(model: ScalingModel, lam: float, grid: np.ndarray | None = None) -> float:
    """sup over the grid of |lam * r(A_lam^{-1} w) - (Re w_0 + H(w'))|."""
    grid = model_grid(model) if grid is None else grid
    inv = np.concatenate([[1.0 / lam], lam ** (-1.0 / np.array(model.weights, dtype=float))])
    return float(np.max(np.abs(lam * model.local_r(grid * inv) - model.model(grid))))


def multitype_report(D: Domain, xi) -> dict:
    data = multitype_basis(D, xi)
    out = {"domain": D.name, **data.as_dict()}
    try:
        out["model"] = {"weights": list(data.multitype[1:]),
                        "H_monomials": scaling_model(D, xi, data).H.to_monomials()}
    except EstimationError as exc:
        out["model"] = {"error": str(exc)}
    return out
