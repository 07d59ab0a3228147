"""Real polynomials in the real coordinates of C^d.

A point z in C^d has real coordinates (x_0..x_{d-1}, y_0..y_{d-1}) with
z_j = x_j + i y_j.  A polynomial is a mapping exponent-tuple -> coefficient
over these 2d variables.  Only what the defining functions need is here:
evaluation, derivatives, affine substitution and restriction to complex lines.
"""

from __future__ import annotations

from functools import cached_property

import numpy as np
from scipy.signal import convolve2d


def _mul(p: dict, q: dict) -> dict:
    out: dict = {}
    for ea, ca in p.items():
        for eb, cb in q.items():
            e = tuple(i + j for i, j in zip(ea, eb))
            out[e] = out.get(e, 0.0) + ca * cb
    return out


def _pow(p: dict, k: int, nvars: int) -> dict:
    out = {(0,) * nvars: 1.0}
    for _ in range(k):
        out = _mul(out, p)
    return out


class RealPoly:
    """Polynomial with real coefficients in the 2d real coordinates of C^d."""

    def __init__(self, dim: int, terms: dict, tol: float = 0.0):
        self.dim = int(dim)
        clean = {}
        for e, c in terms.items():
            e = tuple(int(k) for k in e)
            if len(e) != 2 * self.dim:
                raise ValueError("exponent length must be twice the complex dimension")
            if abs(c) > tol:
                clean[e] = clean.get(e, 0.0) + float(c)
        self.terms = {e: c for e, c in clean.items() if c != 0.0}
        exps = np.array(list(self.terms) or [(0,) * (2 * self.dim)], dtype=int)
        coefs = np.array(list(self.terms.values()) or [0.0])
        self._exps = exps
        self._coefs = coefs

    # construction helpers -------------------------------------------------
    @classmethod
    def from_monomials(cls, dim: int, monomials) -> "RealPoly":
        """Build from a list of ``{"coef": c, "re": [...], "im": [...]}`` records."""
        terms: dict = {}
        for mono in monomials:
            re = list(mono.get("re", [0] * dim))
            im = list(mono.get("im", [0] * dim))
            if len(re) != dim or len(im) != dim:
                raise ValueError("monomial exponent lists must have length dim")
            e = tuple(re + im)
            terms[e] = terms.get(e, 0.0) + float(mono["coef"])
        return cls(dim, terms)

    def to_monomials(self) -> list:
        d = self.dim
        return [
            {"coef": c, "re": list(e[:d]), "im": list(e[d:])}
            for e, c in sorted(self.terms.items())
        ]

    @classmethod
    def modulus_power(cls, dim: int, j: int, m: int) -> "RealPoly":
        """|z_j|^m for even m, expanded as (x_j^2 + y_j^2)^(m/2)."""
        if m % 2:
            raise ValueError("only even powers of a modulus are polynomial")
        nv = 2 * dim
        ex = [0] * nv
        ex[j] = 2
        ey = [0] * nv
        ey[dim + j] = 2
        base = {tuple(ex): 1.0, tuple(ey): 1.0}
        return cls(dim, _pow(base, m // 2, nv))

    def __add__(self, other: "RealPoly") -> "RealPoly":
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0.0) + c
        return RealPoly(self.dim, terms)

    def scale(self, s: float) -> "RealPoly":
        return RealPoly(self.dim, {e: s * c for e, c in self.terms.items()})

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    # evaluation -------------------------------------------------------------
    def __call__(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        xy = np.concatenate([z.real, z.imag], axis=-1)
        E = self._exps
        K = int(E.max()) if E.size else 0
        mons = None
        for v in range(E.shape[1]):
            col = E[:, v]
            if not col.any():
                continue
            x = xy[..., v]
            pw = np.empty(x.shape + (K + 1,))
            pw[..., 0] = 1.0
            for k in range(1, int(col.max()) + 1):
                pw[..., k] = pw[..., k - 1] * x
            f = pw[..., col]
            mons = f if mons is None else mons * f
        if mons is None:
            return np.full(xy.shape[:-1], float(self._coefs.sum()))
        return mons @ self._coefs

    def derivative(self, var: int) -> "RealPoly":
        terms = {}
        for e, c in self.terms.items():
            if e[var] > 0:
                f = list(e)
                f[var] -= 1
                terms[tuple(f)] = terms.get(tuple(f), 0.0) + c * e[var]
        return RealPoly(self.dim, terms)

    @cached_property
    def _grad_polys(self):
        return [self.derivative(k) for k in range(2 * self.dim)]

    @cached_property
    def _hess_polys(self):
        g = self._grad_polys
        return [[g[a].derivative(b) for b in range(2 * self.dim)] for a in range(2 * self.dim)]

    def real_gradient(self, z) -> np.ndarray:
        """Gradient in R^{2d} ordered (x_0..x_{d-1}, y_0..y_{d-1})."""
        return np.stack([g(z) for g in self._grad_polys], axis=-1)

    def complex_gradient(self, z) -> np.ndarray:
        """dr/dx_j + i dr/dy_j, the Euclidean gradient written as a vector of C^d."""
        g = self.real_gradient(z)
        return g[..., : self.dim] + 1j * g[..., self.dim :]

    def real_hessian(self, z) -> np.ndarray:
        h = self._hess_polys
        n = 2 * self.dim
        return np.array([[h[a][b](z) for b in range(n)] for a in range(n)], dtype=float)

    # substitutions --------------------------------------------------------
    def compose_affine(self, base, matrix) -> "RealPoly":
        """Polynomial w -> r(base + matrix @ w) in the real coordinates of w."""
        base = np.asarray(base, dtype=complex)
        U = np.asarray(matrix, dtype=complex)
        d = self.dim
        nv = 2 * d
        const = (0,) * nv

        def unit(k):
            e = [0] * nv
            e[k] = 1
            return tuple(e)

        # real coordinate x_j and y_j of base + U w as affine polys in (u, s), w = u + i s
        lin = []
        for j in range(d):
            xj = {const: base[j].real}
            for k in range(d):
                xj[unit(k)] = xj.get(unit(k), 0.0) + U[j, k].real
                xj[unit(d + k)] = xj.get(unit(d + k), 0.0) - U[j, k].imag
            lin.append(xj)
        for j in range(d):
            yj = {const: base[j].imag}
            for k in range(d):
                yj[unit(k)] = yj.get(unit(k), 0.0) + U[j, k].imag
                yj[unit(d + k)] = yj.get(unit(d + k), 0.0) + U[j, k].real
            lin.append(yj)
        cache: dict = {}

        def power(var, k):
            key = (var, k)
            if key not in cache:
                cache[key] = _pow(lin[var], k, nv)
            return cache[key]

        out: dict = {}
        for e, c in self.terms.items():
            acc = {const: c}
            for var, k in enumerate(e):
                if k:
                    acc = _mul(acc, power(var, k))
            for ee, cc in acc.items():
                out[ee] = out.get(ee, 0.0) + cc
        scale = max((abs(c) for c in out.values()), default=1.0)
        return RealPoly(d, out, tol=1e-14 * scale)

    def restrict_to_line(self, base, direction) -> np.ndarray:
        """Coefficient array P[i, j] of (a, b) -> r(base + (a + i b) direction)."""
        base = np.asarray(base, dtype=complex)
        v = np.asarray(direction, dtype=complex)
        d = self.dim
        D = max(self.degree, 1)
        lin = []
        for j in range(d):
            lin.append(np.array([[base[j].real, -v[j].imag], [v[j].real, 0.0]]))
        for j in range(d):
            lin.append(np.array([[base[j].imag, v[j].real], [v[j].imag, 0.0]]))
        powers = [[np.ones((1, 1))] for _ in range(2 * d)]
        out = np.zeros((D + 1, D + 1))
        for e, c in self.terms.items():
            acc = np.array([[c]])
            for var, k in enumerate(e):
                while len(powers[var]) <= k:
                    powers[var].append(convolve2d(powers[var][-1], lin[var]))
                if k:
                    acc = convolve2d(acc, powers[var][k])
            out[: acc.shape[0], : acc.shape[1]] += acc[: D + 1, : D + 1]
        return out

    def weighted_part(self, weights, target: float = 1.0, tol: float = 1e-9) -> "RealPoly":
        """Terms whose weighted degree equals ``target``; weights are per complex coordinate."""
        w = np.concatenate([weights, weights])
        terms = {e: c for e, c in self.terms.items() if abs(float(np.dot(e, w)) - target) < tol}
        return RealPoly(self.dim, terms)

    def min_weighted_degree(self, weights) -> float:
        w = np.concatenate([weights, weights])
        return min(float(np.dot(e, w)) for e in self.terms)

    def drop_variables(self, keep) -> "RealPoly":
        """Restrict to the complex coordinates in ``keep`` (others must not occur)."""
        keep = list(keep)
        d = self.dim
        idx = keep + [d + k for k in keep]
        terms = {}
        for e, c in self.terms.items():
            if any(e[k] for k in range(2 * d) if k not in idx):
                raise ValueError("polynomial depends on a dropped variable")
            terms[tuple(e[k] for k in idx)] = c
        return RealPoly(len(keep), terms)

