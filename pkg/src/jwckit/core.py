"""One-dimensional hyperbolic geometry and small complex linear algebra helpers.

Normalization: the Poincare metric of the unit disc is 2|v|/(1-|z|^2), so
k(0, t) = log((1+t)/(1-t)).  The half-plane is the *left* half-plane
Re w < 0 and the Cayley map C(z) = (z-1)/(z+1) carries the disc onto it,
sending the boundary point 1 to 0.
"""

from __future__ import annotations

import numpy as np


class DomainError(ValueError):
    """A point or argument lies outside the domain of an operation."""


class DegenerateBoundaryError(DomainError):
    """The gradient of a defining function vanishes at a boundary point."""


class EstimationError(RuntimeError):
    """A numerical limit or fit did not meet its acceptance threshold."""


def as_vector(z, dim: int | None = None) -> np.ndarray:
    """Return ``z`` as a finite 1-d complex array, checking its length."""
    arr = np.atleast_1d(np.asarray(z, dtype=complex))
    if arr.ndim != 1:
        raise DomainError(f"expected a vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError("non-finite entry in complex vector")
    if dim is not None and arr.shape[0] != dim:
        raise DomainError(f"dimension mismatch: expected {dim}, got {arr.shape[0]}")
    return arr


def as_scalar(z) -> complex:
    z = complex(z)
    if not (np.isfinite(z.real) and np.isfinite(z.imag)):
        raise DomainError("non-finite complex scalar")
    return z


def hermitian(u, v):
    """Standard Hermitian product <u, v> = sum u_j conj(v_j), linear in ``u``.

    Works on stacked vectors along the last axis.
    """
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    return np.sum(u * np.conj(v), axis=-1)


def norm(u) -> float:
    return float(np.linalg.norm(np.asarray(u, dtype=complex)))


def _log_ratio(rho, one_minus_rho_sq):
    # log((1+rho)/(1-rho)) = log((1+rho)^2 / (1-rho^2)), no cancellation near rho=1
    return 2.0 * np.log1p(rho) - np.log(one_minus_rho_sq)


def _disc_check(z):
    if np.any(np.abs(z) >= 1.0) or not np.all(np.isfinite(z)):
        raise DomainError("point outside the open unit disc")


def poincare_distance_disc(z1, z2):
    """Poincare distance on the unit disc (vectorized over array inputs)."""
    z1 = np.asarray(z1, dtype=complex)
    z2 = np.asarray(z2, dtype=complex)
    _disc_check(z1)
    _disc_check(z2)
    a1 = np.abs(z1)
    a2 = np.abs(z2)
    denom = np.abs(1.0 - np.conj(z1) * z2)
    rho = np.abs(z1 - z2) / denom
    # 1 - rho^2 = (1-|z1|^2)(1-|z2|^2)/|1 - conj(z1) z2|^2
    one_minus = (1.0 - a1) * (1.0 + a1) * (1.0 - a2) * (1.0 + a2) / denom**2
    out = _log_ratio(rho, one_minus)
    out = np.where(rho == 0.0, 0.0, np.maximum(out, 0.0))
    return float(out) if out.ndim == 0 else out


def poincare_metric_disc(z, v) -> float:
    z = as_scalar(z)
    _disc_check(np.asarray(z))
    a = abs(z)
    return 2.0 * abs(complex(v)) / ((1.0 - a) * (1.0 + a))


def _halfplane_check(w):
    if np.any(np.real(w) >= 0.0) or not np.all(np.isfinite(w)):
        raise DomainError("point outside the left half-plane Re w < 0")


def halfplane_distance(w1, w2):
    """Distance on {Re w < 0}, equal to the disc distance of the Cayley preimages."""
    w1 = np.asarray(w1, dtype=complex)
    w2 = np.asarray(w2, dtype=complex)
    _halfplane_check(w1)
    _halfplane_check(w2)
    denom = np.abs(w1 + np.conj(w2))
    rho = np.abs(w1 - w2) / denom
    one_minus = 4.0 * np.real(w1) * np.real(w2) / denom**2
    out = _log_ratio(rho, one_minus)
    out = np.where(rho == 0.0, 0.0, np.maximum(out, 0.0))
    return float(out) if out.ndim == 0 else out


def halfplane_metric(w, u) -> float:
    w = as_scalar(w)
    _halfplane_check(np.asarray(w))
    return abs(complex(u)) / abs(w.real)


def cayley(z):
    """C(z) = (z-1)/(z+1): disc -> left half-plane."""
    z = np.asarray(z, dtype=complex)
    if np.any(z == -1.0):
        raise DomainError("Cayley map has a pole at -1")
    out = (z - 1.0) / (z + 1.0)
    return complex(out) if out.ndim == 0 else out


def cayley_inverse(w):
    """C^{-1}(w) = (1+w)/(1-w): left half-plane -> disc."""
    w = np.asarray(w, dtype=complex)
    if np.any(w == 1.0):
        raise DomainError("inverse Cayley map has a pole at 1")
    out = (1.0 + w) / (1.0 - w)
    return complex(out) if out.ndim == 0 else out


def disc_distance_from_origin(rho, one_minus_rho=None):
    """k(0, rho) given rho and, optionally, an accurate value of 1 - rho."""
    rho = np.asarray(rho, dtype=float)
    if one_minus_rho is None:
        one_minus_rho = 1.0 - rho
    one_minus_rho = np.asarray(one_minus_rho, dtype=float)
    out = np.log1p(rho) - np.log(one_minus_rho)
    return float(out) if out.ndim == 0 else out


def halton(n: int, dim: int, seed: int = 42) -> np.ndarray:
    """Scrambled Halton points in [0,1)^dim, deterministic for a given seed."""
    from scipy.stats import qmc

    return qmc.Halton(d=dim, scramble=True, seed=seed).random(n)


def sphere_points(n: int, dim: int, seed: int = 42) -> np.ndarray:
    """Quasi-random unit vectors in C^dim (real dimension 2*dim)."""
    from scipy.stats import norm as _normal

    u = halton(n, 2 * dim, seed)
    g = _normal.ppf(np.clip(u, 1e-12, 1 - 1e-12))
    v = g[:, :dim] + 1j * g[:, dim:]
    return v / np.linalg.norm(v, axis=1, keepdims=True)
