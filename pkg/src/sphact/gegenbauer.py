"""Zonal Gegenbauer basis phi_{n,k}, normalized by the two sphere anchors.

The family is fixed by requiring, for every degree k,

* ``phi_{n,k}(1) = alpha_{n,k} / vol(S^n)``  (sup norm, attained at 1), and
* ``int phi_{n,k}^2 dmu_n = alpha_{n,k} / (vol(S^n) vol(S^{n-1}))``,

where ``dmu_n = (1-t^2)^{(n-2)/2} dt`` on [-1, 1].  Evaluation runs the
classical Gegenbauer three-term recurrence with lambda = (n-1)/2 and applies
a per-degree rescaling; for n = 1 the classical family degenerates and
Chebyshev polynomials of the first kind take its place.

The derivative of a degree-k member is proportional to the degree-(k-1)
member of the (n+2)-dimensional family:

    phi'_{n,k}(t) = (n+1) vol(S^{n+2}) / vol(S^n) * phi_{n+2,k-1}(t)

and the constant simplifies to 2*pi for every n.  This identity is how all
derivatives here are computed; no finite differences are involved.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

import numpy as np

from .errors import NumericalError
from .geometry import harmonic_dimension, sphere_volume


def _classical_value_at_one(n: int, k: int) -> int:
    """Classical C_k^{(n-1)/2}(1) for n >= 2 (exact integer); T_k(1)=1 for n=1."""
    if n == 1:
        return 1
    return comb(k + n - 2, k)


@dataclass(frozen=True)
class GegenbauerBasis:
    """Immutable evaluator for {phi_{n,k}}_{k<=K}; safe to share across threads."""

    n: int
    K: int
    scale: np.ndarray = field(repr=False)

    def _classical_rows(self, t: np.ndarray, kmax: int) -> np.ndarray:
        """Classical family values, rows k=0..kmax, columns matching t."""
        rows = np.empty((kmax + 1, t.size))
        rows[0] = 1.0
        if kmax == 0:
            return rows
        if self.n == 1:
            rows[1] = t
            for k in range(2, kmax + 1):
                rows[k] = 2.0 * t * rows[k - 1] - rows[k - 2]
        else:
            lam = (self.n - 1) / 2.0
            rows[1] = 2.0 * lam * t
            for k in range(2, kmax + 1):
                rows[k] = (2.0 * t * (k + lam - 1.0) * rows[k - 1]
                           - (k + 2.0 * lam - 2.0) * rows[k - 2]) / k
        return rows

    def evaluate_all(self, t) -> np.ndarray:
        """Matrix of phi_{n,k}(t) for k = 0..K; shape (K+1, len(t))."""
        arr = np.atleast_1d(np.asarray(t, dtype=float)).ravel()
        return self._classical_rows(arr, self.K) * self.scale[:, None]

    def evaluate(self, k: int, t):
        """phi_{n,k}(t); t may be a scalar or an array of any shape."""
        if not 0 <= k <= self.K:
            raise ValueError(f"degree k={k} outside basis range 0..{self.K}")
        arr = np.asarray(t, dtype=float)
        vals = self._classical_rows(np.atleast_1d(arr).ravel(), k)[k] * self.scale[k]
        return float(vals[0]) if arr.ndim == 0 else vals.reshape(arr.shape)

    def evaluate_derivative(self, k: int, t):
        """phi'_{n,k}(t) through the dimension-shift identity (exactly 0 for k=0)."""
        if not 0 <= k <= self.K:
            raise ValueError(f"degree k={k} outside basis range 0..{self.K}")
        if k == 0:
            return np.zeros_like(np.asarray(t, dtype=float)) if np.ndim(t) else 0.0
        shifted = basis(self.n + 2, k - 1)
        vals = derivative_scale(self.n) * np.asarray(shifted.evaluate(k - 1, t))
        return float(vals) if np.ndim(t) == 0 else vals

    def derivative_all(self, t) -> np.ndarray:
        """Matrix of phi'_{n,k}(t) for k = 0..K; row 0 is identically zero."""
        arr = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.zeros((self.K + 1, arr.size))
        if self.K >= 1:
            shifted = basis(self.n + 2, self.K - 1)
            out[1:] = derivative_scale(self.n) * shifted.evaluate_all(arr)
        return out


def derivative_scale(n: int) -> float:
    """(n+1) vol(S^{n+2}) / vol(S^n); identically 2*pi."""
    return (n + 1) * sphere_volume(n + 2) / sphere_volume(n)


@lru_cache(maxsize=None)
def basis(n: int, K: int) -> GegenbauerBasis:
    """Build (and memoize) the basis for S^n up to degree K."""
    return build_basis(n, K)


def build_basis(n: int, K: int) -> GegenbauerBasis:
    """Construct the normalized family; fails if degree K overflows float range."""
    if n < 1:
        raise ValueError(f"build_basis requires n >= 1, got n={n}")
    if K < 0:
        raise ValueError(f"max degree must be >= 0, got K={K}")
    vol = sphere_volume(n)
    scale = np.empty(K + 1)
    for k in range(K + 1):
        anchor = harmonic_dimension(n, k) / vol
        classical_one = _classical_value_at_one(n, k)
        if not (np.isfinite(anchor) and np.isfinite(float(classical_one))):
            safe = k - 1
            raise NumericalError(
                f"basis for n={n} overflows at degree {k}; largest safe K is {safe}"
            )
        scale[k] = anchor / classical_one
    return GegenbauerBasis(n=n, K=K, scale=scale)


def sup_norm(n: int, k: int) -> float:
    """max_{|t|<=1} |phi_{n,k}(t)|, attained at t = 1."""
    return harmonic_dimension(n, k) / sphere_volume(n)


def derivative_sup(n: int, k: int) -> float:
    """M_k = max_{|t|<=1} |phi'_{n,k}(t)| = (n+1) alpha_{n+2,k-1} / vol(S^n)."""
    if k == 0:
        return 0.0
    return (n + 1) * harmonic_dimension(n + 2, k - 1) / sphere_volume(n)


def second_derivative_sup(n: int, k: int) -> float:
    """max |phi''_{n,k}|, from two applications of the dimension-shift identity."""
    if k < 2:
        return 0.0
    return derivative_scale(n) * derivative_scale(n + 2) * sup_norm(n + 4, k - 2)
