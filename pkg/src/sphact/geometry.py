"""Exact sphere constants: surface volumes, harmonic-space dimensions, moments.

Conventions used throughout the package:

* ``S^n`` is the unit sphere in ``R^{n+1}``.
* All integrals over ``S^n`` use the unnormalized surface measure, so the
  integral of 1 equals ``vol(S^n)``.
"""

import math
from math import comb, gamma, pi


def sphere_volume(n: int) -> float:
    """Surface volume of S^n: ``2 pi^{(n+1)/2} / Gamma((n+1)/2)``.

    ``sphere_volume(1) = 2 pi`` (circumference), ``sphere_volume(2) = 4 pi``.
    """
    if n < 0:
        raise ValueError(f"sphere dimension must be >= 0, got {n}")
    return 2.0 * pi ** ((n + 1) / 2.0) / gamma((n + 1) / 2.0)


def harmonic_dimension(n: int, k: int) -> int:
    """Dimension of the space of degree-k spherical harmonics on S^n.

    Computed exactly in integer arithmetic as C(n+k, k) - C(n+k-2, k-2);
    equals 1 for k=0 and n+1 for k=1.
    """
    if n < 1:
        raise ValueError(f"harmonic_dimension requires n >= 1, got n={n}")
    if k < 0:
        raise ValueError(f"degree must be >= 0, got k={k}")
    if k == 0:
        return 1
    if k == 1:
        return n + 1
    return comb(n + k, k) - comb(n + k - 2, k - 2)


def monomial_sphere_moment(n: int, exponents) -> float:
    """Integral of ``x_1^{a_1} ... x_{n+1}^{a_{n+1}}`` over S^n (unnormalized).

    Zero when any exponent is odd; otherwise the classical product-of-Gamma
    closed form ``2 prod Gamma((a_i+1)/2) / Gamma(sum (a_i+1)/2)``.
    """
    exps = list(exponents)
    if len(exps) != n + 1:
        raise ValueError(f"expected {n + 1} exponents for S^{n}, got {len(exps)}")
    if any(e < 0 or e != int(e) for e in exps):
        raise ValueError(f"exponents must be nonnegative integers, got {exps}")
    if any(int(e) % 2 == 1 for e in exps):
        return 0.0
    log_num = sum(math.lgamma((e + 1) / 2.0) for e in exps)
    log_den = math.lgamma(sum((e + 1) / 2.0 for e in exps))
    return 2.0 * math.exp(log_num - log_den)
