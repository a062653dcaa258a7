"""Activation catalog with hand-derived derivative stacks up to order four.

Derivatives are closed forms, not finite differences or autodiff, so that the
zonal Laplacian operators below stay exact.  Members with a kink at the
origin (relu, elu, leaky_relu) evaluate one-sided: at exactly t = 0 the
right-hand branch is used.  That choice only matters on a measure-zero set
and is fixed here for reproducibility.
"""

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import SmoothnessError


@dataclass(frozen=True)
class Activation:
    """A named scalar function theta with evaluators for orders 0..4.

    ``smoothness_order`` is the highest derivative order that exists
    everywhere on [-1, 1] (4 stands in for C-infinity); kinky members carry
    the order at which their stacks stop being globally valid.
    """

    name: str
    smoothness_order: int
    polynomial_degree: int | None = None
    kink: float | None = None
    _eval: Callable = field(repr=False, default=None)

    def __call__(self, t, order: int = 0):
        if not 0 <= order <= 4:
            raise ValueError(f"derivative order must be in 0..4, got {order}")
        arr = np.atleast_1d(np.asarray(t, dtype=float))
        vals = self._eval(order, arr)
        return vals if np.ndim(t) else float(vals[0])


def _sigmoid(x):
    return 1.0 / (1.0 + np.exp(-x))


def _sigmoid_stack(order, x):
    s = _sigmoid(x)
    u = s * (1.0 - s)
    if order == 0:
        return s
    if order == 1:
        return u
    if order == 2:
        return u * (1.0 - 2.0 * s)
    if order == 3:
        return u * (1.0 - 6.0 * s + 6.0 * s * s)
    return u * (1.0 - 2.0 * s) * (1.0 - 12.0 * s + 12.0 * s * s)


def _tanh_stack(order, x):
    T = np.tanh(x)
    u = 1.0 - T * T
    if order == 0:
        return T
    if order == 1:
        return u
    if order == 2:
        return -2.0 * T * u
    if order == 3:
        return u * (6.0 * T * T - 2.0)
    return u * (16.0 * T - 24.0 * T ** 3)


def _id_stack(order, x):
    if order == 0:
        return x.copy()
    if order == 1:
        return np.ones_like(x)
    return np.zeros_like(x)


def _softplus_stack(order, x):
    if order == 0:
        return np.logaddexp(0.0, x)
    return _sigmoid_stack(order - 1, x)


def _swish_stack(order, x):
    # swish = x * sigmoid(x); Leibniz rule with the sigmoid stack.
    if order == 0:
        return x * _sigmoid(x)
    return x * _sigmoid_stack(order, x) + order * _sigmoid_stack(order - 1, x)


def _gelu_paper_stack(order, x):
    E = np.exp(-x * x)
    if order == 0:
        return x * E
    if order == 1:
        return E * (1.0 - 2.0 * x * x)
    if order == 2:
        return E * (4.0 * x ** 3 - 6.0 * x)
    if order == 3:
        return E * (-8.0 * x ** 4 + 24.0 * x * x - 6.0)
    return E * (16.0 * x ** 5 - 80.0 * x ** 3 + 60.0 * x)


def _relu_stack(order, x):
    pos = x >= 0
    if order == 0:
        return np.where(pos, x, 0.0)
    if order == 1:
        return np.where(pos, 1.0, 0.0)
    return np.zeros_like(x)


def _elu_stack(order, x):
    pos = x >= 0
    neg_exp = np.exp(np.minimum(x, 0.0))
    if order == 0:
        return np.where(pos, x, neg_exp - 1.0)
    if order == 1:
        return np.where(pos, 1.0, neg_exp)
    return np.where(pos, 0.0, neg_exp)


def _leaky_relu_stack(order, x, slope=0.01):
    pos = x >= 0
    if order == 0:
        return np.where(pos, x, slope * x)
    if order == 1:
        return np.where(pos, 1.0, slope)
    return np.zeros_like(x)


CATALOG = {
    a.name: a
    for a in (
        Activation("id", 4, polynomial_degree=1, _eval=_id_stack),
        Activation("softplus", 4, _eval=_softplus_stack),
        Activation("tanh", 4, _eval=_tanh_stack),
        Activation("sigmoid", 4, _eval=_sigmoid_stack),
        Activation("swish", 4, _eval=_swish_stack),
        Activation("gelu_paper", 4, _eval=_gelu_paper_stack),
        Activation("relu", 0, kink=0.0, _eval=_relu_stack),
        Activation("elu", 1, kink=0.0, _eval=_elu_stack),
        Activation("leaky_relu", 0, kink=0.0, _eval=_leaky_relu_stack),
    )
}


def get_activation(name: str) -> Activation:
    try:
        return CATALOG[name]
    except KeyError:
        known = ", ".join(sorted(CATALOG))
        raise KeyError(f"unknown activation {name!r}; known: {known}") from None


def spherical_laplacian(act: Activation, n: int, t):
    """Zonal spherical Laplacian of theta(w . x): theta''(t)(1-t^2) - n t theta'(t)."""
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    out = act(t_arr, 2) * (1.0 - t_arr * t_arr) - n * t_arr * act(t_arr, 1)
    return out if np.ndim(t) else float(out[0])


def bi_laplacian(act: Activation, n: int, t):
    """Zonal Laplacian applied twice, expanded analytically (needs C^4).

    Expanding L[L[theta]] with L[f] = (1-t^2) f'' - n t f' gives

        (1-t^2)^2 f4 - (2n+4) t (1-t^2) f3
        + (n(n+2) t^2 - (2n+2)(1-t^2)) f2 + n^2 t f1.
    """
    if act.smoothness_order < 4:
        raise SmoothnessError(
            f"{act.name!r} is not C^4; the iterated zonal Laplacian is undefined"
        )
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    s = 1.0 - t_arr * t_arr
    f1, f2 = act(t_arr, 1), act(t_arr, 2)
    f3, f4 = act(t_arr, 3), act(t_arr, 4)
    out = (s * s * f4
           - (2.0 * n + 4.0) * t_arr * s * f3
           + (n * (n + 2.0) * t_arr * t_arr - (2.0 * n + 2.0) * s) * f2
           + n * n * t_arr * f1)
    return out if np.ndim(t) else float(out[0])
