"""The squared-coefficient transform g_theta and everything built on it.

For a decomposition theta = sum a_k phi_{n,k}, the function
``g(t) = sum a_k^2 phi_{n,k}(t)`` is the zonal correlation profile of the
layer map; ``g(1)`` is the squared constant layer norm and
``T = inf |g'(t)|`` drives the denoising guarantee.  Certified lower bounds
on T combine a grid minimum with a Lipschitz slack for the truncated series
and an analytic tail bound for the discarded degrees.
"""

from dataclasses import dataclass, field

import numpy as np

from .activations import Activation, bi_laplacian, get_activation
from .errors import SmoothnessError
from .gegenbauer import basis, second_derivative_sup
from .geometry import harmonic_dimension, sphere_volume
from .quadrature import Decomposition, decompose, gauss_jacobi, integrate


def g_theta(dec: Decomposition, t):
    """g(t) = sum_k a_k^2 phi_{n,k}(t)."""
    sq = dec.coeffs ** 2
    vals = sq @ basis(dec.n, dec.K).evaluate_all(t)
    return vals if np.ndim(t) else float(vals[0])


def g_theta_prime(dec: Decomposition, t):
    """g'(t) = sum_k a_k^2 phi'_{n,k}(t), via the dimension-shift identity."""
    sq = dec.coeffs ** 2
    vals = sq @ basis(dec.n, dec.K).derivative_all(t)
    return vals if np.ndim(t) else float(vals[0])


def layer_norm_constant(dec: Decomposition) -> float:
    """Squared layer norm c^2 = g(1) = sum a_k^2 alpha_{n,k} / vol(S^n)."""
    alphas = np.array([harmonic_dimension(dec.n, k) for k in range(dec.K + 1)])
    return float(np.dot(dec.coeffs ** 2, alphas)) / sphere_volume(dec.n)


def layer_norm_by_quadrature(act: Activation, n: int, Q: int = 160) -> float:
    """Independent route to c^2: vol(S^{n-1}) * int theta^2 dmu_n."""
    rule = gauss_jacobi(n, Q)
    return sphere_volume(n - 1) * integrate(rule, lambda t: act(t) ** 2)


@dataclass(frozen=True)
class GThetaProfile:
    """Sampled g and g' over a grid, with the derived summary statistics."""

    dec: Decomposition
    grid: np.ndarray = field(repr=False)
    g_values: np.ndarray = field(repr=False)
    gprime_values: np.ndarray = field(repr=False)
    T_empirical: float = 0.0
    g_at_1: float = 0.0


def gtheta_profile(dec: Decomposition, grid_size: int = 4096) -> GThetaProfile:
    grid = np.linspace(-1.0, 1.0, grid_size)
    return GThetaProfile(
        dec=dec,
        grid=grid,
        g_values=np.asarray(g_theta(dec, grid)),
        gprime_values=np.asarray(g_theta_prime(dec, grid)),
        T_empirical=min_gprime(dec, grid_size).T,
        g_at_1=layer_norm_constant(dec),
    )


@dataclass(frozen=True)
class MinGPrime:
    """Minimum of g' over [-1, 1].

    ``signed_min`` is the actual minimum; ``T`` equals it when g' keeps one
    sign and is 0 when g' crosses zero (the guarantee is then vacuous).
    """

    T: float
    t_min: float
    signed_min: float
    sign_change: bool


def min_gprime(dec: Decomposition, grid_size: int = 4096,
               refine_tol: float = 1e-10) -> MinGPrime:
    """Grid minimum of g' refined by local ternary search to refine_tol in t."""
    if grid_size < 1000:
        raise ValueError(f"grid_size must be >= 1000, got {grid_size}")
    grid = np.linspace(-1.0, 1.0, grid_size)
    vals = np.asarray(g_theta_prime(dec, grid))
    i = int(np.argmin(vals))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, grid_size - 1)]
    while hi - lo > refine_tol:
        m1 = lo + (hi - lo) / 3.0
        m2 = hi - (hi - lo) / 3.0
        if g_theta_prime(dec, m1) <= g_theta_prime(dec, m2):
            hi = m2
        else:
            lo = m1
    t_min = 0.5 * (lo + hi)
    signed = min(float(g_theta_prime(dec, t_min)), float(vals[i]))
    crosses = signed < 0.0 < float(vals.max())
    T = 0.0 if crosses else abs(signed) if signed >= 0 else signed
    return MinGPrime(T=T, t_min=t_min, signed_min=signed, sign_change=crosses)


@dataclass(frozen=True)
class CertifiedBound:
    """A provable lower bound on inf g' for a C^4 activation at truncation K."""

    activation: str
    n: int
    K: int
    T_lower: float
    tail: float
    delta_theta_n: float
    A_theta_n: float
    grid_slack: float


def _tail_parts(act: Activation, n: int, K: int, Q: int = 200):
    """Tail machinery: delta = ||Lap^2 (theta o f)||^2, then A and the K^-5/5 tail.

    The chain: k^8 ||h_k||^2 <= delta with ||h_k||^2 = a_k^2 alpha_{n,k}/vol,
    so a_k^2 <= delta vol(S^n) / (alpha_{n,k} k^8).  Multiplying by
    M_k = (n+1) alpha_{n+2,k-1} / vol(S^n) and using
    alpha_{n+2,k-1}/alpha_{n,k} = k (k+n-1) / (n (n+1)) gives

        |a_k^2 phi'_{n,k}(t)| <= delta (k+n-1) / (n k^7) <= A / k^6

    with A = delta (K+n) / (n (K+1)) valid for every k >= K+1, and
    sum_{k>K} k^-6 <= K^-5 / 5.
    """
    if act.smoothness_order < 4:
        raise SmoothnessError(
            f"certified bounds need a C^4 activation; {act.name!r} is not smooth enough"
        )
    rule = gauss_jacobi(n, Q)
    delta = sphere_volume(n - 1) * integrate(rule, lambda t: bi_laplacian(act, n, t) ** 2)
    A = delta * (K + n) / (n * (K + 1))
    tail = A * K ** -5 / 5.0
    return delta, A, tail


def tail_bound(act: Activation, n: int, K: int) -> float:
    """Upper bound on sum_{k>K} |a_k^2 phi'_{n,k}(t)|, uniform over [-1, 1]."""
    return _tail_parts(act, n, K)[2]


def certified_T_lower(act: Activation, n: int, K: int = 10,
                      grid_size: int = 4096) -> CertifiedBound:
    """True lower bound: grid minimum minus Lipschitz grid slack minus tail.

    The grid slack bounds the dip of the truncated g' between neighbouring
    nodes by (spacing/2) times a Lipschitz constant sum a_k^2 max|phi''_{n,k}|.
    """
    delta, A, tail = _tail_parts(act, n, K)
    dec = decompose(act, n, K)
    grid = np.linspace(-1.0, 1.0, grid_size)
    grid_min = float(np.min(g_theta_prime(dec, grid)))
    lipschitz = float(sum(
        dec.coeffs[k] ** 2 * second_derivative_sup(n, k) for k in range(K + 1)
    ))
    slack = lipschitz * (grid[1] - grid[0]) / 2.0
    return CertifiedBound(
        activation=act.name, n=n, K=K,
        T_lower=grid_min - slack - tail,
        tail=tail, delta_theta_n=delta, A_theta_n=A, grid_slack=slack,
    )


@dataclass(frozen=True)
class TableRow:
    activation: str
    n: int
    K: int
    T_empirical: float
    T_certified: float | None
    g_at_1: float
    ratio: float


def table_report(acts, dims, K: int = 10, Q: int | None = None) -> list[TableRow]:
    """One row per (activation, n): T from the grid minimum, c column = g(1)."""
    rows = []
    for name in acts:
        act = get_activation(name) if isinstance(name, str) else name
        for n in dims:
            dec = decompose(act, n, K, Q=Q)
            T = min_gprime(dec).T
            c = layer_norm_constant(dec)
            cert = None
            if act.smoothness_order >= 4:
                cert = certified_T_lower(act, n, K).T_lower
            rows.append(TableRow(
                activation=act.name, n=n, K=K, T_empirical=T,
                T_certified=cert, g_at_1=c,
                ratio=T / c if c != 0 else float("nan"),
            ))
    return rows


@dataclass(frozen=True)
class PlotData:
    """Curve columns for one activation: theta, truncated series, g, g'."""

    activation: str
    n: int
    K: int
    t: np.ndarray = field(repr=False)
    theta: np.ndarray = field(repr=False)
    approx: np.ndarray = field(repr=False)
    g: np.ndarray = field(repr=False)
    gprime: np.ndarray = field(repr=False)


def plot_data(act: Activation, n: int, K: int = 30, grid_size: int = 512) -> PlotData:
    dec = decompose(act, n, K)
    t = np.linspace(-1.0, 1.0, grid_size)
    P = basis(n, K).evaluate_all(t)
    return PlotData(
        activation=act.name, n=n, K=K, t=t,
        theta=np.asarray(act(t)),
        approx=dec.coeffs @ P,
        g=np.asarray(g_theta(dec, t)),
        gprime=np.asarray(g_theta_prime(dec, t)),
    )
