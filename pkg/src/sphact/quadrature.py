"""Gauss-Jacobi integration against dmu_n and zonal coefficient extraction."""

from dataclasses import dataclass, field
from math import exp, lgamma, log, pi

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .activations import Activation
from .errors import NumericalError
from .gegenbauer import basis
from .geometry import harmonic_dimension, sphere_volume


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes/weights for integrating f(t) (1-t^2)^{(n-2)/2} dt over [-1, 1]."""

    n: int
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    @property
    def Q(self) -> int:
        return self.nodes.size


def _jacobi_mu0(a: float) -> float:
    """int_{-1}^{1} (1-t^2)^a dt = sqrt(pi) Gamma(a+1) / Gamma(a+3/2)."""
    return exp(0.5 * log(pi) + lgamma(a + 1.0) - lgamma(a + 1.5))


def gauss_jacobi(n: int, Q: int) -> QuadratureRule:
    """Golub-Welsch rule for the weight (1-t^2)^{(n-2)/2}, exact to degree 2Q-1.

    For n = 2 this is the Gauss-Legendre rule; n = 1 gives Gauss-Chebyshev.
    """
    if n < 1:
        raise ValueError(f"gauss_jacobi requires n >= 1, got n={n}")
    if Q < 1:
        raise ValueError(f"node count must be >= 1, got Q={Q}")
    a = (n - 2) / 2.0
    mu0 = _jacobi_mu0(a)
    if Q == 1:
        return QuadratureRule(n=n, nodes=np.array([0.0]), weights=np.array([mu0]))
    # Symmetric weight: recurrence alphas vanish; betas from the Jacobi formulas.
    j = np.arange(1, Q)
    ab = 2.0 * a
    beta = np.empty(Q - 1)
    beta[0] = 4.0 * (1 + a) * (1 + a) / ((2 + ab) ** 2 * (3 + ab))
    if Q > 2:
        jj = j[1:].astype(float)
        beta[1:] = (4.0 * jj * (jj + a) ** 2 * (jj + ab)
                    / ((2 * jj + ab) ** 2 * (2 * jj + ab + 1) * (2 * jj + ab - 1)))
    try:
        nodes, vecs = eigh_tridiagonal(np.zeros(Q), np.sqrt(beta))
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolver failed for Q={Q}, n={n}") from exc
    weights = mu0 * vecs[0] ** 2
    return QuadratureRule(n=n, nodes=nodes, weights=weights)


def split_rule(n: int, Q: int) -> QuadratureRule:
    """Composite rule split at t = 0, for integrands with a kink at the origin.

    Each half [0, 1] carries ceil(Q/2) Gauss-Jacobi nodes with the (1-t)^a
    endpoint factor built into the rule and the smooth (1+t)^a factor folded
    into the weights, so endpoint singularities (n = 1) stay exact.
    """
    if n < 1:
        raise ValueError(f"split_rule requires n >= 1, got n={n}")
    if Q < 2:
        raise ValueError(f"node count must be >= 2, got Q={Q}")
    a = (n - 2) / 2.0
    q = (Q + 1) // 2
    # Rule for int_{-1}^1 g(s) (1-s)^a ds, mapped to [0, 1] by t = (s+1)/2.
    mu0 = exp((a + 1.0) * log(2.0) - log(a + 1.0))
    alpha_j, beta_j = [], []
    b = 0.0
    for jj in range(q):
        den = (2 * jj + a + b) * (2 * jj + a + b + 2)
        alpha_j.append((b * b - a * a) / den if den != 0 else 0.0)
        if jj >= 1:
            num = 4.0 * jj * (jj + a) * (jj + b) * (jj + a + b)
            den2 = (2 * jj + a + b) ** 2 * (2 * jj + a + b + 1) * (2 * jj + a + b - 1)
            beta_j.append(num / den2)
    try:
        s_nodes, vecs = eigh_tridiagonal(np.array(alpha_j), np.sqrt(np.array(beta_j)))
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolver failed for Q={Q}, n={n}") from exc
    u = mu0 * vecs[0] ** 2
    t_half = (s_nodes + 1.0) / 2.0
    w_half = u * 0.5 ** (a + 1.0) * (1.0 + t_half) ** a
    nodes = np.concatenate([-t_half[::-1], t_half])
    weights = np.concatenate([w_half[::-1], w_half])
    return QuadratureRule(n=n, nodes=nodes, weights=weights)


def integrate(rule: QuadratureRule, f) -> float:
    """Weighted node sum of f against dmu_n; rejects non-finite integrand values."""
    vals = np.asarray(f(rule.nodes), dtype=float)
    bad = ~np.isfinite(vals)
    if bad.any():
        t_bad = rule.nodes[bad][0]
        raise NumericalError(f"integrand is not finite at node t={t_bad!r}")
    return float(np.dot(rule.weights, vals))


@dataclass(frozen=True)
class Decomposition:
    """Zonal coefficients (a_0..a_K) of an activation on S^n, with L2 residual."""

    n: int
    K: int
    coeffs: np.ndarray = field(repr=False)
    residual: float = 0.0


def phi_norm_sq(n: int, k: int) -> float:
    """Closed-form squared L2(mu_n) norm of phi_{n,k}."""
    return harmonic_dimension(n, k) / (sphere_volume(n) * sphere_volume(n - 1))


def decompose(act: Activation, n: int, K: int, Q: int | None = None,
              check_refinement: bool = True) -> Decomposition:
    """Project an activation on the basis: a_k = <theta, phi_k>_mu / ||phi_k||^2.

    Smooth members use a plain Gauss-Jacobi rule with Q >= 2K+8 nodes;
    members with a kink at the origin use the composite split rule with
    Q = 4K+64.  Division is by the closed-form norms, which anchors the
    normalization exactly.  For non-polynomial activations the computation
    is repeated with 2Q nodes and must agree to 1e-9 per coefficient.
    """
    if n < 1:
        raise ValueError(f"decompose requires n >= 1, got n={n}")
    if K < 0:
        raise ValueError(f"max degree must be >= 0, got K={K}")
    smooth = act.smoothness_order >= 4
    if Q is None:
        Q = max(2 * K + 8, 64) if smooth else 4 * K + 64
    if Q < 2 * K + 8:
        raise ValueError(f"need Q >= 2K+8 = {2 * K + 8} nodes, got Q={Q}")

    def run(q: int) -> tuple[np.ndarray, float]:
        rule = gauss_jacobi(n, q) if smooth else split_rule(n, q)
        theta = np.asarray(act(rule.nodes), dtype=float)
        if not np.isfinite(theta).all():
            raise NumericalError(f"activation {act.name!r} not finite on [-1, 1]")
        P = basis(n, K).evaluate_all(rule.nodes)
        inner = P @ (rule.weights * theta)
        norms = np.array([phi_norm_sq(n, k) for k in range(K + 1)])
        coeffs = inner / norms
        theta_sq = float(np.dot(rule.weights, theta * theta))
        return coeffs, theta_sq

    coeffs, theta_sq = run(Q)
    exact_poly = act.polynomial_degree is not None and act.polynomial_degree <= K
    if check_refinement and not exact_poly:
        refined, _ = run(2 * Q)
        drift = float(np.abs(refined - coeffs).max())
        if drift > 1e-9:
            raise NumericalError(
                f"decomposition of {act.name!r} (n={n}, K={K}) did not converge: "
                f"coefficient drift {drift:.3e} when doubling Q={Q}"
            )
        coeffs = refined
    norms = np.array([phi_norm_sq(n, k) for k in range(K + 1)])
    residual_sq = max(theta_sq - float(np.dot(coeffs * coeffs, norms)), 0.0)
    return Decomposition(n=n, K=K, coeffs=coeffs, residual=residual_sq ** 0.5)
