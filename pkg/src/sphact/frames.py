"""Spherical designs, zonal Gram matrices, tight-frame checks, noise synthesis.

A design here is a finite point set whose equal-weight average reproduces the
normalized sphere integral for all polynomials up to its exactness degree.
For a design exact to degree 2k, the zonal kernels t -> phi_{n,k}(sigma . t)
at the design points form a tight frame for the degree-k harmonics with
frame constant N / vol(S^n) under the unnormalized inner product (the Gram
matrix G then satisfies G^2 = c G, trace G = N alpha_{n,k} / vol(S^n), and
its nonzero eigenvalues all equal c with multiplicity alpha_{n,k}).
"""

import io
import itertools
from dataclasses import dataclass, field
from math import pi, sqrt

import numpy as np

from .errors import NumericalError
from .gegenbauer import basis
from .geometry import harmonic_dimension, monomial_sphere_moment, sphere_volume


@dataclass(frozen=True)
class DesignSet:
    """Unit points on S^n with a known polynomial exactness degree."""

    n: int
    points: np.ndarray = field(repr=False)
    exactness_degree: int = 0

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != self.n + 1:
            raise ValueError(f"points must have shape (N, {self.n + 1})")
        norms = np.linalg.norm(pts, axis=1)
        if np.abs(norms - 1.0).max() > 1e-12:
            raise ValueError("design points must lie on the unit sphere (tol 1e-12)")
        object.__setattr__(self, "points", pts)

    @property
    def N(self) -> int:
        return self.points.shape[0]


def design_circle(N: int) -> DesignSet:
    """N equispaced points on S^1; trigonometric exactness degree N-1."""
    if N < 1:
        raise ValueError(f"need N >= 1 points, got {N}")
    ang = 2.0 * pi * np.arange(N) / N
    pts = np.stack([np.cos(ang), np.sin(ang)], axis=1)
    return DesignSet(n=1, points=pts, exactness_degree=N - 1)


def _octahedron() -> np.ndarray:
    return np.vstack([np.eye(3), -np.eye(3)])


def _icosahedron() -> np.ndarray:
    g = (1.0 + sqrt(5.0)) / 2.0
    pts = []
    for s1 in (1, -1):
        for s2 in (1, -1):
            pts += [(0.0, s1, s2 * g), (s1, s2 * g, 0.0), (s2 * g, 0.0, s1)]
    return np.asarray(pts) / sqrt(1.0 + g * g)


def _dodecahedron() -> np.ndarray:
    g = (1.0 + sqrt(5.0)) / 2.0
    pts = [(s1, s2, s3) for s1 in (1, -1) for s2 in (1, -1) for s3 in (1, -1)]
    for s1 in (1, -1):
        for s2 in (1, -1):
            pts += [(0.0, s1 / g, s2 * g), (s1 / g, s2 * g, 0.0), (s2 * g, 0.0, s1 / g)]
    return np.asarray(pts, dtype=float) / sqrt(3.0)


_REGISTRY = {
    "octahedron": (_octahedron, 3),
    "icosahedron": (_icosahedron, 5),
    "dodecahedron": (_dodecahedron, 5),
}


def design_registry(name: str) -> DesignSet:
    """Known small designs on S^2: octahedron (D=3), icosahedron and
    dodecahedron (D=5)."""
    if name not in _REGISTRY:
        known = ", ".join(sorted(_REGISTRY))
        raise KeyError(f"unknown design {name!r}; known: {known}")
    build, degree = _REGISTRY[name]
    return DesignSet(n=2, points=build(), exactness_degree=degree)


def design_check(design: DesignSet, degree: int) -> float:
    """Worst monomial residual |point average - normalized moment| up to degree."""
    if degree < 0:
        raise ValueError(f"degree must be >= 0, got {degree}")
    vol = sphere_volume(design.n)
    worst = 0.0
    dims = design.n + 1
    for total in range(degree + 1):
        for exps in itertools.product(range(total + 1), repeat=dims):
            if sum(exps) != total:
                continue
            avg = float(np.prod(design.points ** np.asarray(exps), axis=1).mean())
            ref = monomial_sphere_moment(design.n, exps) / vol
            worst = max(worst, abs(avg - ref))
    return worst


def gram_matrix(design: DesignSet, k: int) -> np.ndarray:
    """G_ij = phi_{n,k}(sigma_i . sigma_j)."""
    if k < 0:
        raise ValueError(f"degree must be >= 0, got k={k}")
    dots = np.clip(design.points @ design.points.T, -1.0, 1.0)
    return np.asarray(basis(design.n, k).evaluate(k, dots))


@dataclass(frozen=True)
class FrameCheck:
    """Outcome of the tight-frame test for kernels at design points."""

    residual: float          # max|G^2 - cG| / c
    frame_constant: float    # c = N / vol(S^n)
    trace_residual: float    # |trace G - N alpha / vol| / c
    rank: int                # eigenvalues within tolerance of c
    eigenvalues: np.ndarray = field(repr=False)
    tight: bool = False


def tight_frame_residual(design: DesignSet, k: int,
                         tol: float = 1e-9) -> FrameCheck:
    """Check G^2 = cG, the trace identity, and the eigenvalue dichotomy."""
    if design.exactness_degree < 2 * k:
        raise ValueError(
            f"design exactness {design.exactness_degree} < 2k = {2 * k}; "
            "the tight-frame identity needs degree-2k exactness"
        )
    G = gram_matrix(design, k)
    c = design.N / sphere_volume(design.n)
    residual = float(np.abs(G @ G - c * G).max()) / c
    trace_target = design.N * harmonic_dimension(design.n, k) / sphere_volume(design.n)
    trace_residual = abs(float(np.trace(G)) - trace_target) / c
    eig = np.linalg.eigvalsh(G)
    near_c = np.abs(eig - c) < tol
    near_0 = np.abs(eig) < tol
    dichotomy = bool(np.all(near_c | near_0))
    rank = int(near_c.sum())
    tight = residual < tol and dichotomy and trace_residual < tol
    return FrameCheck(residual=residual, frame_constant=c,
                      trace_residual=trace_residual, rank=rank,
                      eigenvalues=eig, tight=tight)


@dataclass(frozen=True)
class NoiseAtom:
    """One harmonic degree of structured noise: kernels at points with weights."""

    k: int
    points: np.ndarray = field(repr=False)
    coeffs: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class NoiseSpec:
    """Noise eta = sum_k sum_i e_{k,i} F_k(sigma_{k,i}, .) in atom form."""

    n: int
    atoms: tuple

    @property
    def max_degree(self) -> int:
        return max((a.k for a in self.atoms), default=0)


def synthesize_noise(n: int, components) -> NoiseSpec:
    """Build a NoiseSpec from (k, design-or-points, coefficients) triples.

    When a DesignSet is supplied its exactness must cover degree 2k, which
    makes the attached kernels a tight frame; a bare (m, n+1) point array is
    also accepted (e.g. a single kernel per degree in high dimensions).
    """
    atoms = []
    for k, source, e in components:
        if k < 0:
            raise ValueError(f"noise degree must be >= 0, got k={k}")
        if isinstance(source, DesignSet):
            if source.n != n:
                raise ValueError(f"design lives on S^{source.n}, noise on S^{n}")
            if source.exactness_degree < 2 * k:
                raise ValueError(
                    f"design exactness {source.exactness_degree} < 2k = {2 * k}"
                )
            pts = source.points
        else:
            pts = np.atleast_2d(np.asarray(source, dtype=float))
            if pts.shape[1] != n + 1:
                raise ValueError(f"points must have shape (m, {n + 1})")
            norms = np.linalg.norm(pts, axis=1)
            if np.abs(norms - 1.0).max() > 1e-12:
                raise ValueError("noise atom points must be unit vectors")
        e = np.asarray(e, dtype=float).ravel()
        if e.size != pts.shape[0]:
            raise ValueError(f"degree {k}: {e.size} coefficients for {pts.shape[0]} points")
        atoms.append(NoiseAtom(k=k, points=pts, coeffs=e))
    return NoiseSpec(n=n, atoms=tuple(atoms))


def noise_component_norms(noise: NoiseSpec) -> dict[int, float]:
    """L2 norm of each degree component via the Gram quadratic form.

    ||eta_k||^2 = e^T G e with G_ij = phi_{n,k}(sigma_i . sigma_j); this is
    exact for any point set by the reproducing property.
    """
    norms: dict[int, float] = {}
    for atom in noise.atoms:
        dots = np.clip(atom.points @ atom.points.T, -1.0, 1.0)
        G = np.asarray(basis(noise.n, atom.k).evaluate(atom.k, dots))
        q = float(atom.coeffs @ G @ atom.coeffs)
        if q < -1e-10:
            raise NumericalError(
                f"Gram form for degree {atom.k} is negative ({q:.3e}); broken kernel"
            )
        prev = norms.get(atom.k, 0.0)
        norms[atom.k] = sqrt(prev ** 2 + max(q, 0.0))
    return norms


def noise_total_norm(noise: NoiseSpec) -> float:
    """||eta|| from the per-degree components (degrees are orthogonal)."""
    return sqrt(sum(v ** 2 for v in noise_component_norms(noise).values()))


def design_to_text(design: DesignSet) -> str:
    """Plain text format: header 'n D', then one whitespace-separated point per line."""
    buf = io.StringIO()
    buf.write(f"{design.n} {design.exactness_degree}\n")
    for p in design.points:
        buf.write(" ".join(repr(float(c)) for c in p) + "\n")
    return buf.getvalue()


def design_from_text(text: str) -> DesignSet:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty design text")
    n_str, d_str = lines[0].split()
    pts = np.array([[float(c) for c in ln.split()] for ln in lines[1:]])
    return DesignSet(n=int(n_str), points=pts, exactness_degree=int(d_str))
