"""Designs, Gram matrices, tight frames, structured noise."""

import math

import numpy as np
import pytest

from sphact.frames import (DesignSet, design_check, design_circle,
                           design_from_text, design_registry, design_to_text,
                           gram_matrix, noise_component_norms, noise_total_norm,
                           synthesize_noise, tight_frame_residual)
from sphact.geometry import harmonic_dimension, sphere_volume


class TestDesigns:
    def test_circle_points(self):
        d = design_circle(4)
        assert d.exactness_degree == 3
        np.testing.assert_allclose(
            d.points, [[1, 0], [0, 1], [-1, 0], [0, -1]], atol=1e-15)

    def test_circle_roots_of_unity_sums(self):
        d = design_circle(7)
        ang = np.arctan2(d.points[:, 1], d.points[:, 0])
        for k in range(1, 7):
            assert abs(np.cos(k * ang).sum()) < 1e-12
            assert abs(np.sin(k * ang).sum()) < 1e-12

    def test_circle_design_check(self):
        assert design_check(design_circle(4), 3) < 1e-14
        assert design_check(design_circle(12), 10) < 1e-12

    def test_circle_fails_beyond_exactness(self):
        # average of cos^4 over 4 equispaced angles is 1/2 against the true
        # moment 3/8, so the degree-4 check fails by exactly 1/8
        residual = design_check(design_circle(4), 4)
        assert residual == pytest.approx(1 / 8, abs=1e-12)

    def test_registry_members(self):
        for name, n_pts, degree in [("octahedron", 6, 3), ("icosahedron", 12, 5),
                                    ("dodecahedron", 20, 5)]:
            d = design_registry(name)
            assert d.N == n_pts
            assert d.exactness_degree == degree
            assert design_check(d, degree) < 1e-12

    def test_icosahedron_not_a_6_design(self):
        assert design_check(design_registry("icosahedron"), 6) > 1e-3

    def test_unknown_name(self):
        with pytest.raises(KeyError):
            design_registry("cube24")

    def test_non_unit_points_rejected(self):
        with pytest.raises(ValueError):
            DesignSet(n=1, points=np.array([[1.0, 0.5]]), exactness_degree=0)

    def test_text_round_trip(self):
        d = design_registry("icosahedron")
        text = design_to_text(d)
        back = design_from_text(text)
        assert back.n == d.n and back.exactness_degree == d.exactness_degree
        np.testing.assert_array_equal(back.points, d.points)


class TestGramMatrix:
    def test_degree_zero_constant(self):
        d = design_circle(5)
        G = gram_matrix(d, 0)
        np.testing.assert_allclose(G, 1 / (2 * math.pi), atol=1e-15)

    def test_circle4_degree1_circulant(self):
        G = gram_matrix(design_circle(4), 1)
        expected = (1 / math.pi) * np.array(
            [[1, 0, -1, 0], [0, 1, 0, -1], [-1, 0, 1, 0], [0, -1, 0, 1]], float)
        np.testing.assert_allclose(G, expected, atol=1e-14)

    def test_diagonal_is_value_at_one(self):
        for name in ("octahedron", "icosahedron"):
            d = design_registry(name)
            for k in (0, 1, 2):
                G = gram_matrix(d, k)
                expected = harmonic_dimension(2, k) / sphere_volume(2)
                np.testing.assert_allclose(np.diag(G), expected, rtol=1e-12)

    def test_positive_semidefinite(self):
        for d in (design_circle(8), design_registry("icosahedron"),
                  design_registry("dodecahedron")):
            for k in range(6):
                eig = np.linalg.eigvalsh(gram_matrix(d, k))
                assert eig.min() > -1e-10


class TestTightFrame:
    def test_circle4_k1_hand_computation(self):
        chk = tight_frame_residual(design_circle(4), 1)
        assert chk.frame_constant == pytest.approx(2 / math.pi, rel=1e-14)
        assert chk.residual < 1e-12
        assert chk.tight

    def test_icosahedron_k2(self):
        chk = tight_frame_residual(design_registry("icosahedron"), 2)
        assert chk.frame_constant == pytest.approx(12 / (4 * math.pi), rel=1e-14)
        assert chk.residual < 1e-9
        assert chk.rank == harmonic_dimension(2, 2)

    def test_exactness_precondition(self):
        with pytest.raises(ValueError):
            tight_frame_residual(design_circle(3), 2)  # D=2 < 2k=4

    @pytest.mark.parametrize("N", [4, 8, 16])
    def test_circle_family(self, N):
        d = design_circle(N)
        for k in range((N - 1) // 2 + 1):
            chk = tight_frame_residual(d, k)
            assert chk.residual < 1e-9
            assert chk.tight
            # eigenvalue dichotomy: every eigenvalue is ~0 or ~c
            c = chk.frame_constant
            for ev in chk.eigenvalues:
                assert min(abs(ev), abs(ev - c)) < 1e-9

    def test_rank_saturates(self):
        # rank(G) = min(N, alpha_{n,k})
        chk = tight_frame_residual(design_circle(8), 2)
        assert chk.rank == min(8, harmonic_dimension(1, 2))

    def test_frame_reproduction_in_coordinates(self):
        """sum_i |(G a)_i|^2 = c a^T G a for vectors in the Gram row space."""
        d = design_registry("icosahedron")
        G = gram_matrix(d, 2)
        c = d.N / sphere_volume(2)
        rng = np.random.default_rng(5)
        for _ in range(10):
            a = rng.standard_normal(d.N)
            lhs = float(np.sum((G @ a) ** 2))
            rhs = c * float(a @ G @ a)
            assert lhs == pytest.approx(rhs, rel=1e-9)


class TestNoise:
    def test_zero_coefficients(self):
        noise = synthesize_noise(1, [(1, design_circle(4), np.zeros(4))])
        assert noise_component_norms(noise)[1] == 0.0

    def test_single_kernel_norm(self):
        # ||F_k(sigma, .)||^2 = phi_{n,k}(1)
        sigma = np.array([0.0, 0.0, 1.0])
        noise = synthesize_noise(2, [(2, sigma, [1.0])])
        expected = math.sqrt(harmonic_dimension(2, 2) / sphere_volume(2))
        assert noise_component_norms(noise)[2] == pytest.approx(expected, rel=1e-12)

    def test_circle4_cancelling_kernels(self):
        """Coefficients (1,1,1,1) against circulant(1,0,-1,0): kernels sum to 0."""
        noise = synthesize_noise(1, [(1, design_circle(4), np.ones(4))])
        assert noise_component_norms(noise)[1] == pytest.approx(0.0, abs=1e-12)

    def test_total_norm_combines_degrees(self):
        d = design_circle(8)
        noise = synthesize_noise(1, [(1, d, np.ones(8)), (2, d, np.full(8, 0.3))])
        norms = noise_component_norms(noise)
        assert noise_total_norm(noise) == pytest.approx(
            math.sqrt(sum(v ** 2 for v in norms.values())), rel=1e-12)

    def test_exactness_required_for_design_atoms(self):
        with pytest.raises(ValueError):
            synthesize_noise(1, [(2, design_circle(3), np.ones(3))])

    def test_gram_norm_matches_dense_function_norm(self):
        """Quadratic form equals the L2 norm of the synthesized function."""
        d = design_circle(8)
        rng = np.random.default_rng(9)
        e = rng.standard_normal(8)
        noise = synthesize_noise(1, [(2, d, e)])
        # dense evaluation of eta(theta) = sum_i e_i phi_{1,2}(sigma_i . tau)
        from sphact.gegenbauer import basis
        ang = np.linspace(0, 2 * math.pi, 20001)[:-1]
        tau = np.stack([np.cos(ang), np.sin(ang)], axis=1)
        vals = np.zeros(ang.size)
        b = basis(1, 2)
        for i in range(8):
            vals += e[i] * np.asarray(b.evaluate(2, tau @ d.points[i]))
        norm_sq = float(np.mean(vals ** 2) * 2 * math.pi)
        assert noise_component_norms(noise)[2] ** 2 == pytest.approx(norm_sq, rel=1e-6)
