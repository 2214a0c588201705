"""
Tests for the matrix domain.

Covers Schatten norms, the diamond product, rank-one operators and pinching.
"""

import math

import numpy as np
import pytest

from app.core.exceptions import DimensionError, InvalidParameterError
from app.domains.matrix.services.linalg import (
    basis_vector,
    diagonal_projections,
    diamond,
    direct_pinch,
    dual_exponent,
    embed,
    flip_unitary,
    lp_norm,
    matrix_unit,
    pinch_roots_of_unity,
    random_cmatrix,
    random_unitary,
    rank_one,
    schatten_norm,
    schatten_norming_dual,
    singular_triples,
)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


class TestSchattenNorm:
    """Tests for schatten_norm."""

    def test_diagonal_values(self):
        """Test Schatten norms of diag(3, 4)."""
        a = np.diag([3.0, 4.0])
        assert schatten_norm(a, 1) == pytest.approx(7.0)
        assert schatten_norm(a, 2) == pytest.approx(5.0)
        assert schatten_norm(a, math.inf) == pytest.approx(4.0)

    def test_two_norm_is_frobenius(self, rng):
        """Test that the Schatten 2-norm matches the Frobenius norm."""
        a = random_cmatrix(4, rng)
        assert schatten_norm(a, 2) == pytest.approx(np.linalg.norm(a, "fro"))

    def test_zero_matrix(self):
        """Test that the zero matrix has norm zero for every p."""
        for p in (1, 1.5, 2, math.inf):
            assert schatten_norm(np.zeros((3, 3)), p) == 0.0

    def test_rejects_small_exponent(self):
        """Test that p < 1 is rejected."""
        with pytest.raises(InvalidParameterError):
            schatten_norm(np.eye(2), 0.5)

    def test_rejects_non_square(self):
        """Test that a non-square matrix is rejected."""
        with pytest.raises(DimensionError):
            schatten_norm(np.ones((2, 3)), 2)

    def test_norming_dual_attains_norm(self, rng):
        """Test that the norming dual pairs to the norm and has unit dual norm."""
        a = random_cmatrix(3, rng)
        for p in (1.0, 1.5, 2.0, math.inf):
            b = schatten_norming_dual(a, p)
            assert np.sum(a * b).real == pytest.approx(schatten_norm(a, p))
            assert schatten_norm(b, dual_exponent(p)) == pytest.approx(1.0)


class TestExponents:
    """Tests for exponent helpers."""

    def test_dual_exponent(self):
        """Test conjugate exponents."""
        assert dual_exponent(1) == math.inf
        assert dual_exponent(math.inf) == 1.0
        assert dual_exponent(2) == pytest.approx(2.0)
        assert dual_exponent(4) == pytest.approx(4 / 3)

    def test_lp_norm(self):
        """Test lp norms of a small vector."""
        assert lp_norm([3, 4], 2) == pytest.approx(5.0)
        assert lp_norm([3, -4], 1) == pytest.approx(7.0)
        assert lp_norm([3, -4], math.inf) == pytest.approx(4.0)
        assert lp_norm([], 2) == 0.0


class TestDiamond:
    """Tests for the diamond product."""

    def test_level_multiplies(self, rng):
        """Test that a diamond of levels 2 and 3 has level 6."""
        assert diamond(random_cmatrix(2, rng), random_cmatrix(3, rng)).shape == (6, 6)

    @pytest.mark.parametrize("p", [1.0, 1.5, 2.0, 4.0, math.inf])
    def test_schatten_multiplicative(self, rng, p):
        """Test ||a ⋄ b||_p = ||a||_p ||b||_p."""
        a, b = random_cmatrix(3, rng), random_cmatrix(3, rng)
        expected = schatten_norm(a, p) * schatten_norm(b, p)
        assert schatten_norm(diamond(a, b), p) == pytest.approx(expected, rel=1e-9)

    def test_mixed_product(self, rng):
        """Test (a ⋄ b)(c ⋄ d) = (ac) ⋄ (bd)."""
        a, b, c, d = (random_cmatrix(2, rng) for _ in range(4))
        np.testing.assert_allclose(diamond(a, b) @ diamond(c, d), diamond(a @ c, b @ d), atol=1e-12)

    def test_flip_unitary(self, rng):
        """Test that the flip exchanges the diamond factors."""
        a, b = random_cmatrix(2, rng), random_cmatrix(3, rng)
        delta = flip_unitary(2, 3)
        np.testing.assert_allclose(delta @ diamond(a, b) @ delta.conj().T, diamond(b, a), atol=1e-12)


class TestRankOne:
    """Tests for rank-one operators and matrix units."""

    def test_rank_one_action(self):
        """Test that ξη* maps η to ||η||² ξ."""
        xi, eta = np.array([1.0, 2.0]), np.array([0.0, 1j])
        np.testing.assert_allclose(rank_one(xi, eta) @ eta, xi)

    def test_length_mismatch(self):
        """Test that vectors of different length are rejected."""
        with pytest.raises(DimensionError):
            rank_one(np.ones(2), np.ones(3))

    def test_matrix_unit(self):
        """Test the matrix unit E_01."""
        e = matrix_unit(2, 0, 1)
        np.testing.assert_array_equal(e, np.array([[0, 1], [0, 0]]))
        np.testing.assert_array_equal(basis_vector(3, 2), np.array([0, 0, 1]))


class TestSingularForm:
    """Tests for singular_triples."""

    def test_reconstruct_and_rank(self, rng):
        """Test that the singular form rebuilds the matrix and reports its rank."""
        x, y = rng.standard_normal(4), rng.standard_normal(4)
        a = np.outer(x, y) + 0j
        form = singular_triples(a)
        np.testing.assert_allclose(form.reconstruct(), a, atol=1e-12)
        assert form.rank() == 1


class TestEmbed:
    """Tests for level embeddings."""

    def test_top_left_block(self):
        """Test that embedding pads with zeros."""
        out = embed(np.eye(2), 3)
        assert out.shape == (3, 3)
        assert out[2, 2] == 0

    def test_rejects_smaller_target(self):
        """Test that embedding into a smaller level fails."""
        with pytest.raises(DimensionError):
            embed(np.eye(3), 2)


class TestPinching:
    """Tests for roots-of-unity pinching."""

    @pytest.mark.parametrize("count", [2, 3, 4])
    def test_matches_direct_pinch(self, rng, count):
        """Test that the roots-of-unity average equals Σ P_k a P_k."""
        projections = diagonal_projections(4, count)
        for _ in range(10):
            a = random_cmatrix(4, rng)
            np.testing.assert_allclose(
                pinch_roots_of_unity(a, projections, count), direct_pinch(a, projections), atol=1e-10
            )

    def test_rotated_projections(self, rng):
        """Test pinching with projections from a random orthonormal basis."""
        u = random_unitary(3, rng)
        projections = [rank_one(u[:, k], u[:, k]) for k in range(3)]
        a = random_cmatrix(3, rng)
        np.testing.assert_allclose(
            pinch_roots_of_unity(a, projections, 3), direct_pinch(a, projections), atol=1e-10
        )

    def test_count_mismatch(self):
        """Test that n must match the number of projections."""
        with pytest.raises(InvalidParameterError):
            pinch_roots_of_unity(np.eye(2), diagonal_projections(2), 3)

    def test_non_orthogonal(self):
        """Test that overlapping projections are rejected."""
        p = rank_one(np.array([1.0, 0.0]), np.array([1.0, 0.0]))
        q = rank_one(np.array([1.0, 1.0]) / np.sqrt(2), np.array([1.0, 1.0]) / np.sqrt(2))
        with pytest.raises(InvalidParameterError):
            pinch_roots_of_unity(np.eye(2), [p, q], 2)
