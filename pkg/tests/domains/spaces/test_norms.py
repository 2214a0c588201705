"""
Tests for norm evaluation in quantizations.
"""

import math

import numpy as np
import pytest

from app.domains.amplification.schemas import AmpElem
from app.domains.engines.schemas import CertificateMethod
from app.domains.matrix.services.linalg import random_cmatrix, schatten_norm
from app.domains.spaces.schemas import (
    LpSpace,
    MinQuantization,
    l1_sequence_space,
    lp_over_atoms,
    max_quantization,
    p_quantization,
    pr_tensor,
    schatten_line,
)
from app.domains.spaces.services.norms import base_norm, nested_budget, pq_norm


@pytest.fixture
def rng():
    return np.random.default_rng(11)


class TestSchattenLine:
    """Tests for ^(p)ℂ."""

    def test_diag_three_four(self):
        """Test that diag(3, 4) in ^(2)ℂ has norm 5."""
        u = AmpElem.elementary(np.diag([3.0, 4.0]), [1.0], schatten_line(2.0))
        cert = pq_norm(u)
        assert cert.lower == pytest.approx(5.0, abs=1e-9)
        assert cert.upper == pytest.approx(5.0, abs=1e-9)

    @pytest.mark.parametrize("p", [1.0, 1.5, 4.0, math.inf])
    def test_recovers_schatten_norm(self, rng, p):
        """Test that every exponent gives the Schatten norm exactly."""
        a = random_cmatrix(3, rng)
        cert = pq_norm(AmpElem.elementary(a, [1.0], schatten_line(p)))
        assert cert.is_tight()
        assert cert.upper == pytest.approx(schatten_norm(a, p), rel=1e-9)

    def test_zero_element(self):
        """Test that the zero element has an exact zero certificate."""
        cert = pq_norm(AmpElem.zero(schatten_line(2.0), 3))
        assert (cert.lower, cert.upper) == (0.0, 0.0)
        assert cert.method == CertificateMethod.CLOSED_FORM


class TestSchattenQuantization:
    """Tests for ^(p)E over classical bases."""

    def test_l1_identity(self, rng):
        """Test that ^(p)ℓ1 sums the Schatten norms of the coordinates."""
        coords = np.stack([random_cmatrix(2, rng) for _ in range(3)])
        u = AmpElem.from_coordinates(coords, p_quantization(LpSpace(n=3, p=1.0), 2.0))
        cert = pq_norm(u)
        expected = sum(schatten_norm(c, 2.0) for c in coords)
        assert cert.method == CertificateMethod.L1_IDENTITY
        assert cert.lower == pytest.approx(expected, rel=1e-9)
        assert cert.upper == pytest.approx(expected, rel=1e-9)

    def test_elementary_cross_norm(self, rng):
        """Test ||a x|| = ||a||_2 ||x||_2 in ^(2)ℓ2."""
        a = random_cmatrix(2, rng)
        x = np.array([3.0, 4.0])
        cert = pq_norm(AmpElem.elementary(a, x, p_quantization(LpSpace(n=2, p=2.0), 2.0)))
        assert cert.upper == pytest.approx(5.0 * schatten_norm(a, 2.0), rel=1e-9)

    def test_rank_one_projection_recovers_base(self):
        """Test that P x has the norm of x for a rank-one projection P."""
        p = np.array([[1.0, 0.0], [0.0, 0.0]])
        x = np.array([1.0, -2.0, 2.0])
        u = AmpElem.elementary(p, x, max_quantization(LpSpace(n=3, p=1.0)))
        assert pq_norm(u).upper == pytest.approx(base_norm(x, LpSpace(n=3, p=1.0)))

    def test_max_l1_additivity(self):
        """Test that orthogonally supported pieces add in ^(1)ℓ1."""
        space = max_quantization(LpSpace(n=2, p=1.0))
        u = AmpElem.elementary(np.diag([1.0, 0.0]), [1.0, 2.0], space)
        v = AmpElem.elementary(np.diag([0.0, 3.0]), [0.5, -1.0], space)
        total = pq_norm(u + v).upper
        assert total == pytest.approx(pq_norm(u).upper + pq_norm(v).upper, rel=1e-9)


class TestMinQuantization:
    """Tests for the minimal quantization."""

    def test_below_max(self, rng):
        """Test that the min lower bound never exceeds the max upper bound."""
        base = LpSpace(n=2, p=1.0)
        coords = np.stack([random_cmatrix(2, rng) for _ in range(2)])
        u = AmpElem.from_coordinates(coords, MinQuantization(base=base))
        smallest = pq_norm(u)
        largest = pq_norm(u.with_ambient(max_quantization(base)))
        assert smallest.lower <= largest.upper + 1e-12
        assert smallest.lower <= smallest.upper + 1e-12

    def test_level_one_is_base_norm(self):
        """Test that a level-one element of E_min has the base norm."""
        u = AmpElem.elementary([[1.0]], [3.0, 4.0], MinQuantization(base=LpSpace(n=2, p=2.0)))
        cert = pq_norm(u)
        assert cert.lower == pytest.approx(5.0, rel=1e-9)


class TestLpQuantization:
    """Tests for L_p over atoms."""

    def test_l1_sequence_space(self, rng):
        """Test that ℓ1 over ^(∞)ℂ sums operator norms."""
        coords = np.stack([random_cmatrix(2, rng) for _ in range(3)])
        cert = pq_norm(AmpElem.from_coordinates(coords, l1_sequence_space(3)))
        assert cert.upper == pytest.approx(sum(schatten_norm(c, math.inf) for c in coords), rel=1e-9)

    def test_weighted_l2(self):
        """Test the weighted ℓ2 aggregate of inner Schatten norms."""
        space = lp_over_atoms([1.0, 0.25], schatten_line(2.0), 2.0)
        coords = np.stack([np.diag([3.0, 4.0]), np.diag([0.0, 4.0])]).astype(complex)
        cert = pq_norm(AmpElem.from_coordinates(coords, space))
        assert cert.upper == pytest.approx(math.sqrt(25.0 + 0.25 * 16.0), rel=1e-9)


class TestPrTensor:
    """Tests for the projective tensor E ⊗_pr F."""

    def test_l1_left_rows(self, rng):
        """Test that ℓ1 ⊗_pr ^(2)ℂ sums the row norms."""
        coords = np.stack([random_cmatrix(2, rng) for _ in range(2)])
        u = AmpElem.from_coordinates(coords, pr_tensor(LpSpace(n=2, p=1.0), schatten_line(2.0)))
        cert = pq_norm(u)
        assert cert.upper == pytest.approx(sum(schatten_norm(c, 2.0) for c in coords), rel=1e-9)
        assert cert.is_tight()


class TestBudgets:
    """Tests for budget helpers."""

    def test_nested_budget(self):
        """Test that nested evaluations get an eighth of the budget, at least one."""
        assert nested_budget(64) == 8
        assert nested_budget(3) == 1
