"""
Tests for the classical projective tensor engine.
"""

import math

import numpy as np
import pytest

from app.domains.engines.schemas import CertificateMethod, FunctionalWitness, NormCertificate
from app.domains.engines.services import projective
from app.domains.engines.services.projective import (
    column_decomposition,
    projective_certificate,
    recheck_decomposition,
    row_decomposition,
    svd_decomposition,
)
from app.domains.matrix.services.linalg import random_cmatrix
from app.domains.spaces.services.factors import LpFactor


@pytest.fixture
def grid():
    return random_cmatrix(3, np.random.default_rng(21))


class TestDecompositions:
    """Tests for the closed-form decompositions."""

    @pytest.mark.parametrize("build", [row_decomposition, column_decomposition, svd_decomposition])
    def test_reconstructs(self, grid, build):
        """Test that every seed decomposition reproduces the grid."""
        left, right = LpFactor(3, 2.0), LpFactor(3, math.inf)
        dec = build(grid, left, right)
        residual, cost = recheck_decomposition(dec, grid, left, right)
        assert residual < 1e-10
        assert cost == pytest.approx(dec.cost)


class TestProjectiveCertificate:
    """Tests for projective_certificate."""

    def test_zero(self):
        """Test that the zero grid is exactly zero."""
        cert = projective_certificate(np.zeros((2, 2)), LpFactor(2, 2.0), LpFactor(2, 2.0))
        assert (cert.lower, cert.upper) == (0.0, 0.0)

    def test_l1_identity(self, grid):
        """Test that ℓ1 ⊗ F sums the row norms exactly."""
        cert = projective_certificate(grid, LpFactor(3, 1.0), LpFactor(3, 2.0))
        expected = float(np.linalg.norm(grid, axis=1).sum())
        assert cert.method == CertificateMethod.L1_IDENTITY
        assert cert.lower == pytest.approx(expected, rel=1e-9)
        assert cert.upper == pytest.approx(expected, rel=1e-9)

    def test_l1_on_the_right(self, grid):
        """Test that E ⊗ ℓ1 sums the column norms exactly."""
        cert = projective_certificate(grid, LpFactor(3, math.inf), LpFactor(3, 1.0))
        expected = float(np.abs(grid).max(axis=0).sum())
        assert cert.upper == pytest.approx(expected, rel=1e-9)
        assert cert.is_tight()

    def test_hilbert_nuclear_norm(self, grid):
        """Test that ℓ2 ⊗ ℓ2 gives the nuclear norm."""
        cert = projective_certificate(grid, LpFactor(3, 2.0), LpFactor(3, 2.0))
        nuclear = float(np.linalg.svd(grid, compute_uv=False).sum())
        assert cert.method == CertificateMethod.CLOSED_FORM
        assert cert.lower == pytest.approx(nuclear, rel=1e-9)
        assert cert.upper == pytest.approx(nuclear, rel=1e-9)

    def test_search_is_ordered(self, grid):
        """Test that the searched interval is ordered and below every seed."""
        left, right = LpFactor(3, math.inf), LpFactor(3, math.inf)
        cert = projective_certificate(grid, left, right, budget=8, seed=0)
        assert cert.method == CertificateMethod.DECOMPOSITION_SEARCH
        assert 0.0 < cert.lower <= cert.upper + 1e-12
        assert cert.upper <= row_decomposition(grid, left, right).cost + 1e-12
        residual, cost = recheck_decomposition(cert.upper_witness, grid, left, right)
        assert residual < 1e-8
        assert cost == pytest.approx(cert.upper, rel=1e-9)

    def test_search_is_deterministic(self, grid):
        """Test that equal seeds give equal intervals."""
        left, right = LpFactor(3, 3.0), LpFactor(3, math.inf)
        first = projective_certificate(grid, left, right, budget=4, seed=3)
        second = projective_certificate(grid, left, right, budget=4, seed=3)
        assert (first.lower, first.upper) == (second.lower, second.upper)


class TestCrossedBounds:
    """Tests for certificates whose lower bound exceeds the upper bound."""

    def test_round_off_collapses(self):
        """Test that a crossing within round-off collapses onto the upper bound."""
        cert = NormCertificate(1.0 + 1e-12, 1.0, CertificateMethod.CLOSED_FORM)
        assert cert.lower == 1.0
        assert not cert.crossed

    def test_crossing_is_kept_and_logged(self, caplog):
        """Test that a real crossing keeps both bounds, warns and is never tight."""
        with caplog.at_level("WARNING"):
            cert = NormCertificate(2.0, 1.0, CertificateMethod.DECOMPOSITION_SEARCH)
        assert (cert.lower, cert.upper) == (2.0, 1.0)
        assert cert.crossed
        assert not cert.is_tight()
        assert cert.to_dict()["crossed"] is True
        assert "cross" in caplog.text

    def test_search_does_not_clamp(self, grid, monkeypatch):
        """Test that an oversized lower bound reaches the certificate unchanged."""

        def inflated(grid, left, right, budget=None, seed=None):
            return 1e6, FunctionalWitness(tag="inflated", value=1e6)

        monkeypatch.setattr(projective, "proj_norm_lower", inflated)
        cert = projective_certificate(grid, LpFactor(3, 3.0), LpFactor(3, math.inf), budget=4, seed=0)
        assert cert.lower == 1e6
        assert cert.crossed
