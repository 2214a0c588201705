"""
Tests for currying, linearization and bioperator builders.
"""

import numpy as np
import pytest

from app.core.exceptions import DimensionError, DomainMismatchError
from app.domains.amplification.schemas import AmpElem, BioperatorDesc, OperatorKind
from app.domains.amplification.services.actions import amp_diamond, amplify_bioperator, amplify_operator
from app.domains.engines.services.currying import (
    canonical_bioperator,
    curry,
    identity_operator,
    inner_product_pairing,
    linearize,
    lp_tensor_bioperator,
    pointwise_bioperator,
    schatten_tensor_bioperator,
    uncurry,
)
from app.domains.matrix.services.linalg import random_cmatrix
from app.domains.spaces.schemas import (
    CBSpaceQuantization,
    LpSpace,
    PopTensorQuantization,
    max_quantization,
    schatten_line,
)


@pytest.fixture
def rng():
    return np.random.default_rng(3)


@pytest.fixture
def rho(rng):
    left = max_quantization(LpSpace(n=2, p=1.0))
    right = max_quantization(LpSpace(n=3, p=2.0))
    coeffs = rng.standard_normal((1, 2, 3)) + 1j * rng.standard_normal((1, 2, 3))
    return BioperatorDesc(left=left, right=right, codomain=schatten_line(1.0), coefficients=coeffs)


class TestCurrying:
    """Tests for curry and uncurry."""

    def test_round_trip(self, rho):
        """Test that uncurry inverts curry."""
        op = curry(rho)
        assert op.kind == OperatorKind.CURRIED
        assert isinstance(op.codomain, CBSpaceQuantization)
        back = uncurry(op)
        assert np.array_equal(back.coefficients, rho.coefficients)
        assert (back.left, back.right, back.codomain) == (rho.left, rho.right, rho.codomain)

    def test_curried_action(self, rho, rng):
        """Test that ρ^F(y) applied to x gives ρ(x, y)."""
        x, y = rng.standard_normal(2), rng.standard_normal(3)
        matrix = curry(rho).apply(y).reshape(rho.codomain.dimension, rho.left.dimension)
        assert np.allclose(matrix @ x, rho.apply(x, y))

    def test_uncurry_needs_cb_codomain(self):
        """Test that plain operators cannot be uncurried."""
        with pytest.raises(DomainMismatchError):
            uncurry(identity_operator(schatten_line(1.0)))


class TestLinearize:
    """Tests for linearize."""

    def test_diamond_compatibility(self, rho, rng):
        """Test that R(u ⋄ v) = ρ_∞(u, v)."""
        u = AmpElem.elementary(random_cmatrix(2, rng), rng.standard_normal(2), rho.left)
        v = AmpElem.elementary(random_cmatrix(2, rng), rng.standard_normal(3), rho.right)
        op = linearize(rho)
        assert isinstance(op.domain, PopTensorQuantization)
        via_tensor = amplify_operator(op, amp_diamond(u, v, op.domain))
        direct = amplify_bioperator(rho, u, v)
        assert np.allclose(via_tensor.coordinates(), direct.coordinates())


class TestBuilders:
    """Tests for the standard bioperators."""

    def test_canonical(self):
        """Test that ϑ(e_i, f_j) is the basis tensor at i * nF + j."""
        theta = canonical_bioperator(schatten_line(1.0), max_quantization(LpSpace(n=2, p=1.0)))
        out = theta.apply(np.array([1.0]), np.array([0.0, 1.0]))
        assert out.tolist() == [0.0, 1.0]

    def test_schatten_tensor_codomain(self):
        """Test that the codomain exponent is the larger one."""
        rho = schatten_tensor_bioperator(LpSpace(n=2, p=1.0), LpSpace(n=2, p=2.0), 1.5, 4.0)
        assert rho.codomain.p == 4.0
        assert rho.codomain.dimension == 4

    def test_pointwise(self):
        """Test that (λ, y) -> λ(t) y per atom."""
        rho = pointwise_bioperator([1.0, 2.0], 2.0, max_quantization(LpSpace(n=2, p=1.0)))
        out = rho.apply(np.array([2.0, -1.0]), np.array([1.0, 3.0]))
        assert out.tolist() == [2.0, 6.0, -1.0, -3.0]

    def test_inner_product_pairing(self):
        """Test the bilinear pairing Σ x_i y_i."""
        rho = inner_product_pairing(max_quantization(LpSpace(n=3, p=2.0)))
        assert rho.apply(np.array([1.0, 2.0, 3.0]), np.array([1j, 0.0, 1.0]))[0] == pytest.approx(3.0 + 1j)

    def test_lp_tensor_shapes(self):
        """Test the product-atom layout of the Bochner tensor bioperator."""
        left = max_quantization(LpSpace(n=2, p=1.0))
        right = schatten_line(1.0)
        rho = lp_tensor_bioperator([1.0, 0.5], left, [2.0], right, 1.0)
        assert rho.coefficients.shape == (4, 4, 1)
        assert rho.codomain.measure.atom_weights == (2.0, 1.0)
        out = rho.apply(np.array([0.0, 0.0, 1.0, 0.0]), np.array([1.0]))
        assert out.tolist() == [0.0, 0.0, 1.0, 0.0]

    def test_identity_dimension(self):
        """Test that the identity needs equal dimensions."""
        with pytest.raises(DimensionError):
            identity_operator(schatten_line(1.0), max_quantization(LpSpace(n=2, p=1.0)))
