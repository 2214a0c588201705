"""
Tests for space descriptors and their builders.
"""

import math

import pytest
from pydantic import TypeAdapter, ValidationError

from app.domains.spaces.schemas import (
    BochnerSpace,
    LpSpace,
    MinQuantization,
    PQSpace,
    TensorSpace,
    cb_space,
    complex_line,
    convexity,
    l1_sequence_space,
    lp_over_atoms,
    max_quantization,
    p_quantization,
    pop_tensor,
    pr_tensor,
    schatten_line,
)


class TestBaseSpaces:
    """Tests for classical base-space descriptors."""

    def test_lp_dimension(self):
        """Test the dimension of ℓ_p^n."""
        assert LpSpace(n=3, p=1.0).dimension == 3

    def test_exponent_below_one_rejected(self):
        """Test that p < 1 fails validation."""
        with pytest.raises(ValidationError):
            LpSpace(n=2, p=0.5)

    def test_infinite_exponent_from_string(self):
        """Test that 'inf' parses to an infinite exponent and dumps back."""
        space = LpSpace(n=2, p="inf")
        assert math.isinf(space.p)
        assert space.model_dump(mode="json")["p"] == "inf"

    def test_extra_fields_forbidden(self):
        """Test that unknown fields are rejected."""
        with pytest.raises(ValidationError):
            LpSpace(n=2, p=1.0, colour="red")

    def test_tensor_and_bochner_dimensions(self):
        """Test product dimensions of tensor and Bochner spaces."""
        tensor = TensorSpace(left=LpSpace(n=2, p=1.0), right=LpSpace(n=3, p=2.0))
        assert tensor.dimension == 6
        bochner = BochnerSpace(weights=(1.0, 0.5), inner=LpSpace(n=3, p=2.0), p=2.0)
        assert bochner.dimension == 6

    def test_complex_line(self):
        """Test that ℂ is one-dimensional."""
        assert complex_line().dimension == 1


class TestQuantizations:
    """Tests for quantization descriptors."""

    def test_builders(self):
        """Test the Schatten-type builders."""
        base = LpSpace(n=2, p=1.0)
        assert max_quantization(base).p == 1.0
        assert p_quantization(base, 2.0).p == 2.0
        assert schatten_line(2.0).dimension == 1

    def test_lp_over_atoms_dimension(self):
        """Test that L_p over atoms multiplies the inner dimension."""
        space = lp_over_atoms([1.0, 0.5], max_quantization(LpSpace(n=3, p=1.0)), 2.0)
        assert space.dimension == 6
        assert l1_sequence_space(4).dimension == 4

    def test_tensor_dimensions(self):
        """Test pop, pr and cb space dimensions."""
        left = max_quantization(LpSpace(n=2, p=1.0))
        right = schatten_line(2.0)
        assert pop_tensor(left, right).dimension == 2
        assert pr_tensor(LpSpace(n=3, p=1.0), left).dimension == 6
        assert cb_space(left, p_quantization(LpSpace(n=3, p=2.0), 2.0)).dimension == 6

    def test_round_trip_through_json(self):
        """Test that a nested descriptor parses back from its JSON dump."""
        space = pop_tensor(lp_over_atoms([1.0, 2.0], schatten_line(math.inf)), MinQuantization(base=LpSpace(n=2)))
        adapter = TypeAdapter(PQSpace)
        assert adapter.validate_python(space.model_dump(mode="json")) == space

    def test_unknown_kind_rejected(self):
        """Test that an unknown quantization kind fails validation."""
        with pytest.raises(ValidationError):
            TypeAdapter(PQSpace).validate_python({"kind": "mystery"})


class TestConvexity:
    """Tests for the known convexity exponent."""

    def test_schatten_line(self):
        """Test that ^(q)ℂ is q-convex."""
        assert convexity(schatten_line(2.0)) == 2.0

    def test_min_quantization(self):
        """Test that the minimal quantization is ∞-convex."""
        assert math.isinf(convexity(MinQuantization(base=LpSpace(n=2))))

    def test_lp_inherits_minimum(self):
        """Test that L_p(X, F) is min(p, conv F)-convex."""
        assert convexity(lp_over_atoms([1.0], schatten_line(math.inf), 2.0)) == 2.0
        assert convexity(lp_over_atoms([1.0], schatten_line(1.0), 2.0)) == 1.0

    def test_general_space(self):
        """Test that a multi-dimensional p-quantization only reports 1."""
        assert convexity(p_quantization(LpSpace(n=2, p=1.0), 2.0)) == 1.0
