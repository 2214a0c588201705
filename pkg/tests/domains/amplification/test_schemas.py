"""
Tests for amplified elements and their JSON documents.
"""

import numpy as np
import pytest

from app.core.exceptions import DimensionError, ParseError
from app.domains.amplification.schemas import (
    AmpElem,
    BioperatorDesc,
    ElementDocument,
    OperatorDesc,
    OperatorDocument,
    decode_complex,
    encode_complex,
    parse_document,
)
from app.domains.spaces.schemas import LpSpace, max_quantization, schatten_line


@pytest.fixture
def l1_max():
    return max_quantization(LpSpace(n=2, p=1.0))


class TestAmpElem:
    """Tests for AmpElem."""

    def test_coordinates_of_elementary(self, l1_max):
        """Test that a x has coordinates x_i a."""
        a = np.array([[1.0, 2.0], [0.0, 1.0]])
        u = AmpElem.elementary(a, [2.0, -1.0], l1_max)
        coords = u.coordinates()
        assert coords.shape == (2, 2, 2)
        assert np.allclose(coords[0], 2 * a)
        assert np.allclose(coords[1], -a)

    def test_terms_embedded_to_common_level(self, l1_max):
        """Test that smaller coefficients are padded with zeros."""
        u = AmpElem(terms=(([[1.0]], [1.0, 0.0]), (np.eye(3), [0.0, 1.0])), ambient=l1_max)
        assert u.level == 3
        assert np.allclose(u.coordinates()[0], np.diag([1.0, 0.0, 0.0]))

    def test_vector_dimension_checked(self, l1_max):
        """Test that a wrong vector length raises DimensionError."""
        with pytest.raises(DimensionError):
            AmpElem.elementary(np.eye(2), [1.0, 2.0, 3.0], l1_max)

    def test_coordinate_count_checked(self, l1_max):
        """Test that from_coordinates rejects a wrong first axis."""
        with pytest.raises(DimensionError):
            AmpElem.from_coordinates(np.zeros((3, 2, 2)), l1_max)

    def test_arithmetic(self, l1_max):
        """Test addition, subtraction and scaling on coordinates."""
        u = AmpElem.elementary(np.eye(2), [1.0, 0.0], l1_max)
        v = AmpElem.elementary([[1.0]], [0.0, 1.0], l1_max)
        w = (u + v.scale(2.0)) - u
        assert np.allclose(w.coordinates(), 2 * v.coordinates(2))

    def test_zero(self, l1_max):
        """Test that the empty term list is zero at its level."""
        z = AmpElem.zero(l1_max, 3)
        assert z.is_zero()
        assert z.coordinates().shape == (2, 3, 3)

    def test_padding_coordinates(self, l1_max):
        """Test that coordinates can be read at a larger level."""
        u = AmpElem.elementary([[5.0]], [1.0, 1.0], l1_max)
        coords = u.coordinates(2)
        assert coords[0, 0, 0] == 5.0
        assert coords[0, 1, 1] == 0.0


class TestDescriptors:
    """Tests for operator and bioperator descriptors."""

    def test_operator_shape_checked(self):
        """Test that the action must be codomain by domain."""
        with pytest.raises(DimensionError):
            OperatorDesc(
                domain=max_quantization(LpSpace(n=2, p=1.0)),
                codomain=schatten_line(2.0),
                action=np.ones((2, 2)),
            )

    def test_bioperator_apply(self):
        """Test ρ(x, y)_g = Σ R[g, i, j] x_i y_j."""
        left = max_quantization(LpSpace(n=2, p=1.0))
        right = max_quantization(LpSpace(n=2, p=2.0))
        coeffs = np.zeros((1, 2, 2))
        coeffs[0] = np.eye(2)
        rho = BioperatorDesc(left=left, right=right, codomain=schatten_line(1.0), coefficients=coeffs)
        assert rho.apply(np.array([1.0, 2.0]), np.array([3.0, 4.0]))[0] == pytest.approx(11.0)

    def test_bioperator_shape_checked(self):
        """Test that the coefficient tensor shape is validated."""
        line = schatten_line(1.0)
        with pytest.raises(DimensionError):
            BioperatorDesc(left=line, right=line, codomain=line, coefficients=np.ones((1, 2, 1)))


class TestDocuments:
    """Tests for JSON documents."""

    def test_complex_pairs(self):
        """Test the [re, im] encoding of complex arrays."""
        assert encode_complex([1 + 2j]) == [[1.0, 2.0]]
        assert decode_complex([[1.0, 2.0], [0.0, -1.0]]).tolist() == [1 + 2j, -1j]

    def test_decode_rejects_scalars(self):
        """Test that bare numbers are not complex pairs."""
        with pytest.raises(ParseError):
            decode_complex([1.0, 2.0, 3.0])

    def test_element_document(self):
        """Test that a document builds the expected element."""
        payload = {
            "ambient": {"kind": "schatten", "base": {"kind": "lp", "n": 1, "p": 1.0}, "p": 2.0},
            "terms": [{"matrix": [[[3.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [4.0, 0.0]]], "vector": [[1.0, 0.0]]}],
        }
        u = parse_document(ElementDocument, payload).to_elem()
        assert u.level == 2
        assert np.allclose(u.coordinates()[0], np.diag([3.0, 4.0]))

    def test_element_document_from_elem(self, l1_max):
        """Test that from_elem keeps ambient and level."""
        u = AmpElem.elementary(np.eye(2), [1.0, 0.0], l1_max)
        doc = ElementDocument.from_elem(u)
        assert doc.ambient == l1_max
        assert doc.level == 2

    def test_unknown_kind_is_parse_error(self):
        """Test that an unknown space kind raises ParseError."""
        with pytest.raises(ParseError):
            parse_document(ElementDocument, {"ambient": {"kind": "banach"}, "terms": []})

    def test_bad_shape_is_dimension_error(self):
        """Test that a vector of the wrong length raises DimensionError."""
        payload = {
            "ambient": {"kind": "schatten", "base": {"kind": "lp", "n": 2, "p": 1.0}, "p": 1.0},
            "terms": [{"matrix": [[[1.0, 0.0]]], "vector": [[1.0, 0.0]]}],
        }
        with pytest.raises(DimensionError):
            parse_document(ElementDocument, payload).to_elem()

    def test_operator_document_requires_action(self):
        """Test that a linear document without action is rejected."""
        line = {"kind": "schatten", "base": {"kind": "lp", "n": 1, "p": 1.0}, "p": 1.0}
        doc = parse_document(OperatorDocument, {"domain": line, "codomain": line})
        with pytest.raises(ParseError):
            doc.to_operator()

    def test_operator_document_kind_pattern(self):
        """Test that only linear and bilinear kinds are accepted."""
        line = {"kind": "schatten", "base": {"kind": "lp", "n": 1, "p": 1.0}, "p": 1.0}
        with pytest.raises(ParseError):
            parse_document(OperatorDocument, {"kind": "trilinear", "domain": line, "codomain": line})
