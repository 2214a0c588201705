"""Amplified elements, operator descriptors and their JSON documents.

An element of the amplification K E is a list of terms ``(coefficient,
vector)``. Its coordinate form is the array ``T`` of shape ``(n, d, d)`` with
``u = Σ_i T[i] e_i``; every norm computation works on coordinates.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Any

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, Field, ValidationError

from app.core.exceptions import DimensionError, ParseError
from app.domains.matrix.schemas import CMatrix, CVector, as_cmatrix, as_cvector
from app.domains.matrix.services.linalg import embed
from app.domains.spaces.schemas import PQSpace

Coordinates = npt.NDArray[np.complex128]
ComplexPair = tuple[float, float]


# ============ Amplified Elements ============


@dataclass(frozen=True, eq=False)
class AmpElem:
    """Element ``Σ_k c_k x_k`` of K E with its ambient PQ-space.

    Coefficients are embedded into the common level on construction; the
    zero element is the empty term list.
    """

    terms: tuple[tuple[CMatrix, CVector], ...]
    ambient: PQSpace
    level: int = 1

    def __post_init__(self) -> None:
        dim = self.ambient.dimension
        coeffs = [as_cmatrix(c) for c, _ in self.terms]
        vecs = [as_cvector(x) for _, x in self.terms]
        for x in vecs:
            if x.size != dim:
                raise DimensionError(
                    "Term vector does not match the ambient dimension",
                    details={"expected": dim, "got": int(x.size)},
                )
        top = max([self.level] + [c.shape[0] for c in coeffs])
        aligned = tuple((embed(c, top), x) for c, x in zip(coeffs, vecs, strict=True))
        object.__setattr__(self, "terms", aligned)
        object.__setattr__(self, "level", top)

    # ---- constructors ----

    @classmethod
    def zero(cls, ambient: PQSpace, level: int = 1) -> "AmpElem":
        return cls(terms=(), ambient=ambient, level=level)

    @classmethod
    def elementary(cls, a: CMatrix, x: CVector, ambient: PQSpace) -> "AmpElem":
        """The elementary tensor ``a x``."""
        return cls(terms=((as_cmatrix(a), as_cvector(x)),), ambient=ambient)

    @classmethod
    def from_coordinates(cls, coords: Coordinates, ambient: PQSpace) -> "AmpElem":
        """Element ``Σ_i coords[i] e_i``, skipping zero coordinates."""
        coords = np.asarray(coords, dtype=np.complex128)
        n, d, _ = coords.shape
        if n != ambient.dimension:
            raise DimensionError(
                "Coordinate count does not match the ambient dimension",
                details={"expected": ambient.dimension, "got": n},
            )
        eye = np.eye(n, dtype=np.complex128)
        terms = tuple((coords[i], eye[i]) for i in range(n) if np.any(coords[i]))
        return cls(terms=terms, ambient=ambient, level=d)

    # ---- views ----

    @property
    def dimension(self) -> int:
        return self.ambient.dimension

    def coordinates(self, level: int | None = None) -> Coordinates:
        """Coordinate array of shape ``(n, d, d)``, optionally padded to ``level``."""
        d = self.level if level is None else level
        out = np.zeros((self.dimension, d, d), dtype=np.complex128)
        for c, x in self.terms:
            out += x[:, None, None] * embed(c, d)[None, :, :]
        return out

    def is_zero(self, tol: float = 0.0) -> bool:
        return bool(np.all(np.abs(self.coordinates()) <= tol))

    # ---- arithmetic ----

    def __add__(self, other: "AmpElem") -> "AmpElem":
        return AmpElem(
            terms=self.terms + other.terms,
            ambient=self.ambient,
            level=max(self.level, other.level),
        )

    def __sub__(self, other: "AmpElem") -> "AmpElem":
        return self + other.scale(-1.0)

    def scale(self, factor: complex) -> "AmpElem":
        return AmpElem(
            terms=tuple((factor * c, x) for c, x in self.terms),
            ambient=self.ambient,
            level=self.level,
        )

    def with_ambient(self, ambient: PQSpace) -> "AmpElem":
        return AmpElem(terms=self.terms, ambient=ambient, level=self.level)

    def to_dict(self) -> dict[str, Any]:
        return ElementDocument.from_elem(self).model_dump(mode="json")


# ============ Operators ============


class OperatorKind(str, Enum):
    """How an operator descriptor was built."""

    LINEAR = "linear"
    FUNCTIONAL = "functional"
    IDENTITY = "identity"
    SCALAR = "scalar"
    CURRIED = "curried"
    LINEARIZED = "linearized"


class BioperatorKind(str, Enum):
    """How a bioperator descriptor was built."""

    BILINEAR = "bilinear"
    CANONICAL = "canonical"
    PRODUCT_FUNCTIONAL = "product_functional"
    POINTWISE = "pointwise"
    PAIRING = "pairing"
    UNCURRIED = "uncurried"


@dataclass(frozen=True, eq=False)
class OperatorDesc:
    """Linear map between PQ-spaces given by its matrix on the bases."""

    domain: PQSpace
    codomain: PQSpace
    action: npt.NDArray[np.complex128]
    kind: OperatorKind = OperatorKind.LINEAR

    def __post_init__(self) -> None:
        action = np.asarray(self.action, dtype=np.complex128)
        expected = (self.codomain.dimension, self.domain.dimension)
        if action.shape != expected:
            raise DimensionError(
                "Operator matrix does not match the base dimensions",
                details={"expected": list(expected), "got": list(action.shape)},
            )
        object.__setattr__(self, "action", action)

    def apply(self, x: CVector) -> CVector:
        return self.action @ x


@dataclass(frozen=True, eq=False)
class BioperatorDesc:
    """Bilinear map ``ρ(x, y)_g = Σ_ij R[g, i, j] x_i y_j``."""

    left: PQSpace
    right: PQSpace
    codomain: PQSpace
    coefficients: npt.NDArray[np.complex128]
    kind: BioperatorKind = BioperatorKind.BILINEAR

    def __post_init__(self) -> None:
        coeffs = np.asarray(self.coefficients, dtype=np.complex128)
        expected = (
            self.codomain.dimension,
            self.left.dimension,
            self.right.dimension,
        )
        if coeffs.shape != expected:
            raise DimensionError(
                "Bioperator tensor does not match the base dimensions",
                details={"expected": list(expected), "got": list(coeffs.shape)},
            )
        object.__setattr__(self, "coefficients", coeffs)

    def apply(self, x: CVector, y: CVector) -> CVector:
        return np.einsum("gij,i,j->g", self.coefficients, x, y)


# ============ JSON Documents ============


def encode_complex(values: npt.ArrayLike) -> Any:
    """Nested lists with every complex number as ``[re, im]``."""
    arr = np.asarray(values, dtype=np.complex128)
    return np.stack([arr.real, arr.imag], axis=-1).tolist()


def decode_complex(pairs: Any) -> npt.NDArray[np.complex128]:
    arr = np.asarray(pairs, dtype=np.float64)
    if arr.ndim == 0 or arr.shape[-1] != 2:
        raise ParseError("Complex numbers must be [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


class TermDocument(BaseModel):
    """One ``(matrix, vector)`` term."""

    matrix: list[list[ComplexPair]] = Field(description="Square coefficient matrix")
    vector: list[ComplexPair] = Field(description="Base vector")


class ElementDocument(BaseModel):
    """JSON form of an amplified element."""

    ambient: PQSpace
    terms: list[TermDocument] = Field(default_factory=list)
    level: int = Field(default=1, ge=1)

    def to_elem(self) -> AmpElem:
        return AmpElem(
            terms=tuple(
                (decode_complex(t.matrix), decode_complex(t.vector)) for t in self.terms
            ),
            ambient=self.ambient,
            level=self.level,
        )

    @classmethod
    def from_elem(cls, u: AmpElem) -> "ElementDocument":
        return cls(
            ambient=u.ambient,
            terms=[
                TermDocument(matrix=encode_complex(c), vector=encode_complex(x))
                for c, x in u.terms
            ],
            level=u.level,
        )


class OperatorDocument(BaseModel):
    """JSON form of a linear operator or a bioperator.

    Linear operators carry ``action`` (codomain x domain); bioperators carry
    ``coefficients`` (codomain x left x right) and a ``right`` space.
    """

    kind: str = Field(default="linear", pattern="^(linear|bilinear)$")
    domain: PQSpace
    right: PQSpace | None = None
    codomain: PQSpace
    action: list[list[ComplexPair]] | None = None
    coefficients: list[list[list[ComplexPair]]] | None = None

    def to_operator(self) -> OperatorDesc:
        if self.action is None:
            raise ParseError("Linear operator document needs 'action'")
        return OperatorDesc(
            domain=self.domain,
            codomain=self.codomain,
            action=decode_complex(self.action),
        )

    def to_bioperator(self) -> BioperatorDesc:
        if self.coefficients is None or self.right is None:
            raise ParseError("Bioperator document needs 'right' and 'coefficients'")
        return BioperatorDesc(
            left=self.domain,
            right=self.right,
            codomain=self.codomain,
            coefficients=decode_complex(self.coefficients),
        )


def parse_document(model: type[BaseModel], payload: Any) -> Any:
    """Validate a decoded JSON payload, mapping schema errors to ParseError."""
    try:
        return model.model_validate(payload)
    except ValidationError as exc:
        raise ParseError(
            "Input does not match the document schema",
            details={"errors": exc.errors(include_url=False, include_context=False)},
        ) from exc


__all__ = [
    "AmpElem",
    "BioperatorDesc",
    "BioperatorKind",
    "ElementDocument",
    "OperatorDesc",
    "OperatorDocument",
    "OperatorKind",
    "TermDocument",
    "decode_complex",
    "encode_complex",
    "parse_document",
]
