"""Space descriptors: base normed spaces, measures and quantizations.

Descriptors are frozen pydantic models discriminated by ``kind``. Exponents
accept numbers or the string ``"inf"`` and serialize infinity as ``"inf"``.
"""

import math
from typing import Annotated, Any, Literal, Union

from pydantic import (
    BaseModel,
    BeforeValidator,
    ConfigDict,
    Field,
    PlainSerializer,
    PositiveFloat,
)

# ============ Exponents ============


def _parse_exponent(value: Any) -> Any:
    if isinstance(value, str) and value.strip().lower() in {"inf", "infinity", "∞"}:
        return math.inf
    return value


def _dump_exponent(value: float) -> float | str:
    return "inf" if math.isinf(value) else value


Exponent = Annotated[
    float,
    BeforeValidator(_parse_exponent),
    Field(ge=1),
    PlainSerializer(_dump_exponent),
]


class _Descriptor(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


# ============ Measure Spaces ============


class MeasureSpace(_Descriptor):
    """Finite atomic measure given by its atom weights."""

    atom_weights: tuple[PositiveFloat, ...] = Field(
        min_length=1,
        description="Positive weight of every atom",
    )

    @property
    def size(self) -> int:
        return len(self.atom_weights)


# ============ Base Spaces ============


class LpSpace(_Descriptor):
    """ℓ_p^n."""

    kind: Literal["lp"] = "lp"
    n: int = Field(ge=1, description="Dimension")
    p: Exponent = Field(default=2.0, description="Exponent in [1, inf]")

    @property
    def dimension(self) -> int:
        return self.n


class WeightedL1Space(_Descriptor):
    """ℓ_1 over a finite measure: ``Σ w_t |x_t|``."""

    kind: Literal["weighted_l1"] = "weighted_l1"
    weights: tuple[PositiveFloat, ...] = Field(
        min_length=1,
        description="Atom weights",
    )

    @property
    def dimension(self) -> int:
        return len(self.weights)


class TensorSpace(_Descriptor):
    """Algebraic tensor product of two bases with the projective norm.

    Coordinates pair as ``(i, j) -> i * right.dimension + j``.
    """

    kind: Literal["tensor"] = "tensor"
    left: "BaseSpace"
    right: "BaseSpace"

    @property
    def dimension(self) -> int:
        return self.left.dimension * self.right.dimension


class DualSpace(_Descriptor):
    """Dual of a base space under the bilinear pairing ``Σ f_i x_i``."""

    kind: Literal["dual"] = "dual"
    space: "BaseSpace"

    @property
    def dimension(self) -> int:
        return self.space.dimension


class BochnerSpace(_Descriptor):
    """L_p(X, E) over finite atoms: ``(Σ w_t ||x_t||^p)^(1/p)``.

    Coordinates are atom-major: ``(t, j) -> t * inner.dimension + j``.
    """

    kind: Literal["bochner"] = "bochner"
    weights: tuple[PositiveFloat, ...] = Field(min_length=1)
    inner: "BaseSpace"
    p: Exponent = 1.0

    @property
    def dimension(self) -> int:
        return len(self.weights) * self.inner.dimension


BaseSpace = Annotated[
    Union[LpSpace, WeightedL1Space, TensorSpace, DualSpace, BochnerSpace],
    Field(discriminator="kind"),
]


# ============ Quantizations ============


class SchattenQuantization(_Descriptor):
    """^(p)E: amplification normed as K_p ⊗_pr E; p = 1 is the maximal one."""

    kind: Literal["schatten"] = "schatten"
    base: BaseSpace
    p: Exponent = 1.0

    @property
    def dimension(self) -> int:
        return self.base.dimension


class MinQuantization(_Descriptor):
    """E_min: sup over unit functionals f of ``||f_∞(u)||_∞``."""

    kind: Literal["min"] = "min"
    base: BaseSpace

    @property
    def dimension(self) -> int:
        return self.base.dimension


class LpQuantization(_Descriptor):
    """L_p(X, F) normed through the per-atom regrouping of coefficients."""

    kind: Literal["lp"] = "lp"
    measure: MeasureSpace
    inner: "PQSpace"
    p: Exponent = 1.0

    @property
    def base(self) -> BochnerSpace:
        return BochnerSpace(
            weights=self.measure.atom_weights, inner=self.inner.base, p=self.p
        )

    @property
    def dimension(self) -> int:
        return self.measure.size * self.inner.dimension


class PrTensorQuantization(_Descriptor):
    """E ⊗_pr F: amplification normed as E ⊗_pr (K F)."""

    kind: Literal["pr_tensor"] = "pr_tensor"
    left: BaseSpace
    right: "PQSpace"

    @property
    def base(self) -> TensorSpace:
        return TensorSpace(left=self.left, right=self.right.base)

    @property
    def dimension(self) -> int:
        return self.left.dimension * self.right.dimension


class PopTensorQuantization(_Descriptor):
    """E ⊗_pop F: infimum over diamond representations."""

    kind: Literal["pop_tensor"] = "pop_tensor"
    left: "PQSpace"
    right: "PQSpace"

    @property
    def base(self) -> TensorSpace:
        return TensorSpace(left=self.left.base, right=self.right.base)

    @property
    def dimension(self) -> int:
        return self.left.dimension * self.right.dimension


class CBSpaceQuantization(_Descriptor):
    """CB(E, G) quantized through the amplified evaluation bioperator.

    An operator is stored row-major: coordinate ``g * domain.dimension + i``
    holds the matrix entry mapping ``e_i`` to ``e_g``.
    """

    kind: Literal["cb_space"] = "cb_space"
    domain: "PQSpace"
    codomain: "PQSpace"

    @property
    def base(self) -> TensorSpace:
        return TensorSpace(left=self.codomain.base, right=DualSpace(space=self.domain.base))

    @property
    def dimension(self) -> int:
        return self.codomain.dimension * self.domain.dimension


PQSpace = Annotated[
    Union[
        SchattenQuantization,
        MinQuantization,
        LpQuantization,
        PrTensorQuantization,
        PopTensorQuantization,
        CBSpaceQuantization,
    ],
    Field(discriminator="kind"),
]

for _model in (
    TensorSpace,
    DualSpace,
    BochnerSpace,
    SchattenQuantization,
    LpQuantization,
    PrTensorQuantization,
    PopTensorQuantization,
    CBSpaceQuantization,
):
    _model.model_rebuild()


# ============ Builders ============


def complex_line() -> LpSpace:
    """ℂ with its modulus."""
    return LpSpace(n=1, p=1.0)


def p_quantization(base: BaseSpace, p: float) -> SchattenQuantization:
    """^(p)E."""
    return SchattenQuantization(base=base, p=p)


def max_quantization(base: BaseSpace) -> SchattenQuantization:
    """E_max, represented as ^(1)E."""
    return SchattenQuantization(base=base, p=1.0)


def schatten_line(p: float) -> SchattenQuantization:
    """^(p)ℂ, whose amplification is K_p."""
    return SchattenQuantization(base=complex_line(), p=p)


def lp_over_atoms(
    weights: tuple[float, ...] | list[float], inner: PQSpace, p: float = 1.0
) -> LpQuantization:
    """L_p(X, F) over atoms with the given weights."""
    return LpQuantization(
        measure=MeasureSpace(atom_weights=tuple(weights)), inner=inner, p=p
    )


def l1_sequence_space(n: int) -> LpQuantization:
    """ℓ_1^n realised as L_1 over n unit atoms with values in ^(∞)ℂ."""
    return lp_over_atoms([1.0] * n, schatten_line(math.inf), 1.0)


def pop_tensor(left: PQSpace, right: PQSpace) -> PopTensorQuantization:
    return PopTensorQuantization(left=left, right=right)


def pr_tensor(left: BaseSpace, right: PQSpace) -> PrTensorQuantization:
    return PrTensorQuantization(left=left, right=right)


def cb_space(domain: PQSpace, codomain: PQSpace) -> CBSpaceQuantization:
    return CBSpaceQuantization(domain=domain, codomain=codomain)


def convexity(space: PQSpace) -> float:
    """Largest p for which ``space`` is known to be p-convex.

    Every space is 1-convex; ^(q)ℂ is an L^q space; E_min is a Q-space;
    L_p(X, F) inherits min(p, conv F).
    """
    if isinstance(space, SchattenQuantization) and space.base.dimension == 1:
        return space.p
    if isinstance(space, MinQuantization):
        return math.inf
    if isinstance(space, LpQuantization):
        return min(space.p, convexity(space.inner))
    return 1.0
