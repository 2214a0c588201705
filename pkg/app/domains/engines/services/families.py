"""Witness elements separating the diamond-projective norm from the op-norm.

``V_n = Σ_k P_k (e_k ⊗ e_k)`` in ``ℓ_1^n ⊗_pop ℓ_1^n`` with pairwise orthogonal
rank-one projections P_k has pop-norm n and op-norm n².
"""

import logging
from dataclasses import dataclass

import numpy as np

from app.core.exceptions import DimensionError, InvalidParameterError
from app.domains.amplification.schemas import AmpElem
from app.domains.engines.schemas import PopRepresentation, PopTerm
from app.domains.matrix.services.linalg import basis_vector, matrix_unit
from app.domains.spaces.schemas import (
    PopTensorQuantization,
    PQSpace,
    l1_sequence_space,
    lp_over_atoms,
    pop_tensor,
    schatten_line,
)
from app.domains.spaces.services.norms import pq_norm

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FamilyReference:
    """Known norm values of a witness element."""

    pop: float
    op: float | None = None

    def to_dict(self) -> dict[str, float | None]:
        return {"pop": self.pop, "op": self.op}


def _check_order(n: int) -> None:
    if n < 1:
        raise InvalidParameterError("n must be at least 1", details={"n": n})


def _factor_space(n: int, space: PQSpace | None) -> PQSpace:
    if space is None:
        return l1_sequence_space(n)
    if space.dimension < n:
        raise DimensionError(
            "Factor space is too small for the family",
            details={"n": n, "dimension": space.dimension},
        )
    return space


def vn_family(n: int, space: PQSpace | None = None) -> AmpElem:
    """``V_n`` at level n, over ``space ⊗_pop space`` (ℓ_1^n by default)."""
    _check_order(n)
    factor = _factor_space(n, space)
    ambient = pop_tensor(factor, factor)
    dim = factor.dimension
    terms = tuple(
        (matrix_unit(n, k, k), basis_vector(dim * dim, k * dim + k)) for k in range(n)
    )
    return AmpElem(terms=terms, ambient=ambient, level=n)


def vn_reference(n: int) -> FamilyReference:
    _check_order(n)
    return FamilyReference(pop=float(n), op=float(n * n))


def vn_split(n: int, m: int, space: PQSpace | None = None) -> tuple[AmpElem, AmpElem, AmpElem]:
    """``(V_m, V_n - V_m, V_n)`` in the ambient of ``V_n``.

    Raises:
        InvalidParameterError: Unless ``1 <= m < n``.
    """
    _check_order(n)
    if not 1 <= m < n:
        raise InvalidParameterError("Split needs 1 <= m < n", details={"n": n, "m": m})
    whole = vn_family(n, space)
    head = AmpElem(terms=whole.terms[:m], ambient=whole.ambient, level=n)
    tail = AmpElem(terms=whole.terms[m:], ambient=whole.ambient, level=n)
    return head, tail, whole


def _diagonal_projection_sum(n: int, factor: PQSpace) -> AmpElem:
    return AmpElem(
        terms=tuple((matrix_unit(n, k, k), basis_vector(factor.dimension, k)) for k in range(n)),
        ambient=factor,
        level=n,
    )


def vn_witness(n: int, space: PQSpace | None = None, budget: int = 16, seed: int = 0) -> PopRepresentation:
    """Single diamond ``a (u ⋄ u) b`` for ``V_n`` with ``||a|| = ||b|| = 1``, ``u = Σ P_k e_k``.

    a maps the basis vector at the diagonal position ``(k, k)`` of the
    n²-level onto ``e_k``; b is its adjoint.
    """
    _check_order(n)
    factor = _factor_space(n, space)
    u = _diagonal_projection_sum(n, factor)
    top = n * n
    a = np.zeros((top, top), dtype=np.complex128)
    for k in range(n):
        a[k, k * n + k] = 1.0
    b = a.conj().T.copy()
    norm = pq_norm(u, budget, seed).upper
    if norm is None:
        raise InvalidParameterError("Factor norm has no certified upper bound")
    term = PopTerm(a=a, u=u, v=u, b=b, u_norm=norm, v_norm=norm)
    return PopRepresentation(terms=(term,), origin="explicit_witness")


def projection_pair_diagonal() -> AmpElem:
    """``P(e_1 ⊗ e_1) + Q(e_2 ⊗ e_2)`` in the pop square of ``ℓ_2(^(2)ℂ)``.

    P and Q are orthogonal rank-one projections at level 2; the pop-norm is 2.
    """
    factor = lp_over_atoms([1.0, 1.0], schatten_line(2.0), 2.0)
    ambient: PopTensorQuantization = pop_tensor(factor, factor)
    terms = (
        (matrix_unit(2, 0, 0), basis_vector(4, 0)),
        (matrix_unit(2, 1, 1), basis_vector(4, 3)),
    )
    return AmpElem(terms=terms, ambient=ambient, level=2)


def projection_pair_reference() -> FamilyReference:
    return FamilyReference(pop=2.0)
