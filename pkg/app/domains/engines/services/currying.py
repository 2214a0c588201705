"""Currying, linearization and the standard bioperators.

A bioperator ``ρ: E × F -> G`` is the coefficient tensor ``R[g, i, j]``. Its
curried form ``F -> CB(E, G)`` stores ``R[g, i, j]`` at row ``g * dim E + i``
and column j; the linearization ``E ⊗_pop F -> G`` reads column ``i * dim F + j``.
"""

import logging

import numpy as np

from app.core.exceptions import DimensionError, DomainMismatchError
from app.domains.amplification.schemas import (
    BioperatorDesc,
    BioperatorKind,
    OperatorDesc,
    OperatorKind,
)
from app.domains.matrix.schemas import CVector, as_cvector
from app.domains.spaces.schemas import (
    BaseSpace,
    CBSpaceQuantization,
    PQSpace,
    SchattenQuantization,
    TensorSpace,
    cb_space,
    lp_over_atoms,
    pop_tensor,
    schatten_line,
)

logger = logging.getLogger(__name__)


# ============ Currying ============


def curry(rho: BioperatorDesc) -> OperatorDesc:
    """``ρ -> ρ^F``, with ``ρ^F(y)(x) = ρ(x, y)``."""
    n_codomain, n_left, n_right = rho.coefficients.shape
    return OperatorDesc(
        domain=rho.right,
        codomain=cb_space(rho.left, rho.codomain),
        action=rho.coefficients.reshape(n_codomain * n_left, n_right),
        kind=OperatorKind.CURRIED,
    )


def uncurry(op: OperatorDesc) -> BioperatorDesc:
    """Inverse of ``curry``.

    Raises:
        DomainMismatchError: If the codomain is not a cb_space.
    """
    target = op.codomain
    if not isinstance(target, CBSpaceQuantization):
        raise DomainMismatchError(
            "Only operators into a cb_space can be uncurried", details={"kind": target.kind}
        )
    coeffs = op.action.reshape(target.codomain.dimension, target.domain.dimension, op.domain.dimension)
    return BioperatorDesc(
        left=target.domain,
        right=op.domain,
        codomain=target.codomain,
        coefficients=coeffs,
        kind=BioperatorKind.UNCURRIED,
    )


def linearize(rho: BioperatorDesc) -> OperatorDesc:
    """The operator ``R`` on ``E ⊗_pop F`` with ``R(x ⊗ y) = ρ(x, y)``."""
    n_codomain = rho.codomain.dimension
    return OperatorDesc(
        domain=pop_tensor(rho.left, rho.right),
        codomain=rho.codomain,
        action=rho.coefficients.reshape(n_codomain, -1),
        kind=OperatorKind.LINEARIZED,
    )


# ============ Builders ============


def _tensor_coefficients(n_left: int, n_right: int) -> np.ndarray:
    coeffs = np.zeros((n_left * n_right, n_left, n_right), dtype=np.complex128)
    for i in range(n_left):
        for j in range(n_right):
            coeffs[i * n_right + j, i, j] = 1.0
    return coeffs


def canonical_bioperator(left: PQSpace, right: PQSpace) -> BioperatorDesc:
    """``ϑ: E × F -> E ⊗_pop F``, ``(x, y) -> x ⊗ y``."""
    return BioperatorDesc(
        left=left,
        right=right,
        codomain=pop_tensor(left, right),
        coefficients=_tensor_coefficients(left.dimension, right.dimension),
        kind=BioperatorKind.CANONICAL,
    )


def schatten_tensor_bioperator(left: BaseSpace, right: BaseSpace, p: float, q: float) -> BioperatorDesc:
    """``^(p)E × ^(q)F -> ^(r)(E ⊗_pr F)`` with ``r = max(p, q)``."""
    return BioperatorDesc(
        left=SchattenQuantization(base=left, p=p),
        right=SchattenQuantization(base=right, p=q),
        codomain=SchattenQuantization(base=TensorSpace(left=left, right=right), p=max(p, q)),
        coefficients=_tensor_coefficients(left.dimension, right.dimension),
        kind=BioperatorKind.CANONICAL,
    )


def product_functional(
    f: CVector, g: CVector, left: PQSpace, right: PQSpace
) -> BioperatorDesc:
    """``f × g: (x, y) -> f(x) g(y)`` into ``^(∞)ℂ``."""
    f, g = as_cvector(f), as_cvector(g)
    if (f.size, g.size) != (left.dimension, right.dimension):
        raise DimensionError(
            "Functionals do not match the factor dimensions",
            details={"expected": [left.dimension, right.dimension], "got": [f.size, g.size]},
        )
    return BioperatorDesc(
        left=left,
        right=right,
        codomain=schatten_line(np.inf),
        coefficients=np.outer(f, g)[None, :, :],
        kind=BioperatorKind.PRODUCT_FUNCTIONAL,
    )


def pointwise_bioperator(weights: list[float], p: float, inner: PQSpace) -> BioperatorDesc:
    """``L_p(X, ^(p)ℂ) × F -> L_p(X, F)``, ``(λ, y) -> λ(·) y``."""
    left = lp_over_atoms(weights, schatten_line(p), p)
    codomain = lp_over_atoms(weights, inner, p)
    n_inner = inner.dimension
    coeffs = np.zeros((codomain.dimension, len(weights), n_inner), dtype=np.complex128)
    for t in range(len(weights)):
        for j in range(n_inner):
            coeffs[t * n_inner + j, t, j] = 1.0
    return BioperatorDesc(
        left=left,
        right=inner,
        codomain=codomain,
        coefficients=coeffs,
        kind=BioperatorKind.POINTWISE,
    )


def inner_product_pairing(space: PQSpace) -> BioperatorDesc:
    """``(x, y) -> Σ_i x_i y_i`` on ``space × space`` into ``^(∞)ℂ``."""
    n = space.dimension
    coeffs = np.zeros((1, n, n), dtype=np.complex128)
    coeffs[0, np.arange(n), np.arange(n)] = 1.0
    return BioperatorDesc(
        left=space,
        right=space,
        codomain=schatten_line(np.inf),
        coefficients=coeffs,
        kind=BioperatorKind.PAIRING,
    )


def identity_operator(space: PQSpace, codomain: PQSpace | None = None) -> OperatorDesc:
    """Identity on the underlying vectors, optionally into another quantization."""
    target = space if codomain is None else codomain
    if target.dimension != space.dimension:
        raise DimensionError(
            "Identity needs equal dimensions",
            details={"domain": space.dimension, "codomain": target.dimension},
        )
    return OperatorDesc(
        domain=space,
        codomain=target,
        action=np.eye(space.dimension, dtype=np.complex128),
        kind=OperatorKind.IDENTITY,
    )


def functional(f: CVector, space: PQSpace, p: float = np.inf) -> OperatorDesc:
    """``x -> f @ x`` into ``^(p)ℂ``."""
    f = as_cvector(f)
    if f.size != space.dimension:
        raise DimensionError(
            "Functional does not match the space dimension",
            details={"expected": space.dimension, "got": f.size},
        )
    return OperatorDesc(
        domain=space,
        codomain=schatten_line(p),
        action=f[None, :],
        kind=OperatorKind.FUNCTIONAL,
    )


def lp_tensor_bioperator(
    left_weights: list[float],
    left: PQSpace,
    right_weights: list[float],
    right: PQSpace,
    p: float,
) -> BioperatorDesc:
    """``L_p(X, E) × L_p(Y, F) -> L_p(X × Y, E ⊗_pop F)``, ``z(s, t) = x(s) ⊗ y(t)``.

    Atoms of ``X × Y`` are ordered ``s * |Y| + t`` and carry ``μ_s ν_t``.
    """
    n_x, n_y = len(left_weights), len(right_weights)
    n_left, n_right = left.dimension, right.dimension
    product_weights = [mu * nu for mu in left_weights for nu in right_weights]
    codomain = lp_over_atoms(product_weights, pop_tensor(left, right), p)
    block = n_left * n_right
    coeffs = np.zeros((codomain.dimension, n_x * n_left, n_y * n_right), dtype=np.complex128)
    for s in range(n_x):
        for t in range(n_y):
            for i in range(n_left):
                for j in range(n_right):
                    coeffs[(s * n_y + t) * block + i * n_right + j, s * n_left + i, t * n_right + j] = 1.0
    return BioperatorDesc(
        left=lp_over_atoms(left_weights, left, p),
        right=lp_over_atoms(right_weights, right, p),
        codomain=codomain,
        coefficients=coeffs,
        kind=BioperatorKind.CANONICAL,
    )
