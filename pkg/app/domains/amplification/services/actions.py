"""Bimodule actions, diamond products and amplified operators on K E."""

import logging

import numpy as np

from app.core.config import settings
from app.core.exceptions import DimensionError, DomainMismatchError
from app.domains.amplification.schemas import AmpElem, BioperatorDesc, OperatorDesc
from app.domains.matrix.schemas import CMatrix, as_cmatrix
from app.domains.matrix.services.linalg import align, diamond, embed
from app.domains.spaces.schemas import (
    PopTensorQuantization,
    PQSpace,
    PrTensorQuantization,
)

logger = logging.getLogger(__name__)


def module_action(a: CMatrix, u: AmpElem, b: CMatrix) -> AmpElem:
    """``a · u · b``: every coefficient c becomes ``a c b`` after level alignment."""
    a, b = align(as_cmatrix(a), as_cmatrix(b))
    top = max(a.shape[0], u.level)
    a, b = embed(a, top), embed(b, top)
    return AmpElem(
        terms=tuple((a @ embed(c, top) @ b, x) for c, x in u.terms),
        ambient=u.ambient,
        level=top,
    )


def _check_factors(ambient: PQSpace, u: AmpElem, v: AmpElem) -> None:
    if isinstance(ambient, PopTensorQuantization):
        left_dim, right_dim = ambient.left.dimension, ambient.right.dimension
    elif isinstance(ambient, PrTensorQuantization):
        left_dim, right_dim = ambient.left.dimension, ambient.right.dimension
    else:
        raise DomainMismatchError(
            "Diamond products need a pr_tensor or pop_tensor ambient",
            details={"kind": ambient.kind},
        )
    if (u.dimension, v.dimension) != (left_dim, right_dim):
        raise DimensionError(
            "Factor dimensions do not match the tensor ambient",
            details={
                "expected": [left_dim, right_dim],
                "got": [u.dimension, v.dimension],
            },
        )


def amp_diamond(u: AmpElem, v: AmpElem, ambient: PQSpace | None) -> AmpElem:
    """``u ⋄ v`` in the tensor ambient: ``(a x) ⋄ (b y) = (a ⋄ b)(x ⊗ y)``.

    Raises:
        DomainMismatchError: If no tensor ambient is supplied.
    """
    if ambient is None:
        raise DomainMismatchError("amp_diamond needs a tensor ambient")
    _check_factors(ambient, u, v)
    terms = tuple(
        (diamond(c, c2), np.kron(x, y)) for c, x in u.terms for c2, y in v.terms
    )
    return AmpElem(terms=terms, ambient=ambient, level=u.level * v.level)


def scalar_diamond(a: CMatrix, u: AmpElem, side: str = "left") -> AmpElem:
    """``a ⋄ u`` (side="left") or ``u ⋄ a`` (side="right"), ambient unchanged."""
    a = as_cmatrix(a)
    if side not in ("left", "right"):
        raise DomainMismatchError("side must be 'left' or 'right'", details={"side": side})
    if side == "left":
        terms = tuple((diamond(a, c), x) for c, x in u.terms)
    else:
        terms = tuple((diamond(c, a), x) for c, x in u.terms)
    return AmpElem(terms=terms, ambient=u.ambient, level=a.shape[0] * u.level)


def amplify_operator(phi: OperatorDesc, u: AmpElem) -> AmpElem:
    """``φ_∞``: every term ``(c, x)`` becomes ``(c, φ x)``.

    Raises:
        DomainMismatchError: If u does not live in the operator's domain.
    """
    if u.ambient != phi.domain:
        raise DomainMismatchError(
            "Element is not in the operator domain",
            details={"domain": phi.domain.kind, "ambient": u.ambient.kind},
        )
    return AmpElem(
        terms=tuple((c, phi.apply(x)) for c, x in u.terms),
        ambient=phi.codomain,
        level=u.level,
    )


def amplify_bioperator(rho: BioperatorDesc, u: AmpElem, v: AmpElem) -> AmpElem:
    """``ρ_∞(a x, b y) = (a ⋄ b) ρ(x, y)``, extended bilinearly."""
    if u.ambient != rho.left or v.ambient != rho.right:
        raise DomainMismatchError(
            "Elements are not in the bioperator domains",
            details={"left": u.ambient.kind, "right": v.ambient.kind},
        )
    terms = tuple(
        (diamond(c, c2), rho.apply(x, y)) for c, x in u.terms for c2, y in v.terms
    )
    return AmpElem(terms=terms, ambient=rho.codomain, level=u.level * v.level)


def support_projection(u: AmpElem, tol: float | None = None) -> CMatrix:
    """Smallest orthogonal projection P with ``P · u · P = u``.

    P projects onto the joint span of the ranges of all coefficients and of
    their adjoints.
    """
    tol = settings.RANK_TOL if tol is None else tol
    d = u.level
    coords = u.coordinates()
    if not coords.size or not np.any(coords):
        return np.zeros((d, d), dtype=np.complex128)
    stacked = np.concatenate(
        [np.concatenate(list(coords), axis=1), np.concatenate([c.conj().T for c in coords], axis=1)],
        axis=1,
    )
    left, values, _ = np.linalg.svd(stacked, full_matrices=False)
    rank = int(np.count_nonzero(values > tol * max(1.0, float(values[0]))))
    basis = left[:, :rank]
    return basis @ basis.conj().T


def compress(u: AmpElem, threshold: float | None = None) -> AmpElem:
    """Merge terms with equal vectors and drop numerically zero coefficients."""
    threshold = settings.COMPRESS_THRESHOLD if threshold is None else threshold
    merged: list[tuple[CMatrix, np.ndarray]] = []
    for c, x in u.terms:
        for k, (c0, x0) in enumerate(merged):
            if np.array_equal(x0, x):
                merged[k] = (c0 + c, x0)
                break
        else:
            merged.append((c.copy(), x))
    kept = tuple(
        (c, x) for c, x in merged if np.abs(c).max(initial=0.0) > threshold and np.any(x)
    )
    if len(kept) < len(u.terms):
        logger.debug(f"compress: {len(u.terms)} terms -> {len(kept)}")
    return AmpElem(terms=kept, ambient=u.ambient, level=u.level)
