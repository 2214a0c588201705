"""Dense complex linear algebra on matrix levels.

Schatten norms, singular forms, the diamond product, rank-one operators,
pinching and level embeddings. The diamond product is the Kronecker product
under the index pairing ``(i1, i2) -> i1 * d2 + i2``; every diamond identity
in the package flows from this one convention.
"""

import math
from collections.abc import Sequence

import numpy as np
import numpy.typing as npt

from app.core.exceptions import DimensionError, InvalidParameterError
from app.domains.matrix.schemas import (
    CMatrix,
    CVector,
    SingularForm,
    as_cmatrix,
    as_cvector,
    level,
)

INF = math.inf


# ============ Exponents ============


def validate_exponent(p: float) -> float:
    """Reject exponents outside [1, inf]."""
    if math.isnan(p) or p < 1:
        raise InvalidParameterError(
            "Exponent must satisfy p >= 1", details={"p": p}
        )
    return float(p)


def dual_exponent(p: float) -> float:
    """Conjugate exponent p' with 1/p + 1/p' = 1."""
    p = validate_exponent(p)
    if p == 1:
        return INF
    if math.isinf(p):
        return 1.0
    return p / (p - 1)


def lp_norm(values: npt.ArrayLike, p: float) -> float:
    """ℓ_p norm of a vector of magnitudes, scaled to avoid overflow."""
    p = validate_exponent(p)
    s = np.abs(np.asarray(values, dtype=np.complex128)).ravel()
    if s.size == 0:
        return 0.0
    top = float(s.max())
    if top == 0.0:
        return 0.0
    if math.isinf(p):
        return top
    return top * float(np.sum((s / top) ** p) ** (1.0 / p))


# ============ Singular Values ============


def singular_values(a: CMatrix) -> npt.NDArray[np.float64]:
    """Non-increasing singular values."""
    return np.linalg.svd(as_cmatrix(a), compute_uv=False)


def singular_triples(a: CMatrix) -> SingularForm:
    """Singular form ``S diag(s) T`` with unitary S, T.

    Args:
        a: Square complex matrix.

    Returns:
        SingularForm whose reconstruction equals ``a`` to rounding.
    """
    left, values, right = np.linalg.svd(as_cmatrix(a))
    return SingularForm(left=left, values=values, right=right)


def schatten_norm(a: CMatrix, p: float) -> float:
    """Schatten p-norm: ℓ_p norm of the singular values (max for p = inf).

    Raises:
        InvalidParameterError: If p < 1.
    """
    validate_exponent(p)
    return lp_norm(singular_values(a), p)


def schatten_norming_dual(a: CMatrix, p: float) -> CMatrix:
    """Matrix B with ``sum(a * B) = ||a||_p`` and ``||B||_p' = 1``.

    The pairing is the entrywise bilinear one, ``tr(a B^T)``. Zero input gives
    the zero matrix.
    """
    p = validate_exponent(p)
    form = singular_triples(a)
    s = form.values
    weights = np.zeros_like(s)
    if s.size and s[0] > 0:
        if p == 1:
            weights[:] = 1.0
        elif math.isinf(p):
            weights[0] = 1.0
        else:
            norm = lp_norm(s, p)
            weights = (s / norm) ** (p - 1)
    # B^T = right^* diag(w) left^*, so that tr(a B^T) = sum(s * w)
    b_transposed = (form.right.conj().T * weights) @ form.left.conj().T
    return np.ascontiguousarray(b_transposed.T)


# ============ Products ============


def diamond(a: CMatrix, b: CMatrix) -> CMatrix:
    """Diamond product ``a ⋄ b`` at level ``d1 * d2``."""
    return np.kron(as_cmatrix(a), as_cmatrix(b))


def rank_one(xi: CVector, eta: CVector) -> CMatrix:
    """Operator ``ζ -> <ζ, η> ξ``.

    Raises:
        DimensionError: If the vectors differ in length.
    """
    xi = as_cvector(xi)
    eta = as_cvector(eta)
    if xi.shape != eta.shape:
        raise DimensionError(
            "rank_one needs vectors of equal length",
            details={"xi": xi.size, "eta": eta.size},
        )
    return np.outer(xi, eta.conj())


def flip_unitary(d1: int, d2: int) -> CMatrix:
    """Permutation Δ with ``Δ (a ⋄ b) Δ* = b ⋄ a`` for levels d1, d2."""
    if d1 < 1 or d2 < 1:
        raise DimensionError(
            "Levels must be positive", details={"d1": d1, "d2": d2}
        )
    delta = np.zeros((d1 * d2, d1 * d2), dtype=np.complex128)
    for i in range(d1):
        for j in range(d2):
            delta[j * d1 + i, i * d2 + j] = 1.0
    return delta


def basis_vector(n: int, k: int) -> CVector:
    """k-th standard basis vector of ℂ^n."""
    e = np.zeros(n, dtype=np.complex128)
    e[k] = 1.0
    return e


def matrix_unit(d: int, i: int, j: int) -> CMatrix:
    """Matrix unit E_ij at level d."""
    return rank_one(basis_vector(d, i), basis_vector(d, j))


# ============ Levels ============


def embed(a: CMatrix, target: int) -> CMatrix:
    """Zero-pad ``a`` into the top-left block of a ``target`` level.

    Raises:
        DimensionError: If ``target`` is below the level of ``a``.
    """
    a = as_cmatrix(a)
    d = level(a)
    if target < d:
        raise DimensionError(
            "Cannot embed into a smaller level",
            details={"level": d, "target": target},
        )
    if target == d:
        return a
    out = np.zeros((target, target), dtype=np.complex128)
    out[:d, :d] = a
    return out


def align(*matrices: CMatrix) -> list[CMatrix]:
    """Embed every operand into the largest level among them."""
    top = max(level(as_cmatrix(m)) for m in matrices)
    return [embed(m, top) for m in matrices]


# ============ Pinching ============


def _check_projections(projections: Sequence[CMatrix], tol: float) -> None:
    for k, proj in enumerate(projections):
        if not np.allclose(proj, proj.conj().T, atol=tol) or not np.allclose(
            proj @ proj, proj, atol=tol
        ):
            raise InvalidParameterError(
                "Pinching needs orthogonal projections", details={"index": k}
            )
        if abs(np.trace(proj).real - 1.0) > tol:
            raise InvalidParameterError(
                "Pinching needs rank-one projections", details={"index": k}
            )
    for k, first in enumerate(projections):
        for j in range(k + 1, len(projections)):
            if np.abs(first @ projections[j]).max() > tol:
                raise InvalidParameterError(
                    "Pinching projections must be pairwise orthogonal",
                    details={"pair": [k, j]},
                )


def pinch_roots_of_unity(
    a: CMatrix,
    projections: Sequence[CMatrix],
    n: int,
    tol: float = 1e-9,
) -> CMatrix:
    """Average ``(1/n) Σ_m W'_m a W_m`` with ``W_m = Σ_k ζ^{mk} P_k``.

    ζ is the primitive n-th root of unity and ``W'_m`` uses ``ζ^{-mk}``; the
    result equals ``Σ_k P_k a P_k``.

    Args:
        a: Matrix to pinch.
        projections: Pairwise orthogonal rank-one projections.
        n: Number of projections.
        tol: Tolerance for the projection checks.

    Raises:
        InvalidParameterError: If ``n`` does not match or the projections
            are not pairwise orthogonal rank-one projections.
    """
    if n != len(projections) or n < 1:
        raise InvalidParameterError(
            "n must equal the number of projections",
            details={"n": n, "count": len(projections)},
        )
    aligned = align(a, *projections)
    a, projs = aligned[0], aligned[1:]
    _check_projections(projs, tol)

    zeta = np.exp(2j * np.pi / n)
    total = np.zeros_like(a)
    for m in range(1, n + 1):
        w = sum(zeta ** (m * k) * projs[k - 1] for k in range(1, n + 1))
        w_prime = sum(zeta ** (-m * k) * projs[k - 1] for k in range(1, n + 1))
        total += w_prime @ a @ w
    return total / n


def direct_pinch(a: CMatrix, projections: Sequence[CMatrix]) -> CMatrix:
    """``Σ_k P_k a P_k`` computed term by term."""
    aligned = align(a, *projections)
    a, projs = aligned[0], aligned[1:]
    return sum((proj @ a @ proj for proj in projs), np.zeros_like(a))


# ============ Sampling ============


def random_cmatrix(d: int, rng: np.random.Generator) -> CMatrix:
    """Complex Gaussian d x d matrix."""
    return rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))


def random_cvector(n: int, rng: np.random.Generator) -> CVector:
    """Complex Gaussian vector of length n."""
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


def random_unitary(d: int, rng: np.random.Generator) -> CMatrix:
    """Haar-distributed unitary via QR with phase correction."""
    q, r = np.linalg.qr(random_cmatrix(d, rng))
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def diagonal_projections(d: int, count: int | None = None) -> list[CMatrix]:
    """The first ``count`` diagonal rank-one projections at level d."""
    return [matrix_unit(d, k, k) for k in range(d if count is None else count)]
