"""Norm evaluation for base spaces and amplified elements.

``pq_norm`` dispatches on the quantization of the ambient space. Closed-form
quantizations return exact intervals; the others combine the projective,
diamond and supremum engines and report whatever gap remains.
"""

import logging
import math

import numpy as np

from app.core.config import settings
from app.core.exceptions import DomainMismatchError, InvalidParameterError
from app.domains.amplification.schemas import AmpElem
from app.domains.engines.schemas import (
    CertificateMethod,
    FunctionalWitness,
    NormCertificate,
    StructuralWitness,
    aggregate_lp,
)
from app.domains.engines.services.projective import (
    proj_norm_upper,
    projective_certificate,
)
from app.domains.matrix.schemas import CVector
from app.domains.matrix.services.linalg import random_cvector
from app.domains.spaces.schemas import (
    BaseSpace,
    CBSpaceQuantization,
    DualSpace,
    LpQuantization,
    MinQuantization,
    PopTensorQuantization,
    PQSpace,
    PrTensorQuantization,
    SchattenQuantization,
)
from app.domains.spaces.services.duality import maximize_pairing
from app.domains.spaces.services.factors import (
    BochnerFactor,
    Factor,
    SchattenFactor,
    TensorFactor,
    factor_for,
)

logger = logging.getLogger(__name__)

ALTERNATION_ROUNDS = 8


def _defaults(budget: int | None, seed: int | None) -> tuple[int, int]:
    return (
        settings.BUDGET if budget is None else budget,
        settings.SEED if seed is None else seed,
    )


def nested_budget(budget: int) -> int:
    """Budget handed to norm evaluations nested inside another search."""
    return max(1, budget // 8)


# ============ Underlying Spaces ============


def underlying_factor(space: PQSpace, budget: int = 16, seed: int = 0) -> Factor | None:
    """Classical factor of the underlying space, when one exists.

    ``||P x|| = ||x||`` for every rank-one norm-one P, so this factor also
    evaluates level-one elements. Diamond and operator-space tensors have
    no classical description and give None.
    """
    if isinstance(space, (SchattenQuantization, MinQuantization)):
        return factor_for(space.base, budget, seed)
    if isinstance(space, LpQuantization):
        inner = underlying_factor(space.inner, budget, seed)
        if inner is None:
            return None
        return BochnerFactor(space.measure.atom_weights, inner, space.p)
    if isinstance(space, PrTensorQuantization):
        right = underlying_factor(space.right, budget, seed)
        if right is None:
            return None
        return TensorFactor(factor_for(space.left, budget, seed), right, budget=budget, seed=seed)
    return None


class AmplifiedOracle:
    """Norm bounds of ``K F`` elements of a fixed level on flattened coordinates."""

    def __init__(self, space: PQSpace, level: int, budget: int, seed: int) -> None:
        self.space = space
        self.level = level
        self.budget = budget
        self.seed = seed
        self.dim = space.dimension * level * level

    def element(self, y: CVector) -> AmpElem:
        coords = np.reshape(y, (self.space.dimension, self.level, self.level))
        return AmpElem.from_coordinates(coords, self.space)

    def norm_bounds(self, y: CVector) -> tuple[float, float]:
        cert = pq_norm(self.element(y), self.budget, self.seed)
        return cert.lower, math.inf if cert.upper is None else cert.upper


def level_one_oracle(space: PQSpace, budget: int, seed: int) -> Factor | AmplifiedOracle:
    """Oracle for the underlying norm: the classical factor or level-one elements."""
    factor = underlying_factor(space, budget, seed)
    return factor if factor is not None else AmplifiedOracle(space, 1, budget, seed)


# ============ Base Spaces ============


def base_norm(
    x: CVector, space: BaseSpace, budget: int | None = None, seed: int | None = None
) -> float:
    """Norm of a vector in a classical base space.

    Tensor kinds delegate to the projective engine (an upper bound unless a
    closed form applies); dual kinds run the pairing ascent.

    Raises:
        DimensionError: If ``x`` does not match the space dimension.
    """
    budget, seed = _defaults(budget, seed)
    factor = factor_for(space, budget, seed)
    x = factor.check(x)
    if isinstance(space, DualSpace):
        value, _ = maximize_pairing(x, factor_for(space.space, budget, seed), budget, seed)
        return value
    return factor.norm(x)


# ============ Quantizations ============


def _norm_schatten(u: AmpElem, space: SchattenQuantization, budget: int, seed: int) -> NormCertificate:
    coords = u.coordinates()
    n, d, _ = coords.shape
    grid = coords.reshape(n, d * d)
    return projective_certificate(
        grid, factor_for(space.base, budget, seed), SchattenFactor(d, space.p), budget, seed
    )


def _min_functional_search(
    coords: np.ndarray, factor: Factor, budget: int, seed: int
) -> tuple[float, CVector]:
    """Best ``||Σ f_i T_i||_∞ / ||f||*`` over searched functionals f."""
    n = coords.shape[0]

    def evaluate(f: CVector) -> float:
        dual = factor.dual_norm(f)
        if dual <= 0:
            return 0.0
        return float(np.linalg.norm(np.einsum("i,ijk->jk", f, coords), 2)) / dual

    grid = coords.reshape(n, -1)
    u, s, _ = np.linalg.svd(grid, full_matrices=False)
    rng = np.random.default_rng([seed, 0])
    starts = [factor.norming_functional(u[:, k]) for k in range(int(np.count_nonzero(s > 0)))]
    starts += list(np.eye(n, dtype=np.complex128))
    starts += [factor.norming_functional(random_cvector(n, rng)) for _ in range(settings.RESTARTS)]

    best_value, best_f = 0.0, starts[0]
    for f in starts:
        for _ in range(min(budget, ALTERNATION_ROUNDS) + 1):
            value = evaluate(f)
            if value > best_value:
                best_value, best_f = value, f
            left, _, right = np.linalg.svd(np.einsum("i,ijk->jk", f, coords))
            c = np.einsum("j,ijk,k->i", left[:, 0].conj(), coords, right[0].conj())
            if not np.any(c):
                break
            f = factor.norming_functional(c)
    return best_value, best_f


def _norm_min(u: AmpElem, space: MinQuantization, budget: int, seed: int) -> NormCertificate:
    coords = u.coordinates()
    n, d, _ = coords.shape
    factor = factor_for(space.base, budget, seed)
    spectral = SchattenFactor(d, math.inf)
    grid = coords.reshape(n, d * d)
    if n == 1:
        return projective_certificate(grid, factor, spectral, budget, seed)

    lower, f = _min_functional_search(coords, factor, budget, seed)
    # the minimal quantization sits below ^(∞)E
    upper, dec = proj_norm_upper(grid, factor, spectral, budget, seed, target=lower)
    cert = NormCertificate(
        lower,
        upper,
        CertificateMethod.SUP_SEARCH,
        seed,
        upper_witness=dec,
        lower_witness=FunctionalWitness(tag="min_functional", value=lower, vectors={"f": f}),
    )
    if cert.gap > settings.OPTIMIZER_TOL * max(upper, 1e-300):
        logger.warning(f"min quantization left a gap: [{cert.lower:.6g}, {upper:.6g}]")
    return cert


def norm_Lp(u: AmpElem, budget: int | None = None, seed: int | None = None) -> NormCertificate:
    """Regroup coefficients per atom and aggregate the inner certificates.

    Raises:
        DomainMismatchError: If the ambient is not an L_p quantization.
    """
    budget, seed = _defaults(budget, seed)
    space = u.ambient
    if not isinstance(space, LpQuantization):
        raise DomainMismatchError("norm_Lp needs an Lp ambient", details={"kind": space.kind})
    coords = u.coordinates()
    inner_dim = space.inner.dimension
    certificates = []
    for t in range(space.measure.size):
        block = coords[t * inner_dim : (t + 1) * inner_dim]
        if not np.any(block):
            certificates.append(NormCertificate.exact(0.0, CertificateMethod.CLOSED_FORM, seed))
            continue
        certificates.append(pq_norm(AmpElem.from_coordinates(block, space.inner), budget, seed))
    lower, upper = aggregate_lp(certificates, list(space.measure.atom_weights), space.p)
    witness = StructuralWitness(
        tag="atom_regrouping",
        value=lower,
        detail={"atoms": [{"lower": c.lower, "upper": c.upper} for c in certificates]},
    )
    return NormCertificate(
        lower,
        upper,
        CertificateMethod.INTERVAL_AGGREGATE,
        seed,
        upper_witness=witness,
        lower_witness=witness,
    )


def norm_pr_quant(u: AmpElem, budget: int | None = None, seed: int | None = None) -> NormCertificate:
    """Flip ``a (x ⊗ y)`` to ``x ⊗ a y`` and evaluate the projective norm.

    Raises:
        DomainMismatchError: If the ambient is not a pr_tensor quantization.
    """
    budget, seed = _defaults(budget, seed)
    space = u.ambient
    if not isinstance(space, PrTensorQuantization):
        raise DomainMismatchError(
            "norm_pr_quant needs a pr_tensor ambient", details={"kind": space.kind}
        )
    coords = u.coordinates()
    d = u.level
    n_left = space.left.dimension
    grid = coords.reshape(n_left, -1)
    inner = nested_budget(budget)
    right = AmplifiedOracle(space.right, d, inner, seed)
    return projective_certificate(grid, factor_for(space.left, budget, seed), right, inner, seed)


def pq_norm(u: AmpElem, budget: int | None = None, seed: int | None = None) -> NormCertificate:
    """Certificate ``[lower, upper]`` for the norm of u in its ambient space.

    Raises:
        InvalidParameterError: If the quantization is unknown.
    """
    budget, seed = _defaults(budget, seed)
    if u.is_zero():
        return NormCertificate.exact(0.0, CertificateMethod.CLOSED_FORM, seed)
    space = u.ambient
    if isinstance(space, SchattenQuantization):
        return _norm_schatten(u, space, budget, seed)
    if isinstance(space, MinQuantization):
        return _norm_min(u, space, budget, seed)
    if isinstance(space, LpQuantization):
        return norm_Lp(u, budget, seed)
    if isinstance(space, PrTensorQuantization):
        return norm_pr_quant(u, budget, seed)
    if isinstance(space, PopTensorQuantization):
        from app.domains.engines.services.pop import pop_certificate

        return pop_certificate(u, budget, seed)
    if isinstance(space, CBSpaceQuantization):
        from app.domains.engines.services.cb import cbspace_certificate

        return cbspace_certificate(u, budget=budget, seed=seed)
    raise InvalidParameterError("Unknown quantization", details={"kind": str(space)})
