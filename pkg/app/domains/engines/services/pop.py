"""Diamond-projective and single-diamond norms on ``E ⊗_pop F``.

Upper bounds are explicit representations ``Σ_k a_k (u_k ⋄ v_k) b_k``;
lower bounds come from product functionals ``f × g`` and from the exact
reductions available for L1 factors, Schatten factors and p-convex partners.
"""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from app.core.config import settings
from app.core.exceptions import DomainMismatchError, InvalidParameterError
from app.domains.amplification.schemas import AmpElem
from app.domains.amplification.services.actions import module_action
from app.domains.engines.schemas import (
    CertificateMethod,
    FunctionalWitness,
    NormCertificate,
    PopRepresentation,
    PopTerm,
    StructuralWitness,
)
from app.domains.engines.services.projective import NormOracle, proj_norm_upper
from app.domains.matrix.schemas import CMatrix
from app.domains.matrix.services.linalg import (
    basis_vector,
    diamond,
    embed,
    random_cmatrix,
    random_unitary,
    rank_one,
    schatten_norm,
    singular_triples,
)
from app.domains.spaces.schemas import (
    LpQuantization,
    PopTensorQuantization,
    PrTensorQuantization,
    SchattenQuantization,
    TensorSpace,
    convexity,
    pop_tensor,
)
from app.domains.spaces.services.norms import (
    AmplifiedOracle,
    level_one_oracle,
    nested_budget,
    pq_norm,
    underlying_factor,
)

logger = logging.getLogger(__name__)

RESIDUAL_TOL = 1e-10
ALTERNATION_ROUNDS = 8
ONE = np.ones((1, 1), dtype=np.complex128)
SOLVE_ROUNDS = 200
SOLVE_TOL = 1e-10


def _ambient(u: AmpElem) -> PopTensorQuantization:
    if not isinstance(u.ambient, PopTensorQuantization):
        raise DomainMismatchError(
            "Diamond norms need a pop_tensor ambient", details={"kind": u.ambient.kind}
        )
    return u.ambient


def _upper_norm(u: AmpElem, budget: int, seed: int) -> float:
    upper = pq_norm(u, budget, seed).upper
    return math.inf if upper is None else upper


def _blocks(u: AmpElem) -> np.ndarray:
    space = _ambient(u)
    d = u.level
    return u.coordinates().reshape(space.left.dimension, space.right.dimension, d, d)


def _empty() -> PopRepresentation:
    return PopRepresentation(terms=(), origin="zero")


def _fits(rep: PopRepresentation, target: AmpElem) -> bool:
    scale = max(1.0, float(np.abs(target.coordinates()).max(initial=0.0)))
    return rep.residual(target) <= RESIDUAL_TOL * scale


# ============ Representation Seeds ============


def _contraction(u: AmpElem, budget: int, seed: int, flipped: bool) -> PopRepresentation:
    """Terms ``(1 x_k) ⋄ V_k`` (or ``V_k ⋄ (1 y_k)``) from a projective decomposition."""
    space = _ambient(u)
    d = u.level
    blocks = _blocks(u)
    inner = nested_budget(budget)
    near, far = (space.right, space.left) if flipped else (space.left, space.right)
    if flipped:
        blocks = blocks.transpose(1, 0, 2, 3)
    grid = blocks.reshape(near.dimension, -1)
    left: NormOracle = level_one_oracle(near, inner, seed)
    right = AmplifiedOracle(far, d, inner, seed)
    _, dec = proj_norm_upper(grid, left, right, inner, seed)

    eye = np.eye(d, dtype=np.complex128)
    terms = []
    for k in range(dec.length):
        x, y = dec.left[:, k], dec.right[k]
        scalar = AmpElem.elementary(ONE, x, near)
        block = right.element(y)
        x_norm, y_norm = left.norm_bounds(x)[1], right.norm_bounds(y)[1]
        if flipped:
            terms.append(PopTerm(a=eye, u=block, v=scalar, b=eye, u_norm=y_norm, v_norm=x_norm))
        else:
            terms.append(PopTerm(a=eye, u=scalar, v=block, b=eye, u_norm=x_norm, v_norm=y_norm))
    origin = "right_contraction" if flipped else "left_contraction"
    return PopRepresentation(terms=tuple(terms), origin=origin)


def contraction_seeds(u: AmpElem, budget: int, seed: int) -> list[PopRepresentation]:
    """Left and right contraction representations."""
    return [_contraction(u, budget, seed, flipped=False), _contraction(u, budget, seed, flipped=True)]


def diagonal_seed(u: AmpElem, budget: int, seed: int) -> PopRepresentation:
    """One rank-one term per singular value of every coefficient block.

    A block ``C = Σ_r s_r ξ_r η_r*`` contributes ``(s_r ξ_r ∘ e_0)(e_i ⋄ f_j)(e_0 ∘ η_r)``.
    """
    space = _ambient(u)
    blocks = _blocks(u)
    d = u.level
    n_left, n_right = space.left.dimension, space.right.dimension
    left = level_one_oracle(space.left, budget, seed)
    right = level_one_oracle(space.right, budget, seed)
    left_norms = [left.norm_bounds(basis_vector(n_left, i))[1] for i in range(n_left)]
    right_norms = [right.norm_bounds(basis_vector(n_right, j))[1] for j in range(n_right)]
    e0 = basis_vector(d, 0)

    terms = []
    for i in range(n_left):
        for j in range(n_right):
            if not np.any(blocks[i, j]):
                continue
            form = singular_triples(blocks[i, j])
            for r in range(form.rank(settings.RANK_TOL)):
                terms.append(
                    PopTerm(
                        a=rank_one(form.values[r] * form.left[:, r], e0),
                        u=AmpElem.elementary(ONE, basis_vector(n_left, i), space.left),
                        v=AmpElem.elementary(ONE, basis_vector(n_right, j), space.right),
                        b=rank_one(e0, form.right[r].conj()),
                        u_norm=left_norms[i],
                        v_norm=right_norms[j],
                    )
                )
    return PopRepresentation(terms=tuple(terms), origin="diagonalization")


def block_lift(u: AmpElem, budget: int, seed: int) -> PopRepresentation | None:
    """Single-diamond representation through orthogonal block projections.

    ``u = Σ_i P_i e_i`` and ``v = Σ_j Q_j f_j`` with pairwise orthogonal
    projections of rank ρ (the largest block rank) and 1; the outer matrices
    carry the factors ``C_ij = L_ij R_ij`` of every block on the range of
    ``P_i ⋄ Q_j``. Rows and columns without coefficients are skipped.
    """
    space = _ambient(u)
    blocks = _blocks(u)
    d = u.level
    rows = [i for i in range(blocks.shape[0]) if np.any(blocks[i])]
    cols = [j for j in range(blocks.shape[1]) if np.any(blocks[:, j])]
    if not rows:
        return None
    forms = {(i, j): singular_triples(blocks[i, j]) for i in rows for j in cols}
    rho = max(form.rank(settings.RANK_TOL) for form in forms.values())
    du, dv = len(rows) * rho, len(cols)
    top = max(d, du * dv)

    left_terms = []
    for a, i in enumerate(rows):
        proj = np.zeros((du, du), dtype=np.complex128)
        proj[a * rho : (a + 1) * rho, a * rho : (a + 1) * rho] = np.eye(rho)
        left_terms.append((proj, basis_vector(space.left.dimension, i)))
    right_terms = [
        (rank_one(basis_vector(dv, b), basis_vector(dv, b)), basis_vector(space.right.dimension, j))
        for b, j in enumerate(cols)
    ]
    u_part = AmpElem(terms=tuple(left_terms), ambient=space.left, level=du)
    v_part = AmpElem(terms=tuple(right_terms), ambient=space.right, level=dv)

    outer_left = np.zeros((top, top), dtype=np.complex128)
    outer_right = np.zeros((top, top), dtype=np.complex128)
    for a, i in enumerate(rows):
        for b, j in enumerate(cols):
            form = forms[(i, j)]
            root = np.sqrt(form.values[:rho])
            for r in range(rho):
                col = (a * rho + r) * dv + b
                outer_left[:d, col] = form.left[:, r] * root[r]
                outer_right[col, :d] = root[r] * form.right[r]
    term = PopTerm(
        a=outer_left,
        u=u_part,
        v=v_part,
        b=outer_right,
        u_norm=_upper_norm(u_part, budget, seed),
        v_norm=_upper_norm(v_part, budget, seed),
    )
    return PopRepresentation(terms=(term,), origin="block_lift")


# ============ Multiplicative Moves ============


def _random_invertible(d: int, rng: np.random.Generator, spread: float) -> CMatrix:
    scales = np.exp(spread * rng.standard_normal(d))
    return (random_unitary(d, rng) * scales) @ random_unitary(d, rng)


def _improve(
    rep: PopRepresentation,
    target: AmpElem,
    steps: int,
    rng: np.random.Generator,
    budget: int,
    seed: int,
) -> PopRepresentation:
    """Random multiplicative moves on single terms, keeping cost decreases."""
    terms = list(rep.terms)
    if not terms:
        return rep
    scale = max(1.0, float(np.abs(target.coordinates()).max(initial=0.0)))
    step = 0.3
    accepted = 0
    for _ in range(steps):
        k = int(rng.integers(len(terms)))
        side = int(rng.integers(2))
        term = terms[k]
        dim = term.u.level if side == 0 else term.v.level
        g = np.eye(dim) + step * random_cmatrix(dim, rng) / np.sqrt(2 * dim)
        h = np.eye(dim) + step * random_cmatrix(dim, rng) / np.sqrt(2 * dim)
        if not math.isfinite(term.cost):
            continue
        try:
            ident_u, ident_v = np.eye(term.u.level), np.eye(term.v.level)
            pair_u = (g, h) if side == 0 else (ident_u, ident_u)
            pair_v = (ident_v, ident_v) if side == 0 else (g, h)
            candidate = move_term(term, pair_u, pair_v, side, budget, seed)
        except np.linalg.LinAlgError:
            step = max(step * 0.5, 1e-4)
            continue
        top = term.level
        drift = float(np.abs(candidate.coordinates(top) - term.coordinates(top)).max())
        if drift <= RESIDUAL_TOL * scale and candidate.cost < term.cost:
            terms[k] = candidate
            accepted += 1
            step = min(step * 1.5, 2.0)
        else:
            step = max(step * 0.7, 1e-4)
    logger.debug(f"diamond moves: {accepted}/{steps} accepted")
    if not accepted:
        return rep
    return PopRepresentation(terms=tuple(terms), origin=f"{rep.origin}+moves")


def move_term(
    term: PopTerm,
    pair_u: tuple[CMatrix, CMatrix],
    pair_v: tuple[CMatrix, CMatrix],
    side: int,
    budget: int,
    seed: int,
) -> PopTerm:
    top = term.level
    (g, h), (g2, h2) = pair_u, pair_v
    u2 = module_action(g, term.u, h) if side == 0 else term.u
    v2 = module_action(g2, term.v, h2) if side == 1 else term.v
    a2 = term.a @ embed(diamond(np.linalg.inv(g), np.linalg.inv(g2)), top)
    b2 = embed(diamond(np.linalg.inv(h), np.linalg.inv(h2)), top) @ term.b
    return PopTerm(
        a=a2,
        u=u2,
        v=v2,
        b=b2,
        u_norm=_upper_norm(u2, budget, seed) if side == 0 else term.u_norm,
        v_norm=_upper_norm(v2, budget, seed) if side == 1 else term.v_norm,
    )


# ============ Upper Bounds ============


def op_norm_upper(
    u: AmpElem,
    budget: int | None = None,
    seed: int | None = None,
    seeds: Sequence[PopRepresentation] | None = None,
) -> tuple[float, PopRepresentation]:
    """Best ``||a|| ||u|| ||v|| ||b||`` over searched single-diamond representations.

    Starts from the block lift and the single-term contraction seeds (or the
    supplied ``seeds``), then applies ``budget`` multiplicative moves.
    """
    budget = settings.BUDGET if budget is None else budget
    seed = settings.SEED if seed is None else seed
    _ambient(u)
    if u.is_zero():
        return 0.0, _empty()
    if seeds is None:
        seeds = contraction_seeds(u, budget, seed)
    candidates = [rep for rep in seeds if rep.is_single_diamond and _fits(rep, u)]
    lift = block_lift(u, budget, seed)
    if lift is not None:
        candidates.append(lift)
    if not candidates:
        raise InvalidParameterError("No single-diamond representation available")
    best = min(candidates, key=lambda rep: rep.cost)
    best = _improve(best, u, budget, np.random.default_rng([seed, 0]), nested_budget(budget), seed)
    logger.debug(f"op upper: {best.cost:.6g} ({best.origin})")
    return best.cost, best


def pop_upper(
    u: AmpElem,
    budget: int | None = None,
    seed: int | None = None,
    seeds: Sequence[PopRepresentation] = (),
) -> tuple[float, PopRepresentation]:
    """Cheapest representation found; never below ``||u||_pop``.

    Candidates are the contraction seeds, the diagonalization seed, any
    supplied representations and the best single-diamond representation,
    so the result never exceeds ``op_norm_upper`` on the same input.
    """
    budget = settings.BUDGET if budget is None else budget
    seed = settings.SEED if seed is None else seed
    _ambient(u)
    if u.is_zero():
        return 0.0, _empty()
    contractions = contraction_seeds(u, budget, seed)
    candidates = contractions + [diagonal_seed(u, budget, seed)]
    candidates += [rep for rep in seeds if _fits(rep, u)]
    _, single = op_norm_upper(u, budget, seed, seeds=contractions + list(seeds))
    candidates.append(single)
    best = min(candidates, key=lambda rep: rep.cost)
    if not best.is_single_diamond:
        best = _improve(
            best, u, nested_budget(budget), np.random.default_rng([seed, 1]), nested_budget(budget), seed
        )
    logger.debug(f"pop upper: {best.cost:.6g} ({best.origin})")
    return best.cost, best


# ============ Structural Reductions ============


@dataclass(frozen=True)
class StructuralBound:
    """Interval obtained through an isometric identification."""

    lower: float
    upper: float | None
    tag: str

    def to_witness(self) -> StructuralWitness:
        return StructuralWitness(tag=self.tag, value=self.lower, detail={"upper": self.upper})


def _sum_bounds(pieces: list[tuple[float, NormCertificate]], tag: str) -> StructuralBound:
    lower = float(sum(w * c.lower for w, c in pieces))
    if any(c.upper is None for _, c in pieces):
        return StructuralBound(lower, None, tag)
    return StructuralBound(lower, float(sum(w * c.upper for w, c in pieces)), tag)  # type: ignore[misc]


def _l1_atoms_left(u: AmpElem, space: PopTensorQuantization, budget: int, seed: int) -> StructuralBound:
    left = space.left
    assert isinstance(left, LpQuantization)
    d = u.level
    atoms = u.coordinates().reshape(left.measure.size, -1, d, d)
    inner = pop_tensor(left.inner, space.right)
    pieces = [
        (w, pq_norm(AmpElem.from_coordinates(block, inner), budget, seed))
        for w, block in zip(left.measure.atom_weights, atoms, strict=True)
        if np.any(block)
    ]
    return _sum_bounds(pieces, "l1_atoms_left")


def _l1_atoms_right(u: AmpElem, space: PopTensorQuantization, budget: int, seed: int) -> StructuralBound:
    right = space.right
    assert isinstance(right, LpQuantization)
    d = u.level
    n_left = space.left.dimension
    grid = u.coordinates().reshape(n_left, right.measure.size, right.inner.dimension, d, d)
    inner = pop_tensor(space.left, right.inner)
    pieces = []
    for t, w in enumerate(right.measure.atom_weights):
        block = grid[:, t].reshape(n_left * right.inner.dimension, d, d)
        if np.any(block):
            pieces.append((w, pq_norm(AmpElem.from_coordinates(block, inner), budget, seed)))
    return _sum_bounds(pieces, "l1_atoms_right")


def _from_certificate(cert: NormCertificate, tag: str) -> StructuralBound:
    return StructuralBound(cert.lower, cert.upper, tag)


def structural_bounds(u: AmpElem, budget: int, seed: int) -> StructuralBound | None:
    """Exact identifications that apply to the factors, merged into one interval.

    * L1 factors split over their atoms.
    * Two P-quantizations with a common p give ``^(p)(E ⊗_pr F)``.
    * A P-quantization with a partner at least as convex gives the
      projective quantization on the same side.
    """
    space = _ambient(u)
    left, right = space.left, space.right
    bounds: list[StructuralBound] = []
    if isinstance(left, LpQuantization) and left.p == 1:
        bounds.append(_l1_atoms_left(u, space, budget, seed))
    elif isinstance(right, LpQuantization) and right.p == 1:
        bounds.append(_l1_atoms_right(u, space, budget, seed))
    if isinstance(left, SchattenQuantization) and isinstance(right, SchattenQuantization) and left.p == right.p:
        target = SchattenQuantization(base=TensorSpace(left=left.base, right=right.base), p=left.p)
        bounds.append(_from_certificate(pq_norm(u.with_ambient(target), budget, seed), "schatten_tensor"))
    if isinstance(left, SchattenQuantization) and convexity(right) >= left.p:
        target_pr = PrTensorQuantization(left=left.base, right=right)
        bounds.append(_from_certificate(pq_norm(u.with_ambient(target_pr), budget, seed), "convex_right"))
    if isinstance(right, SchattenQuantization) and convexity(left) >= right.p:
        d = u.level
        flipped = _blocks(u).transpose(1, 0, 2, 3).reshape(-1, d, d)
        target_pr = PrTensorQuantization(left=right.base, right=left)
        cert = pq_norm(AmpElem.from_coordinates(flipped, target_pr), budget, seed)
        bounds.append(_from_certificate(cert, "convex_left"))
    if not bounds:
        return None
    best = max(bounds, key=lambda b: b.lower)
    uppers = [b.upper for b in bounds if b.upper is not None]
    upper = min(uppers) if uppers else None
    logger.info(f"structural reduction {best.tag}: [{best.lower:.6g}, {upper}]")
    return StructuralBound(best.lower, upper, best.tag)


# ============ Lower Bounds ============


def product_functional_lower(
    u: AmpElem, budget: int, seed: int
) -> tuple[float, FunctionalWitness | None]:
    """Best ``||(f × g)_∞(u)||_∞ / (||f|| ||g||)`` over searched pairs."""
    space = _ambient(u)
    left = underlying_factor(space.left, budget, seed)
    right = underlying_factor(space.right, budget, seed)
    if left is None or right is None:
        return 0.0, None
    blocks = _blocks(u)

    def evaluate(f: np.ndarray, g: np.ndarray) -> float:
        dual = left.dual_norm(f) * right.dual_norm(g)
        if dual <= 0:
            return 0.0
        return schatten_norm(np.einsum("i,j,ijkl->kl", f, g, blocks), math.inf) / dual

    rng = np.random.default_rng([seed, 0])
    starts = [
        (basis_vector(left.dim, i), basis_vector(right.dim, j))
        for i in range(left.dim)
        for j in range(right.dim)
    ]
    starts += [
        (
            left.norming_functional(rng.standard_normal(left.dim) + 1j * rng.standard_normal(left.dim)),
            right.norming_functional(rng.standard_normal(right.dim) + 1j * rng.standard_normal(right.dim)),
        )
        for _ in range(settings.RESTARTS)
    ]
    best_value, best_pair = 0.0, starts[0]
    for f, g in starts:
        for _ in range(min(budget, ALTERNATION_ROUNDS) + 1):
            value = evaluate(f, g)
            if value > best_value:
                best_value, best_pair = value, (f, g)
            form = singular_triples(np.einsum("i,j,ijkl->kl", f, g, blocks))
            xi, eta = form.left[:, 0], form.right[0].conj()
            pairing = np.einsum("k,ijkl,l->ij", xi.conj(), blocks, eta)
            if not np.any(pairing):
                break
            f = left.norming_functional(pairing @ g)
            g = right.norming_functional(f @ pairing)
    witness = FunctionalWitness(
        tag="product_functional_pair",
        value=best_value,
        vectors={"f": best_pair[0], "g": best_pair[1]},
    )
    return best_value, witness


def pop_lower(
    u: AmpElem, budget: int | None = None, seed: int | None = None
) -> tuple[float, StructuralWitness | FunctionalWitness | None]:
    """Largest of the structural and product-functional lower bounds."""
    budget = settings.BUDGET if budget is None else budget
    seed = settings.SEED if seed is None else seed
    _ambient(u)
    if u.is_zero():
        return 0.0, StructuralWitness(tag="zero", value=0.0)
    return _lower_with(u, structural_bounds(u, budget, seed), budget, seed)


def _lower_with(
    u: AmpElem, structural: StructuralBound | None, budget: int, seed: int
) -> tuple[float, StructuralWitness | FunctionalWitness | None]:
    value, witness = product_functional_lower(u, budget, seed)
    if structural is not None and structural.lower >= value:
        return structural.lower, structural.to_witness()
    return value, witness


def pop_certificate(u: AmpElem, budget: int | None = None, seed: int | None = None) -> NormCertificate:
    """Certificate for ``||u||_pop``; exact whenever a structural reduction is."""
    budget = settings.BUDGET if budget is None else budget
    seed = settings.SEED if seed is None else seed
    _ambient(u)
    if u.is_zero():
        return NormCertificate.exact(0.0, CertificateMethod.CLOSED_FORM, seed)
    structural = structural_bounds(u, budget, seed)
    if (
        structural is not None
        and structural.upper is not None
        and structural.upper - structural.lower <= settings.CLOSED_FORM_TOL * max(1.0, structural.upper)
    ):
        witness = structural.to_witness()
        return NormCertificate(
            structural.lower,
            structural.upper,
            CertificateMethod.STRUCTURAL,
            seed,
            upper_witness=witness,
            lower_witness=witness,
        )

    lower, lower_witness = _lower_with(u, structural, budget, seed)
    upper, rep = pop_upper(u, budget, seed)
    upper_witness: PopRepresentation | StructuralWitness = rep
    if structural is not None and structural.upper is not None and structural.upper < upper:
        upper, upper_witness = structural.upper, structural.to_witness()
    if upper - lower > settings.OPTIMIZER_TOL * max(upper, 1e-300):
        logger.warning(f"pop certificate gap: [{lower:.6g}, {upper:.6g}]")
    return NormCertificate(
        lower,
        upper,
        CertificateMethod.DECOMPOSITION_SEARCH,
        seed,
        upper_witness=upper_witness,
        lower_witness=lower_witness,
    )


# ============ Witness Checks ============


def recheck_representation(
    rep: PopRepresentation, target: AmpElem, budget: int | None = None, seed: int | None = None
) -> tuple[float, float]:
    """Reconstruction error against ``target`` and the cost with fresh factor norms."""
    budget = settings.BUDGET if budget is None else budget
    seed = settings.SEED if seed is None else seed
    cost = 0.0
    for term in rep.terms:
        cost += (
            schatten_norm(term.a, math.inf)
            * _upper_norm(term.u, budget, seed)
            * _upper_norm(term.v, budget, seed)
            * schatten_norm(term.b, math.inf)
        )
    return rep.residual(target), cost


def recheck_single_diamond(
    rep: PopRepresentation, target: AmpElem, budget: int | None = None, seed: int | None = None
) -> tuple[float, float]:
    """Same as ``recheck_representation``, for one-term representations only.

    Raises:
        InvalidParameterError: If the representation has several terms.
    """
    if not rep.is_single_diamond:
        raise InvalidParameterError(
            "Expected a single-diamond representation", details={"terms": len(rep.terms)}
        )
    return recheck_representation(rep, target, budget, seed)


def pad_single_diamond(term: PopTerm, rng: np.random.Generator) -> PopTerm:
    """``a'' ((u ⊕ r) ⋄ (v ⊕ s)) b''`` with random r, s and random columns of ``a''``.

    The padding sits on positions of ``(u ⊕ r) ⋄ (v ⊕ s)`` that ``b''`` never
    reaches, so the represented element is unchanged.
    """
    du, dv = term.u.level, term.v.level
    ku, kv = int(rng.integers(1, 3)), int(rng.integers(1, 3))
    su, sv = du + ku, dv + kv
    pad_scale = float(np.exp(rng.standard_normal()))
    u_coords = np.zeros((term.u.dimension, su, su), dtype=np.complex128)
    u_coords[:, :du, :du] = term.u.coordinates()
    u_coords[:, du:, du:] = pad_scale * np.stack([random_cmatrix(ku, rng) for _ in range(term.u.dimension)])
    v_coords = np.zeros((term.v.dimension, sv, sv), dtype=np.complex128)
    v_coords[:, :dv, :dv] = term.v.coordinates()
    v_coords[:, dv:, dv:] = pad_scale * np.stack([random_cmatrix(kv, rng) for _ in range(term.v.dimension)])
    u2 = AmpElem.from_coordinates(u_coords, term.u.ambient)
    v2 = AmpElem.from_coordinates(v_coords, term.v.ambient)

    inner, wide = du * dv, su * sv
    kept = [p * sv + q for p in range(du) for q in range(dv)]
    top = max(term.level, wide)
    a2 = np.zeros((top, top), dtype=np.complex128)
    b2 = np.zeros((top, top), dtype=np.complex128)
    a2[: term.level, kept] = term.a[:, :inner]
    b2[kept, : term.level] = term.b[:inner, :]
    taken = set(kept)
    free = [k for k in range(wide) if k not in taken]
    a2[: term.level, free] = pad_scale * np.stack(
        [random_cmatrix(term.level, rng)[:, 0] for _ in free], axis=1
    )
    return PopTerm(a=a2, u=u2, v=v2, b=b2, u_norm=math.inf, v_norm=math.inf)


def _priced(term: PopTerm, budget: int, seed: int) -> float:
    return (
        schatten_norm(term.a, math.inf)
        * _upper_norm(term.u, budget, seed)
        * _upper_norm(term.v, budget, seed)
        * schatten_norm(term.b, math.inf)
    )


def sample_single_diamonds(
    rep: PopRepresentation,
    count: int,
    seed: int | None = None,
    spread: float = 0.5,
    budget: int | None = None,
) -> list[float]:
    """Costs of random single-diamond representations built from ``rep``.

    Even draws rewrite ``a (g u h ⋄ g' v h') b`` with random invertible
    matrices; odd draws pad both factors with random blocks and give ``a`` random
    columns on the padded positions. Every sample represents the same element,
    so each cost is an upper bound on its single-diamond norm.
    """
    budget = settings.BUDGET if budget is None else budget
    seed = settings.SEED if seed is None else seed
    if not rep.is_single_diamond:
        raise InvalidParameterError(
            "Sampling needs a single-diamond representation", details={"terms": len(rep.terms)}
        )
    term = rep.terms[0]
    du, dv = term.u.level, term.v.level
    rng = np.random.default_rng([seed, 2])
    costs = []
    for k in range(count):
        if k % 2:
            costs.append(_priced(pad_single_diamond(term, rng), budget, seed))
            continue
        pair_u = (_random_invertible(du, rng, spread), _random_invertible(du, rng, spread))
        pair_v = (_random_invertible(dv, rng, spread), _random_invertible(dv, rng, spread))
        u2 = module_action(pair_u[0], term.u, pair_u[1])
        v2 = module_action(pair_v[0], term.v, pair_v[1])
        a2 = term.a @ embed(diamond(np.linalg.inv(pair_u[0]), np.linalg.inv(pair_v[0])), term.level)
        b2 = embed(diamond(np.linalg.inv(pair_u[1]), np.linalg.inv(pair_v[1])), term.level) @ term.b
        costs.append(
            schatten_norm(a2, math.inf)
            * _upper_norm(u2, budget, seed)
            * _upper_norm(v2, budget, seed)
            * schatten_norm(b2, math.inf)
        )
    return costs


# ============ Independent Factorizations ============


def _lstsq(matrix: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    return np.linalg.lstsq(matrix, rhs, rcond=None)[0]


def solve_single_diamond(
    u: AmpElem,
    du: int,
    dv: int,
    rng: np.random.Generator,
    rounds: int = SOLVE_ROUNDS,
) -> PopRepresentation | None:
    """Fit ``u = a (x ⋄ y) b`` from a random start by alternating least squares.

    x and y have levels ``du`` and ``dv``; a and b are rectangular until they
    are padded to a square level at the end. Returns None when the fit does not
    reproduce u.
    """
    space = _ambient(u)
    d = u.level
    n_left, n_right = space.left.dimension, space.right.dimension
    target = _blocks(u)
    inner = du * dv
    x = np.stack([random_cmatrix(du, rng) for _ in range(n_left)])
    y = np.stack([random_cmatrix(dv, rng) for _ in range(n_right)])
    a = random_cmatrix(max(d, inner), rng)[:d, :inner]
    b = random_cmatrix(max(d, inner), rng)[:inner, :d]
    scale = max(1.0, float(np.abs(target).max(initial=0.0)))
    stacked_target = target.reshape(n_left * n_right * d, d)

    def products() -> np.ndarray:
        return np.einsum("ipr,jqs->ijpqrs", x, y).reshape(n_left, n_right, inner, inner)

    for _ in range(rounds):
        k = products()
        mids = np.einsum("ijmn,nl->ijml", k, b)
        rows = mids.transpose(2, 0, 1, 3).reshape(inner, -1).T
        a = _lstsq(rows, target.transpose(2, 0, 1, 3).reshape(d, -1).T).T
        lefts = np.einsum("km,ijmn->ijkn", a, k).reshape(-1, inner)
        b = _lstsq(lefts, stacked_target)
        a3, b3 = a.reshape(d, du, dv), b.reshape(du, dv, d)
        coeff = np.einsum("kpq,jqs,rsl->jklpr", a3, y, b3).reshape(-1, du * du)
        for i in range(n_left):
            x[i] = _lstsq(coeff, target[i].reshape(-1)).reshape(du, du)
        coeff = np.einsum("kpq,ipr,rsl->iklqs", a3, x, b3).reshape(-1, dv * dv)
        for j in range(n_right):
            y[j] = _lstsq(coeff, target[:, j].reshape(-1)).reshape(dv, dv)
        na, nb = float(np.linalg.norm(a, 2)), float(np.linalg.norm(b, 2))
        if na <= 0 or nb <= 0:
            return None
        a, b, x = a / na, b / nb, x * (na * nb)
        fitted = np.einsum("km,ijmn,nl->ijkl", a, products(), b)
        if float(np.abs(fitted - target).max()) <= SOLVE_TOL * scale:
            break

    top = max(d, inner)
    a_sq = np.zeros((top, top), dtype=np.complex128)
    b_sq = np.zeros((top, top), dtype=np.complex128)
    a_sq[:d, :inner], b_sq[:inner, :d] = a, b
    term = PopTerm(
        a=a_sq,
        u=AmpElem.from_coordinates(x, space.left),
        v=AmpElem.from_coordinates(y, space.right),
        b=b_sq,
        u_norm=math.inf,
        v_norm=math.inf,
    )
    rep = PopRepresentation(terms=(term,), origin="solved_factorization")
    if rep.residual(u) > SOLVE_TOL * scale:
        return None
    return rep


def solve_single_diamonds(
    u: AmpElem,
    du: int,
    dv: int,
    count: int,
    seed: int | None = None,
    budget: int | None = None,
) -> list[tuple[float, PopRepresentation]]:
    """Costs of independently fitted single-diamond representations of u.

    Each draw starts the least-squares fit from fresh random factors; draws that
    do not reproduce u are dropped, so the list may be shorter than ``count``.
    """
    budget = settings.BUDGET if budget is None else budget
    seed = settings.SEED if seed is None else seed
    _ambient(u)
    rng = np.random.default_rng([seed, 3])
    solved = []
    for _ in range(count):
        rep = solve_single_diamond(u, du, dv, rng)
        if rep is None:
            continue
        term = rep.terms[0]
        priced = PopTerm(
            a=term.a,
            u=term.u,
            v=term.v,
            b=term.b,
            u_norm=_upper_norm(term.u, budget, seed),
            v_norm=_upper_norm(term.v, budget, seed),
        )
        solved.append((priced.cost, PopRepresentation(terms=(priced,), origin=rep.origin)))
    logger.debug(f"single-diamond fits: {len(solved)}/{count} reproduced the element")
    return solved
