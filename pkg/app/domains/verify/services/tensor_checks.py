"""Checks on the diamond-projective tensor, operator spaces and certificates."""

import json
import math

import numpy as np

from app.domains.amplification.schemas import AmpElem, BioperatorDesc, BioperatorKind
from app.domains.amplification.services.actions import amp_diamond, amplify_operator
from app.domains.engines.schemas import (
    Decomposition,
    NormCertificate,
    PopRepresentation,
    PopTerm,
)
from app.domains.engines.services.cb import (
    cb_bilinear_estimate,
    cb_norm_estimate,
    cbspace_norm,
)
from app.domains.engines.services.currying import (
    canonical_bioperator,
    curry,
    functional,
    identity_operator,
    linearize,
    lp_tensor_bioperator,
    product_functional,
    uncurry,
)
from app.domains.engines.services.families import (
    projection_pair_diagonal,
    projection_pair_reference,
    vn_family,
    vn_reference,
    vn_split,
    vn_witness,
)
from app.domains.engines.services.pop import (
    op_norm_upper,
    pop_certificate,
    pop_lower,
    pop_upper,
    product_functional_lower,
    recheck_representation,
    recheck_single_diamond,
    sample_single_diamonds,
    solve_single_diamonds,
)
from app.domains.engines.services.projective import projective_certificate, recheck_decomposition
from app.domains.matrix.services.linalg import random_cmatrix, random_cvector, schatten_norm
from app.domains.spaces.schemas import (
    LpSpace,
    MinQuantization,
    PQSpace,
    SchattenQuantization,
    TensorSpace,
    cb_space,
    l1_sequence_space,
    lp_over_atoms,
    max_quantization,
    p_quantization,
    pop_tensor,
    pr_tensor,
    schatten_line,
)
from app.domains.spaces.services.factors import SchattenFactor, factor_for
from app.domains.spaces.services.norms import pq_norm
from app.domains.verify.schemas import CheckContext, CheckOutcome
from app.domains.verify.services.instances import (
    ATOM_WEIGHTS,
    exact_spaces,
    random_coords,
    random_element,
    rank_one_projection,
    relative,
    relative_gap,
    upper,
)

INF = math.inf


def _random_tensor(left: PQSpace, right: PQSpace, d: int, rng: np.random.Generator) -> AmpElem:
    ambient = pop_tensor(left, right)
    return AmpElem.from_coordinates(random_coords(ambient.dimension, d, rng), ambient)


def _tensor_samples(ctx: CheckContext) -> int:
    """Pop searches are the most expensive evaluations of the suite."""
    return max(1, min(ctx.sizes.samples, 4))


def _close(value: float, ref: float) -> float:
    return relative(abs(value - ref), ref)


# ============ Diamond Estimates ============


def diamond_cross_estimate(ctx: CheckContext) -> CheckOutcome:
    """``||u ⋄ v||_pop <= ||u|| ||v||``, including elementary tensors ``x ⊗ y``."""
    out = CheckOutcome()
    rng = ctx.rng()
    left = max_quantization(LpSpace(n=ctx.sizes.n, p=1.0))
    right = schatten_line(2.0)
    ambient = pop_tensor(left, right)
    pairs = [
        (AmpElem.elementary([[1.0]], random_cvector(left.dimension, rng), left),
         AmpElem.elementary([[1.0]], [1.0], right))
    ]
    pairs += [
        (random_element(left, ctx.sizes.d, rng), random_element(right, 2, rng))
        for _ in range(_tensor_samples(ctx))
    ]
    for u, v in pairs:
        nu = upper(pq_norm(u, ctx.budget, ctx.seed))
        nv = upper(pq_norm(v, ctx.budget, ctx.seed))
        level = u.level * v.level
        eye = np.eye(level, dtype=np.complex128)
        trivial = PopRepresentation((PopTerm(eye, u, v, eye, nu, nv),), origin="diamond")
        value, _ = pop_upper(amp_diamond(u, v, ambient), ctx.budget, ctx.seed, seeds=[trivial])
        out.record(relative(value - nu * nv, nu * nv), level=level)
    return out


def pop_below_op(ctx: CheckContext) -> CheckOutcome:
    out = CheckOutcome()
    rng = ctx.rng()
    left = max_quantization(LpSpace(n=ctx.sizes.n, p=1.0))
    elements = [vn_family(2)]
    elements += [_random_tensor(left, schatten_line(2.0), ctx.sizes.d, rng) for _ in range(_tensor_samples(ctx))]
    for u in elements:
        pop_value, _ = pop_upper(u, ctx.budget, ctx.seed)
        op_value, _ = op_norm_upper(u, ctx.budget, ctx.seed)
        out.record(relative(pop_value - op_value, op_value), pop=pop_value, op=op_value)
    return out


# ============ Structural Identifications ============


def p_convex_reduction(ctx: CheckContext) -> CheckOutcome:
    """``^(p)ℓ1 ⊗_pop F = ℓ1 ⊗_pr F`` when F is q-convex with q >= p."""
    out = CheckOutcome()
    rng = ctx.rng()
    base = LpSpace(n=ctx.sizes.n, p=1.0)
    for p, q in ((1.0, 2.0), (2.0, 2.0), (1.0, INF), (2.0, INF)):
        right = schatten_line(q)
        u = _random_tensor(p_quantization(base, p), right, ctx.sizes.d, rng)
        ref = pq_norm(u.with_ambient(pr_tensor(base, right)), ctx.budget, ctx.seed)
        value, _ = pop_upper(u, ctx.budget, ctx.seed)
        out.record(_close(value, upper(ref)), relative_gap(ref), p=p, q=q)
    return out


def scalar_factor_reduction(ctx: CheckContext) -> CheckOutcome:
    """``ℂ_max ⊗_pop F = F``."""
    out = CheckOutcome()
    rng = ctx.rng()
    line = schatten_line(1.0)
    for name, space in exact_spaces(ctx.sizes.n):
        u = random_element(space, ctx.sizes.d, rng)
        ref = pq_norm(u, ctx.budget, ctx.seed)
        tensor = AmpElem.from_coordinates(u.coordinates(), pop_tensor(line, space))
        cert = pop_certificate(tensor, ctx.budget, ctx.seed)
        out.record(
            max(_close(upper(cert), upper(ref)), _close(cert.lower, ref.lower)),
            max(relative_gap(cert), relative_gap(ref)),
            space=name,
        )
    return out


def schatten_lines_tensor(ctx: CheckContext) -> CheckOutcome:
    """``^(p)ℂ ⊗_pop ^(q)ℂ = ^(max(p,q))ℂ``."""
    out = CheckOutcome()
    rng = ctx.rng()
    for p, q in ((1.0, 2.0), (2.0, INF), (1.0, INF), (2.0, 2.0)):
        a = random_cmatrix(ctx.sizes.d, rng)
        u = AmpElem.elementary(a, [1.0], pop_tensor(schatten_line(p), schatten_line(q)))
        ref = schatten_norm(a, max(p, q))
        value, _ = pop_upper(u, ctx.budget, ctx.seed)
        lower, _ = pop_lower(u, ctx.budget, ctx.seed)
        out.record(max(value - ref, ref - lower) / max(1.0, ref), p=p, q=q, reference=ref)
    return out


def l2_square_upper(ctx: CheckContext) -> CheckOutcome:
    """``P(e1 ⊗ e1) + Q(e2 ⊗ e2)`` in the pop square of ``ℓ2(^(2)ℂ)`` has norm at most 2."""
    out = CheckOutcome()
    ref = projection_pair_reference().pop
    value, rep = pop_upper(projection_pair_diagonal(), ctx.budget, ctx.seed)
    out.record(value - ref, value=value, origin=rep.origin)
    return out


def common_schatten_tensor(ctx: CheckContext) -> CheckOutcome:
    """``^(p)E ⊗_pop ^(p)F = ^(p)(E ⊗_pr F)`` on ℓ1 factors."""
    out = CheckOutcome()
    rng = ctx.rng()
    base = LpSpace(n=ctx.sizes.n, p=1.0)
    for p in (1.0, 2.0):
        side = p_quantization(base, p)
        for _ in range(_tensor_samples(ctx)):
            u = _random_tensor(side, side, ctx.sizes.d, rng)
            target = SchattenQuantization(base=TensorSpace(left=base, right=base), p=p)
            ref = pq_norm(u.with_ambient(target), ctx.budget, ctx.seed)
            value, _ = pop_upper(u, ctx.budget, ctx.seed)
            out.record(_close(value, upper(ref)), relative_gap(ref), p=p)
    return out


def max_tensor_identity(ctx: CheckContext) -> CheckOutcome:
    """``^(1)E ⊗_pop ^(1)F = ^(1)(E ⊗_pr F)``."""
    out = CheckOutcome()
    rng = ctx.rng()
    base = LpSpace(n=ctx.sizes.n, p=1.0)
    side = max_quantization(base)
    target = max_quantization(TensorSpace(left=base, right=base))
    for _ in range(_tensor_samples(ctx)):
        u = _random_tensor(side, side, ctx.sizes.d, rng)
        cert = pop_certificate(u, ctx.budget, ctx.seed)
        ref = upper(pq_norm(u.with_ambient(target), ctx.budget, ctx.seed))
        out.record(max(_close(upper(cert), ref), _close(cert.lower, ref)), relative_gap(cert))
    return out


def lp_tensor_contractive(ctx: CheckContext) -> CheckOutcome:
    """``L_p(X, E) × L_p(Y, F) -> L_p(X × Y, E ⊗_pop F)`` has cb-norm one."""
    out = CheckOutcome()
    side = schatten_line(1.0)
    for p in (1.0, 2.0):
        rho = lp_tensor_bioperator(ATOM_WEIGHTS, side, ATOM_WEIGHTS, side, p)
        est = cb_bilinear_estimate(rho, 2, ctx.budget, ctx.seed)
        out.record(abs(est.lower - 1.0), p=p, profile=est.profile)
    return out


def l1_atom_regrouping(ctx: CheckContext) -> CheckOutcome:
    """``L1(X, E) ⊗_pop L1(Y, F) = L1(X × Y, E ⊗_pop F)`` over ``^(∞)ℂ`` atoms.

    The reference is the weighted sum ``Σ μ_s ν_t ||u_st||_∞`` taken straight from
    the coordinates. The searched representation must meet it from above, and
    the product-functional bound must stay below it.
    """
    out = CheckOutcome()
    rng = ctx.rng()
    inner = schatten_line(INF)
    side = lp_over_atoms(ATOM_WEIGHTS, inner, 1.0)
    weights = np.outer(ATOM_WEIGHTS, ATOM_WEIGHTS).ravel()
    regroup = linearize(lp_tensor_bioperator(ATOM_WEIGHTS, inner, ATOM_WEIGHTS, inner, 1.0))
    for _ in range(_tensor_samples(ctx)):
        u = _random_tensor(side, side, ctx.sizes.d, rng)
        blocks = zip(weights, u.coordinates(), strict=True)
        ref = float(sum(w * schatten_norm(block, INF) for w, block in blocks))
        value, _ = pop_upper(u, ctx.budget, ctx.seed)
        functional_lower, _ = product_functional_lower(u, ctx.budget, ctx.seed)
        image = pq_norm(amplify_operator(regroup, u), ctx.budget, ctx.seed)
        out.record(
            max(_close(value, ref), relative(functional_lower - ref, ref), _close(upper(image), ref)),
            relative_gap(image),
            reference=ref,
            upper=value,
            functional_lower=functional_lower,
        )
    return out


def l1_schatten_grothendieck(ctx: CheckContext) -> CheckOutcome:
    """``L1(X, ^(p)ℂ) ⊗_pop F = L1(X, F)`` for ``F = ^(p)ℂ``."""
    out = CheckOutcome()
    rng = ctx.rng()
    for p in (1.0, 2.0, INF):
        line = schatten_line(p)
        u = _random_tensor(lp_over_atoms(ATOM_WEIGHTS, line, 1.0), line, ctx.sizes.d, rng)
        ref = pq_norm(u.with_ambient(lp_over_atoms(ATOM_WEIGHTS, line, 1.0)), ctx.budget, ctx.seed)
        value, _ = pop_upper(u, ctx.budget, ctx.seed)
        out.record(_close(value, upper(ref)), relative_gap(ref), p=p)
    return out


# ============ Operator Spaces ============


def cb_space_underlying(ctx: CheckContext) -> CheckOutcome:
    """A functional placed at a rank-one projection keeps its cb-norm."""
    out = CheckOutcome()
    rng = ctx.rng()
    domain = max_quantization(LpSpace(n=ctx.sizes.n, p=1.0))
    codomain = schatten_line(INF)
    space = cb_space(domain, codomain)
    for _ in range(max(1, ctx.sizes.samples // 3)):
        f = random_cvector(domain.dimension, rng)
        phi = AmpElem.elementary(rank_one_projection(2, rng), f, space)
        value = cbspace_norm(phi, 2, ctx.budget, ctx.seed).lower
        ref = cb_norm_estimate(functional(f, domain), 2, ctx.budget, ctx.seed).lower
        out.record(_close(value, ref), value=value, reference=ref)
    return out


def cb_space_schatten(ctx: CheckContext) -> CheckOutcome:
    """``b · id`` in ``CB(^(p)ℂ, ^(q)ℂ)`` has norm ``||b||_q`` for q >= p."""
    out = CheckOutcome()
    rng = ctx.rng()
    for p, q in ((1.0, 2.0), (2.0, 2.0), (1.0, INF)):
        b = random_cmatrix(2, rng)
        phi = AmpElem.elementary(b, [1.0], cb_space(schatten_line(p), schatten_line(q)))
        value = cbspace_norm(phi, 2, ctx.budget, ctx.seed).lower
        ref = schatten_norm(b, q)
        out.record(_close(value, ref), p=p, q=q, value=value, reference=ref)
    return out


def currying_isometry(ctx: CheckContext) -> CheckOutcome:
    """Uncurrying inverts currying and both sides share the cb-norm."""
    out = CheckOutcome()
    rng = ctx.rng()
    n = ctx.sizes.n
    left = max_quantization(LpSpace(n=n, p=1.0))
    right = p_quantization(LpSpace(n=n, p=1.0), 2.0)
    coeffs = rng.standard_normal((2, n, n)) + 1j * rng.standard_normal((2, n, n))
    rho = BioperatorDesc(
        left=left,
        right=right,
        codomain=p_quantization(LpSpace(n=2, p=2.0), 2.0),
        coefficients=coeffs,
        kind=BioperatorKind.BILINEAR,
    )
    back = uncurry(curry(rho))
    out.record(float(np.abs(back.coefficients - rho.coefficients).max()), case="round_trip")

    f, g = random_cvector(n, rng), random_cvector(n, rng)
    pf = product_functional(f, g, left, right)
    bilinear = cb_bilinear_estimate(pf, 2, ctx.budget, ctx.seed).lower
    curried = cb_norm_estimate(curry(pf), 2, ctx.budget, ctx.seed).lower
    out.record(_close(curried, bilinear), case="product_functional", bilinear=bilinear, curried=curried)
    return out


def linearization_isometry(ctx: CheckContext) -> CheckOutcome:
    """Linearizing keeps the cb-norm: the canonical bioperator becomes the identity."""
    out = CheckOutcome()
    rng = ctx.rng()
    for p, q in ((1.0, 2.0), (2.0, 2.0)):
        op = linearize(canonical_bioperator(schatten_line(p), schatten_line(q)))
        out.record(float(np.abs(op.action - np.eye(op.action.shape[0])).max()), case="identity", p=p, q=q)
        est = cb_norm_estimate(op, 2, ctx.budget, ctx.seed)
        out.record(est.lower - 1.0, case="canonical", p=p, q=q)

    n = ctx.sizes.n
    side = max_quantization(LpSpace(n=n, p=1.0))
    pf = product_functional(random_cvector(n, rng), random_cvector(n, rng), side, side)
    bilinear = cb_bilinear_estimate(pf, 2, ctx.budget, ctx.seed).lower
    linear = cb_norm_estimate(linearize(pf), 2, ctx.budget, ctx.seed).lower
    out.record(_close(linear, bilinear), case="product_functional", bilinear=bilinear, linear=linear)
    return out


def identity_into_pop_bounded(ctx: CheckContext) -> CheckOutcome:
    """``id: ^(1)ℓ1 ⊗_pop ^(1)ℓ1 -> ^(1)(ℓ1 ⊗_pr ℓ1)`` has cb-norm one."""
    out = CheckOutcome()
    base = LpSpace(n=ctx.sizes.n, p=1.0)
    side = max_quantization(base)
    phi = identity_operator(pop_tensor(side, side), max_quantization(TensorSpace(left=base, right=base)))
    est = cb_norm_estimate(phi, 2, ctx.budget, ctx.seed)
    out.record(abs(est.lower - 1.0), profile=est.profile)
    return out


# ============ Pop Versus Op ============


def pop_op_gap(ctx: CheckContext) -> CheckOutcome:
    """``||V_n||_pop = n`` while every single diamond of ``V_n`` costs ``n²``."""
    out = CheckOutcome()
    for n in range(1, ctx.sizes.n + 1):
        v = vn_family(n)
        ref = vn_reference(n)
        square = ref.op or float(n * n)
        value, _ = pop_upper(v, ctx.budget, ctx.seed)
        lower, _ = pop_lower(v, ctx.budget, ctx.seed)
        op_value, _ = op_norm_upper(v, ctx.budget, ctx.seed)
        witness = vn_witness(n)
        residual, cost = recheck_single_diamond(witness, v, ctx.budget, ctx.seed)
        costs = sample_single_diamonds(witness, ctx.sizes.diamond_samples, ctx.seed, budget=ctx.budget)
        level = witness.terms[0].u.level
        solved = solve_single_diamonds(
            v, level, level, max(1, ctx.sizes.diamond_samples // 100), ctx.seed, ctx.budget
        )
        costs += [fitted for fitted, _ in solved]
        out.record(
            max(
                value - ref.pop,
                ref.pop - lower,
                abs(op_value - square),
                abs(cost - square),
                residual,
                square - min(costs),
            )
            / square,
            n=n,
            pop=value,
            op=op_value,
            sampled_min=min(costs),
            solved=len(solved),
        )
    return out


def op_triangle_failure(ctx: CheckContext) -> CheckOutcome:
    """``||V_m||_op + ||V_n - V_m||_op < ||V_n||_op``."""
    out = CheckOutcome()
    n, m = max(2, ctx.sizes.n), 1
    head, tail, whole = vn_split(n, m)
    head_value, _ = op_norm_upper(head, ctx.budget, ctx.seed)
    tail_value, _ = op_norm_upper(tail, ctx.budget, ctx.seed)
    _, whole_cost = recheck_single_diamond(vn_witness(n), whole, ctx.budget, ctx.seed)
    excess = max(head_value - m * m, tail_value - (n - m) ** 2)
    if head_value + tail_value >= n * n:
        excess = INF
    out.record(excess, n=n, m=m, head=head_value, tail=tail_value, whole=whole_cost)
    return out


# ============ Certificate Soundness ============


def _fingerprint(cert: NormCertificate) -> str:
    return json.dumps(cert.to_dict(), sort_keys=True, default=str)


def certificate_soundness(ctx: CheckContext) -> CheckOutcome:
    """Intervals are ordered, reproducible, backed by their witnesses and tighten with budget."""
    out = CheckOutcome()
    rng = ctx.rng()
    n, d = ctx.sizes.n, ctx.sizes.d
    sup_base = LpSpace(n=n, p=INF)
    searched = random_element(p_quantization(sup_base, 2.0), d, rng)
    smallest = random_element(MinQuantization(base=LpSpace(n=n, p=1.0)), d, rng)
    elements = {"schatten_search": searched, "min": smallest, "projection_pair_diagonal": projection_pair_diagonal(), "vn_2": vn_family(2)}

    for name, u in elements.items():
        cert = pq_norm(u, ctx.budget, ctx.seed)
        again = pq_norm(u, ctx.budget, ctx.seed)
        out.record(relative(cert.lower - upper(cert), upper(cert)), case=name, check="order")
        out.record(0.0 if _fingerprint(cert) == _fingerprint(again) else INF, case=name, check="determinism")

        witness = cert.upper_witness
        if isinstance(witness, PopRepresentation):
            residual, cost = recheck_representation(witness, u, ctx.budget, ctx.seed)
            out.record(max(residual, _close(cost, upper(cert))), case=name, check="witness")

    grid = searched.coordinates().reshape(n, d * d)
    left, right = factor_for(sup_base), SchattenFactor(d, 2.0)
    cert = projective_certificate(grid, left, right, ctx.budget, ctx.seed)
    if isinstance(cert.upper_witness, Decomposition):
        residual, cost = recheck_decomposition(cert.upper_witness, grid, left, right)
        out.record(max(residual, _close(cost, upper(cert))), case="schatten_search", check="decomposition")

    for name in ("schatten_search", "min"):
        u = elements[name]
        small = pq_norm(u, ctx.budget, ctx.seed)
        large = pq_norm(u, 2 * ctx.budget, ctx.seed)
        drift = max(upper(large) - upper(small), small.lower - large.lower)
        out.record(relative(drift, upper(small)), case=name, check="budget")
    return out


def l1_sequence_factorization(ctx: CheckContext) -> CheckOutcome:
    """``ℓ1`` over ``^(∞)ℂ`` sums operator norms; over ``^(1)ℂ`` it is ``^(1)ℓ1``.

    The two differ: ``||u||_{ℓ1} <= ||u||_{^(1)ℓ1}``, strictly once a coordinate has rank above one.
    """
    out = CheckOutcome()
    rng = ctx.rng()
    n, d = ctx.sizes.n, ctx.sizes.d
    seq = l1_sequence_space(n)
    trace_side = lp_over_atoms([1.0] * n, schatten_line(1.0), 1.0)
    maximal = max_quantization(LpSpace(n=n, p=1.0))
    for _ in range(ctx.sizes.samples):
        u = random_element(seq, d, rng)
        coords = u.coordinates()
        operator_sum = sum(schatten_norm(c, INF) for c in coords)
        trace_sum = sum(schatten_norm(c, 1.0) for c in coords)
        a = pq_norm(u, ctx.budget, ctx.seed)
        b = pq_norm(u.with_ambient(trace_side), ctx.budget, ctx.seed)
        c = pq_norm(u.with_ambient(maximal), ctx.budget, ctx.seed)
        out.record(_close(upper(a), operator_sum), relative_gap(a), case="operator_sum")
        out.record(
            max(_close(upper(b), trace_sum), _close(upper(b), upper(c))),
            max(relative_gap(b), relative_gap(c)),
            case="max_quantization",
        )
        out.record(relative(upper(a) - upper(c), upper(c)), case="order")

    at_one_atom = np.zeros((n, d, d), dtype=np.complex128)
    at_one_atom[0] = np.eye(d)
    eye = AmpElem.from_coordinates(at_one_atom, seq)
    one = upper(pq_norm(eye, ctx.budget, ctx.seed))
    trace = upper(pq_norm(eye.with_ambient(maximal), ctx.budget, ctx.seed))
    out.record(max(abs(one - 1.0), abs(trace - d)), case="identity_at_one_atom", sequence=one, maximal=trace)
    return out
