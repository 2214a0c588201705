"""Checks on single quantizations, matrix diamonds and cb estimates.

Each check returns a ``CheckOutcome`` whose margin is the largest violation
seen across its instances; instances are drawn from ``ctx.rng``.
"""

import math

import numpy as np

from app.core.config import settings
from app.domains.amplification.schemas import AmpElem, BioperatorDesc, BioperatorKind
from app.domains.amplification.services.actions import (
    amp_diamond,
    amplify_bioperator,
    amplify_operator,
    module_action,
    scalar_diamond,
)
from app.domains.engines.schemas import NormCertificate
from app.domains.engines.services.cb import cb_bilinear_estimate, cb_norm_estimate, profile_is_monotone
from app.domains.engines.services.currying import (
    canonical_bioperator,
    functional,
    identity_operator,
    inner_product_pairing,
    linearize,
    pointwise_bioperator,
    product_functional,
    schatten_tensor_bioperator,
)
from app.domains.matrix.services.linalg import (
    diagonal_projections,
    diamond,
    direct_pinch,
    lp_norm,
    pinch_roots_of_unity,
    random_cmatrix,
    random_cvector,
    random_unitary,
    schatten_norm,
)
from app.domains.spaces.schemas import (
    LpSpace,
    MinQuantization,
    complex_line,
    max_quantization,
    p_quantization,
    pop_tensor,
    schatten_line,
)
from app.domains.spaces.services.norms import base_norm, pq_norm
from app.domains.verify.schemas import CheckContext, CheckOutcome
from app.domains.verify.services.instances import (
    ATOM_WEIGHTS,
    EXPONENTS,
    check_levels,
    exact_spaces,
    orthogonal_pair,
    random_element,
    rank_one_contraction,
    rank_one_projection,
    relative,
    relative_gap,
    upper,
)

INF = math.inf


def _cert(u: AmpElem, ctx: CheckContext) -> NormCertificate:
    return pq_norm(u, ctx.budget, ctx.seed)


def _many(ctx: CheckContext) -> int:
    """Sample count for cheap closed-form checks."""
    return max(10, 5 * ctx.sizes.samples)


# ============ Quantization Axioms ============


def bimodule_contractivity(ctx: CheckContext) -> CheckOutcome:
    out = CheckOutcome()
    rng = ctx.rng()
    d = ctx.sizes.d
    for name, space in exact_spaces(ctx.sizes.n):
        zero = module_action(random_cmatrix(d, rng), AmpElem.zero(space, d), random_cmatrix(d, rng))
        out.record(upper(_cert(zero, ctx)), space=name)
        for _ in range(ctx.sizes.samples):
            u = random_element(space, d, rng)
            a, b = random_cmatrix(d, rng), random_cmatrix(d, rng)
            cu, cv = _cert(u, ctx), _cert(module_action(a, u, b), ctx)
            bound = schatten_norm(a, INF) * schatten_norm(b, INF) * upper(cu)
            out.record(relative(upper(cv) - bound, bound), max(relative_gap(cu), relative_gap(cv)), space=name)
    return out


def unitary_invariance(ctx: CheckContext) -> CheckOutcome:
    out = CheckOutcome()
    rng = ctx.rng()
    d = ctx.sizes.d
    for name, space in exact_spaces(ctx.sizes.n):
        for _ in range(ctx.sizes.samples):
            u = random_element(space, d, rng)
            rotated = module_action(random_unitary(d, rng), u, random_unitary(d, rng))
            cu, cr = _cert(u, ctx), _cert(rotated, ctx)
            out.record(
                relative(abs(upper(cr) - upper(cu)), upper(cu)),
                max(relative_gap(cu), relative_gap(cr)),
                space=name,
            )
    return out


def schatten_line_recovery(ctx: CheckContext) -> CheckOutcome:
    out = CheckOutcome()
    rng = ctx.rng()
    for p in EXPONENTS:
        for _ in range(ctx.sizes.samples):
            a = random_cmatrix(ctx.sizes.d, rng)
            cert = _cert(AmpElem.elementary(a, [1.0], schatten_line(p)), ctx)
            ref = schatten_norm(a, p)
            out.record(relative(max(abs(upper(cert) - ref), abs(cert.lower - ref)), ref), p=p)
    return out


def underlying_recovery(ctx: CheckContext) -> CheckOutcome:
    """``||P x|| = ||x||`` for a rank-one projection P."""
    out = CheckOutcome()
    rng = ctx.rng()
    for name, space in exact_spaces(ctx.sizes.n):
        for _ in range(ctx.sizes.samples):
            x = random_cvector(space.dimension, rng)
            cert = _cert(AmpElem.elementary(rank_one_projection(ctx.sizes.d, rng), x, space), ctx)
            ref = base_norm(x, space.base, ctx.budget, ctx.seed)
            out.record(relative(abs(upper(cert) - ref), ref), relative_gap(cert), space=name)
    return out


def elementary_tensor_cross_norm(ctx: CheckContext) -> CheckOutcome:
    """``||a x||_(p) = ||a||_p ||x||`` on ℓ1 and Hilbert bases."""
    out = CheckOutcome()
    rng = ctx.rng()
    n = ctx.sizes.n
    cases = [(LpSpace(n=n, p=1.0), p) for p in (1.0, 2.0, INF)] + [(LpSpace(n=n, p=2.0), 2.0)]
    for base, p in cases:
        for _ in range(ctx.sizes.samples):
            a, x = random_cmatrix(ctx.sizes.d, rng), random_cvector(n, rng)
            cert = _cert(AmpElem.elementary(a, x, p_quantization(base, p)), ctx)
            ref = schatten_norm(a, p) * base_norm(x, base)
            out.record(relative(max(abs(upper(cert) - ref), abs(cert.lower - ref)), ref), base_p=base.p, p=p)
    return out


def max_quantization_l1_additivity(ctx: CheckContext) -> CheckOutcome:
    """Norms add over orthogonally supported elements of ``^(1)ℓ1``."""
    out = CheckOutcome()
    rng = ctx.rng()
    space = max_quantization(LpSpace(n=ctx.sizes.n, p=1.0))
    for _ in range(ctx.sizes.samples):
        u, v = orthogonal_pair(space, ctx.sizes.d, rng)
        cu, cv, cs = _cert(u, ctx), _cert(v, ctx), _cert(u + v, ctx)
        total = upper(cu) + upper(cv)
        out.record(relative(abs(upper(cs) - total), total), max(map(relative_gap, (cu, cv, cs))))
    return out


def schatten_line_lp_axiom(ctx: CheckContext) -> CheckOutcome:
    """Orthogonal pieces of ``^(p)ℂ`` combine in ℓp."""
    out = CheckOutcome()
    rng = ctx.rng()
    for p in (1.0, 2.0, 4.0, INF):
        space = schatten_line(p)
        for _ in range(ctx.sizes.samples):
            u, v = orthogonal_pair(space, ctx.sizes.d, rng)
            pieces = [schatten_norm(w.coordinates()[0], p) for w in (u, v)]
            ref = lp_norm(pieces, p)
            out.record(relative(abs(upper(_cert(u + v, ctx)) - ref), ref), p=p)
    return out


def min_below_schatten(ctx: CheckContext) -> CheckOutcome:
    out = CheckOutcome()
    rng = ctx.rng()
    base = LpSpace(n=ctx.sizes.n, p=1.0)
    for _ in range(ctx.sizes.samples):
        u = random_element(MinQuantization(base=base), ctx.sizes.d, rng)
        smallest = _cert(u, ctx)
        for p in (1.0, 2.0, INF):
            other = _cert(u.with_ambient(p_quantization(base, p)), ctx)
            out.record(relative(smallest.lower - upper(other), upper(other)), p=p)
    return out


# ============ Matrix Diamonds ============


def pinching_roots_of_unity(ctx: CheckContext) -> CheckOutcome:
    out = CheckOutcome()
    rng = ctx.rng()
    for count in (2, 3, 4):
        projections = diagonal_projections(4, count)
        for _ in range(_many(ctx)):
            a = random_cmatrix(4, rng)
            averaged = pinch_roots_of_unity(a, projections, count)
            out.record(float(np.abs(averaged - direct_pinch(a, projections)).max()), blocks=count)
    return out


def diamond_schatten_multiplicativity(ctx: CheckContext) -> CheckOutcome:
    out = CheckOutcome()
    rng = ctx.rng()
    d = ctx.sizes.d
    for p in EXPONENTS:
        for _ in range(_many(ctx)):
            a, b = random_cmatrix(d, rng), random_cmatrix(d, rng)
            ref = schatten_norm(a, p) * schatten_norm(b, p)
            out.record(abs(schatten_norm(diamond(a, b), p) - ref) / ref, p=p)
    return out


def diamond_flip_symmetry(ctx: CheckContext) -> CheckOutcome:
    """``||a ⋄ u|| = ||u ⋄ a||``."""
    out = CheckOutcome()
    rng = ctx.rng()
    for name, space in exact_spaces(ctx.sizes.n):
        for _ in range(ctx.sizes.samples):
            u, a = random_element(space, ctx.sizes.d, rng), random_cmatrix(2, rng)
            left = _cert(scalar_diamond(a, u, "left"), ctx)
            right = _cert(scalar_diamond(a, u, "right"), ctx)
            out.record(
                relative(abs(upper(left) - upper(right)), upper(left)),
                max(relative_gap(left), relative_gap(right)),
                space=name,
            )
    return out


def rank_one_diamond_isometry(ctx: CheckContext) -> CheckOutcome:
    """``||Q ⋄ u|| = ||u||`` for a norm-one rank-one Q."""
    out = CheckOutcome()
    rng = ctx.rng()
    for name, space in exact_spaces(ctx.sizes.n):
        for _ in range(ctx.sizes.samples):
            u = random_element(space, ctx.sizes.d, rng)
            cu = _cert(u, ctx)
            cq = _cert(scalar_diamond(rank_one_contraction(2, rng), u), ctx)
            out.record(
                relative(abs(upper(cq) - upper(cu)), upper(cu)),
                max(relative_gap(cu), relative_gap(cq)),
                space=name,
            )
    return out


def schatten_diamond_bound(ctx: CheckContext) -> CheckOutcome:
    """``||a ⋄ u|| <= ||a||_1 ||u||``."""
    out = CheckOutcome()
    rng = ctx.rng()
    for name, space in exact_spaces(ctx.sizes.n):
        for _ in range(ctx.sizes.samples):
            u, a = random_element(space, ctx.sizes.d, rng), random_cmatrix(2, rng)
            cu, ca = _cert(u, ctx), _cert(scalar_diamond(a, u), ctx)
            bound = schatten_norm(a, 1.0) * upper(cu)
            out.record(relative(upper(ca) - bound, bound), max(relative_gap(cu), relative_gap(ca)), space=name)
    return out


def bimodule_diamond_compatibility(ctx: CheckContext) -> CheckOutcome:
    """``(a ⋄ b)(u ⋄ v)(c ⋄ d) = (a u c) ⋄ (b v d)`` coefficientwise."""
    out = CheckOutcome()
    rng = ctx.rng()
    d = ctx.sizes.d
    left = max_quantization(LpSpace(n=ctx.sizes.n, p=1.0))
    right = schatten_line(2.0)
    ambient = pop_tensor(left, right)
    for _ in range(ctx.sizes.samples):
        u, v = random_element(left, d, rng), random_element(right, 2, rng)
        a, c = random_cmatrix(d, rng), random_cmatrix(d, rng)
        b, e = random_cmatrix(2, rng), random_cmatrix(2, rng)
        lhs = module_action(diamond(a, b), amp_diamond(u, v, ambient), diamond(c, e)).coordinates()
        rhs = amp_diamond(module_action(a, u, c), module_action(b, v, e), ambient).coordinates()
        out.record(relative(float(np.abs(lhs - rhs).max()), float(np.abs(rhs).max())))
    return out


def linearization_compatibility(ctx: CheckContext) -> CheckOutcome:
    """``R_∞(u ⋄ v) = ρ_∞(u, v)`` for the linearization R of ρ."""
    out = CheckOutcome()
    rng = ctx.rng()
    d = ctx.sizes.d
    left = max_quantization(LpSpace(n=ctx.sizes.n, p=1.0))
    right = schatten_line(2.0)
    codomain = p_quantization(LpSpace(n=2, p=2.0), 2.0)
    for _ in range(ctx.sizes.samples):
        coeffs = rng.standard_normal((2, left.dimension, 1)) + 1j * rng.standard_normal((2, left.dimension, 1))
        rho = BioperatorDesc(
            left=left, right=right, codomain=codomain, coefficients=coeffs, kind=BioperatorKind.BILINEAR
        )
        u, v = random_element(left, d, rng), random_element(right, 2, rng)
        lhs = amplify_operator(linearize(rho), amp_diamond(u, v, pop_tensor(left, right))).coordinates()
        rhs = amplify_bioperator(rho, u, v).coordinates()
        out.record(relative(float(np.abs(lhs - rhs).max()), float(np.abs(rhs).max())))
    return out


# ============ Complete Boundedness ============


def functional_automatic_cb(ctx: CheckContext) -> CheckOutcome:
    """Identities ``^(p)ℂ -> ^(q)ℂ`` with q >= p and functionals on ℓ1 are cb with the plain norm."""
    out = CheckOutcome()
    rng = ctx.rng()
    levels = check_levels(ctx)
    for p, q in ((1.0, 2.0), (2.0, INF), (1.0, INF), (2.0, 2.0)):
        phi = identity_operator(schatten_line(p), schatten_line(q))
        est = cb_norm_estimate(phi, levels, ctx.budget, ctx.seed)
        out.record(abs(est.lower - 1.0), p=p, q=q, profile=est.profile)
    for p in (1.0, 2.0):
        space = p_quantization(LpSpace(n=ctx.sizes.n, p=1.0), p)
        f = random_cvector(ctx.sizes.n, rng)
        est = cb_norm_estimate(functional(f, space), levels, ctx.budget, ctx.seed)
        ref = float(np.abs(f).max())
        out.record(relative(abs(est.lower - ref), ref), p=p, reference=ref)
    return out


def no_cb_growth(ctx: CheckContext) -> CheckOutcome:
    """The identity ``^(2)ℂ -> ^(1)ℂ`` grows at least like √m at level m."""
    out = CheckOutcome()
    phi = identity_operator(schatten_line(2.0), schatten_line(1.0))
    est = cb_norm_estimate(phi, check_levels(ctx), ctx.budget, ctx.seed)
    for level, value in sorted(est.levels.items()):
        out.record(math.sqrt(level) - value, level=level, value=value)
    return out


def product_functional_cb(ctx: CheckContext) -> CheckOutcome:
    """``||f × g||_cb = ||f|| ||g||`` for functionals on ℓ1 quantizations."""
    out = CheckOutcome()
    rng = ctx.rng()
    n = ctx.sizes.n
    left = max_quantization(LpSpace(n=n, p=1.0))
    right = p_quantization(LpSpace(n=n, p=1.0), 2.0)
    for _ in range(max(1, ctx.sizes.samples // 3)):
        f, g = random_cvector(n, rng), random_cvector(n, rng)
        ref = float(np.abs(f).max() * np.abs(g).max())
        est = cb_bilinear_estimate(product_functional(f, g, left, right), 2, ctx.budget, ctx.seed)
        out.record(relative(abs(est.lower - ref), ref), reference=ref, value=est.lower)
    return out


def pointwise_bioperator_contractive(ctx: CheckContext) -> CheckOutcome:
    out = CheckOutcome()
    for p in (1.0, 2.0):
        rho = pointwise_bioperator(ATOM_WEIGHTS, p, schatten_line(p))
        est = cb_bilinear_estimate(rho, 2, ctx.budget, ctx.seed)
        out.record(abs(est.lower - 1.0), p=p, profile=est.profile)
    return out


def canonical_bioperator_contractive(ctx: CheckContext) -> CheckOutcome:
    out = CheckOutcome()
    for p, q in ((1.0, 2.0), (2.0, 2.0)):
        rho = canonical_bioperator(schatten_line(p), schatten_line(q))
        est = cb_bilinear_estimate(rho, 2, ctx.budget, ctx.seed)
        out.record(abs(est.lower - 1.0), p=p, q=q, profile=est.profile)
    return out


def schatten_bioperator_contractive(ctx: CheckContext) -> CheckOutcome:
    """``^(p)E × ^(q)F -> ^(max(p,q))(E ⊗_pr F)`` has cb-norm one."""
    out = CheckOutcome()
    left = LpSpace(n=ctx.sizes.n, p=1.0)
    for p, q in ((1.0, 2.0), (2.0, INF), (1.0, 1.0)):
        rho = schatten_tensor_bioperator(left, complex_line(), p, q)
        est = cb_bilinear_estimate(rho, 2, ctx.budget, ctx.seed)
        out.record(abs(est.lower - 1.0), p=p, q=q, profile=est.profile)
    return out


def inner_product_pairing_profile(ctx: CheckContext) -> CheckOutcome:
    """The pairing on ℓ2 is contractive under the max quantization; min profiles never decrease."""
    out = CheckOutcome()
    hilbert = LpSpace(n=ctx.sizes.n, p=2.0)
    levels = min(2, check_levels(ctx))
    est = cb_bilinear_estimate(inner_product_pairing(max_quantization(hilbert)), levels, ctx.budget, ctx.seed)
    out.record(est.lower - 1.0, quantization="max", profile=est.profile)
    pairing = inner_product_pairing(MinQuantization(base=hilbert))
    est = cb_bilinear_estimate(pairing, levels, ctx.budget, ctx.seed)
    monotone = profile_is_monotone(est.levels, settings.CLOSED_FORM_TOL)
    out.record(0.0 if monotone else INF, quantization="min", levels=est.levels)
    return out
