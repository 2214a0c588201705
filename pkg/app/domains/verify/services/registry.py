"""Registered property checks.

Each entry names a check, states the property it verifies and fixes its
acceptance tolerance from the current settings.
"""

from app.core.config import settings
from app.core.exceptions import InvalidParameterError
from app.domains.verify.schemas import PropertyCheck
from app.domains.verify.services import quantization_checks as qc
from app.domains.verify.services import tensor_checks as tc

EXACT_TOL = 1e-6


def build_registry() -> dict[str, PropertyCheck]:
    closed = settings.CLOSED_FORM_TOL
    optimizer = settings.OPTIMIZER_TOL
    saturation = settings.SATURATION_TOL
    checks = [
        # ---- quantizations ----
        PropertyCheck(
            "bimodule_contractivity",
            "||a u b|| <= ||a|| ||u|| ||b|| on every quantization",
            closed,
            qc.bimodule_contractivity,
        ),
        PropertyCheck("unitary_invariance", "||S u T|| = ||u|| for unitaries S, T", closed, qc.unitary_invariance),
        PropertyCheck(
            "schatten_line_recovery",
            "the p-quantization of C carries the Schatten p-norm",
            closed,
            qc.schatten_line_recovery,
        ),
        PropertyCheck(
            "underlying_recovery",
            "a rank-one projection times x has the norm of x",
            closed,
            qc.underlying_recovery,
        ),
        PropertyCheck(
            "elementary_tensor_cross_norm",
            "||a x|| = ||a||_p ||x|| in p-quantizations of l1 and l2",
            closed,
            qc.elementary_tensor_cross_norm,
        ),
        PropertyCheck(
            "max_quantization_l1_additivity",
            "norms add over orthogonal supports in the max quantization of l1",
            closed,
            qc.max_quantization_l1_additivity,
        ),
        PropertyCheck(
            "schatten_line_lp_axiom",
            "orthogonal pieces of the p-quantized line combine in lp",
            closed,
            qc.schatten_line_lp_axiom,
        ),
        PropertyCheck(
            "min_below_schatten",
            "the minimal quantization lies below every p-quantization",
            closed,
            qc.min_below_schatten,
        ),
        # ---- matrix diamonds ----
        PropertyCheck(
            "pinching_roots_of_unity",
            "averaging over roots-of-unity unitaries equals block-diagonal pinching",
            closed,
            qc.pinching_roots_of_unity,
        ),
        PropertyCheck(
            "diamond_schatten_multiplicativity",
            "||a diamond b||_p = ||a||_p ||b||_p",
            closed,
            qc.diamond_schatten_multiplicativity,
        ),
        PropertyCheck(
            "diamond_flip_symmetry", "||a diamond u|| = ||u diamond a||", closed, qc.diamond_flip_symmetry
        ),
        PropertyCheck(
            "rank_one_diamond_isometry",
            "diamond with a norm-one rank-one matrix is isometric",
            closed,
            qc.rank_one_diamond_isometry,
        ),
        PropertyCheck(
            "schatten_diamond_bound",
            "||a diamond u|| <= ||a||_1 ||u||",
            closed,
            qc.schatten_diamond_bound,
        ),
        PropertyCheck(
            "bimodule_diamond_compatibility",
            "(a diamond b)(u diamond v)(c diamond d) = (a u c) diamond (b v d)",
            closed,
            qc.bimodule_diamond_compatibility,
        ),
        PropertyCheck(
            "linearization_compatibility",
            "the linearization applied to u diamond v equals the amplified bioperator",
            closed,
            qc.linearization_compatibility,
        ),
        # ---- complete boundedness ----
        PropertyCheck(
            "functional_automatic_cb",
            "functionals and identities into larger exponents are cb with their plain norm",
            EXACT_TOL,
            qc.functional_automatic_cb,
        ),
        PropertyCheck(
            "no_cb_growth",
            "the identity from the 2- to the 1-quantized line reaches sqrt(m) at level m",
            EXACT_TOL,
            qc.no_cb_growth,
        ),
        PropertyCheck(
            "product_functional_cb",
            "a product of functionals has cb-norm ||f|| ||g||",
            saturation,
            qc.product_functional_cb,
        ),
        PropertyCheck(
            "pointwise_bioperator_contractive",
            "pointwise multiplication into a Bochner quantization has cb-norm one",
            saturation,
            qc.pointwise_bioperator_contractive,
        ),
        PropertyCheck(
            "canonical_bioperator_contractive",
            "the canonical bioperator into the diamond-projective tensor has cb-norm one",
            saturation,
            qc.canonical_bioperator_contractive,
        ),
        PropertyCheck(
            "schatten_bioperator_contractive",
            "p- times q-quantized factors map contractively into the max(p,q)-quantized tensor",
            saturation,
            qc.schatten_bioperator_contractive,
        ),
        PropertyCheck(
            "inner_product_pairing_profile",
            "the l2 pairing is contractive under max and has a non-decreasing profile under min",
            saturation,
            qc.inner_product_pairing_profile,
        ),
        # ---- diamond-projective tensor ----
        PropertyCheck(
            "diamond_cross_estimate",
            "||u diamond v||_pop <= ||u|| ||v||",
            EXACT_TOL,
            tc.diamond_cross_estimate,
        ),
        PropertyCheck("pop_below_op", "the pop-norm never exceeds the op-norm", closed, tc.pop_below_op),
        PropertyCheck(
            "p_convex_reduction",
            "the p-quantized l1 tensored with a p-convex space is the projective tensor",
            optimizer,
            tc.p_convex_reduction,
        ),
        PropertyCheck(
            "scalar_factor_reduction",
            "tensoring with the max-quantized line is isometric",
            optimizer,
            tc.scalar_factor_reduction,
        ),
        PropertyCheck(
            "schatten_lines_tensor",
            "the p- and q-quantized lines tensor to the max(p,q)-quantized line",
            EXACT_TOL,
            tc.schatten_lines_tensor,
        ),
        PropertyCheck(
            "l2_square_upper",
            "two orthogonal diagonal terms in the square of l2 over the 2-quantized line cost at most 2",
            EXACT_TOL,
            tc.l2_square_upper,
        ),
        PropertyCheck(
            "common_schatten_tensor",
            "p-quantized factors tensor to the p-quantized projective tensor",
            optimizer,
            tc.common_schatten_tensor,
        ),
        PropertyCheck(
            "max_tensor_identity",
            "max-quantized factors tensor to the max-quantized projective tensor",
            optimizer,
            tc.max_tensor_identity,
        ),
        PropertyCheck(
            "lp_tensor_contractive",
            "the Bochner tensor bioperator has cb-norm one",
            saturation,
            tc.lp_tensor_contractive,
        ),
        PropertyCheck(
            "l1_atom_regrouping",
            "tensors of L1 quantizations regroup isometrically over product atoms",
            optimizer,
            tc.l1_atom_regrouping,
        ),
        PropertyCheck(
            "l1_schatten_grothendieck",
            "L1 over the p-quantized line tensored with that line is L1 of it",
            optimizer,
            tc.l1_schatten_grothendieck,
        ),
        PropertyCheck(
            "identity_into_pop_bounded",
            "the identity from the pop tensor of max quantizations to the max-quantized tensor is isometric",
            saturation,
            tc.identity_into_pop_bounded,
        ),
        # ---- operator spaces ----
        PropertyCheck(
            "cb_space_underlying",
            "a functional at a rank-one projection keeps its cb-norm",
            saturation,
            tc.cb_space_underlying,
        ),
        PropertyCheck(
            "cb_space_schatten",
            "b times the identity between quantized lines has norm ||b||_q",
            saturation,
            tc.cb_space_schatten,
        ),
        PropertyCheck(
            "currying_isometry",
            "currying is invertible and preserves the cb-norm",
            saturation,
            tc.currying_isometry,
        ),
        PropertyCheck(
            "linearization_isometry",
            "linearizing a bioperator preserves the cb-norm",
            saturation,
            tc.linearization_isometry,
        ),
        # ---- pop versus op ----
        PropertyCheck(
            "pop_op_gap",
            "the diagonal family has pop-norm n and single-diamond norm n squared",
            EXACT_TOL,
            tc.pop_op_gap,
        ),
        PropertyCheck(
            "op_triangle_failure",
            "the single-diamond norm breaks the triangle inequality on the diagonal family",
            EXACT_TOL,
            tc.op_triangle_failure,
        ),
        # ---- certificates ----
        PropertyCheck(
            "certificate_soundness",
            "certificates are ordered, reproducible, witnessed and monotone in the budget",
            closed,
            tc.certificate_soundness,
        ),
        PropertyCheck(
            "l1_sequence_factorization",
            "l1 over the operator-norm line sums operator norms; "
            "over the trace-norm line it is the max quantization of l1",
            closed,
            tc.l1_sequence_factorization,
        ),
    ]
    return {check.name: check for check in sorted(checks, key=lambda c: c.name)}


def resolve(name: str, registry: dict[str, PropertyCheck]) -> PropertyCheck:
    """Exact name, or the single check whose name starts with ``name``.

    Raises:
        InvalidParameterError: If no check or several checks match.
    """
    if name in registry:
        return registry[name]
    matches = [check for key, check in registry.items() if key.startswith(name)]
    if len(matches) != 1:
        raise InvalidParameterError(
            "Unknown or ambiguous check name",
            details={"name": name, "matches": [c.name for c in matches], "available": sorted(registry)},
        )
    return matches[0]
