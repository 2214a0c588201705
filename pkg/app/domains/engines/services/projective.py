"""Classical projective tensor norm: decomposition search and duality bounds.

A matrix ``grid`` of shape ``(nL, nR)`` stands for ``Σ_ij grid[i, j] e_i ⊗ f_j``.
Upper bounds come from explicit decompositions ``grid = Σ_k x_k ⊗ y_k``; lower
bounds from functionals on the left factor. The right factor only has to
report norm bounds, so amplified spaces can take its place.
"""

import logging
from typing import Protocol

import numpy as np
import numpy.typing as npt

from app.core.config import settings
from app.domains.engines.schemas import (
    CertificateMethod,
    Decomposition,
    FunctionalWitness,
    NormCertificate,
    StructuralWitness,
)
from app.domains.matrix.schemas import CVector
from app.domains.matrix.services.linalg import random_cvector
from app.domains.spaces.services.factors import Factor, LpFactor, SchattenFactor

logger = logging.getLogger(__name__)

Grid = npt.NDArray[np.complex128]

RESIDUAL_TOL = 1e-10
ALTERNATION_ROUNDS = 8


class NormOracle(Protocol):
    """Anything that brackets a norm on vectors of length ``dim``."""

    dim: int

    def norm_bounds(self, x: CVector) -> tuple[float, float]: ...


def _upper(side: NormOracle, x: CVector) -> float:
    return side.norm_bounds(x)[1]


def _lower(side: NormOracle, x: CVector) -> float:
    return side.norm_bounds(x)[0]


def _is_hilbert(side: NormOracle) -> bool:
    if isinstance(side, LpFactor):
        return side.p == 2 and bool(np.allclose(side.weights, 1.0))
    return isinstance(side, SchattenFactor) and side.p == 2


def _is_l1(side: NormOracle) -> bool:
    return isinstance(side, Factor) and side.exact and side.l1_weights is not None


# ============ Decompositions ============


def decomposition_costs(
    left_vecs: Grid, right_vecs: Grid, left: NormOracle, right: NormOracle
) -> tuple[float, ...]:
    """Per-term costs ``||x_k|| ||y_k||`` from the upper norm bounds."""
    costs = []
    for k in range(left_vecs.shape[1]):
        x, y = left_vecs[:, k], right_vecs[k]
        if not np.any(x) or not np.any(y):
            costs.append(0.0)
            continue
        costs.append(_upper(left, x) * _upper(right, y))
    return tuple(costs)


def _balance(left_vecs: Grid, right_vecs: Grid) -> tuple[Grid, Grid]:
    # geometric-mean balancing keeps pseudo-inverses well conditioned
    xs = np.linalg.norm(left_vecs, axis=0)
    ys = np.linalg.norm(right_vecs, axis=1)
    scale = np.ones_like(xs)
    nonzero = (xs > 0) & (ys > 0)
    scale[nonzero] = np.sqrt(ys[nonzero] / xs[nonzero])
    return left_vecs * scale, right_vecs / scale[:, None]


def _decomposition(
    left_vecs: Grid, right_vecs: Grid, left: NormOracle, right: NormOracle, origin: str
) -> Decomposition:
    keep = [
        k
        for k in range(left_vecs.shape[1])
        if np.any(left_vecs[:, k]) and np.any(right_vecs[k])
    ]
    x, y = _balance(left_vecs[:, keep], right_vecs[keep])
    return Decomposition(
        left=x, right=y, costs=decomposition_costs(x, y, left, right), origin=origin
    )


def row_decomposition(grid: Grid, left: NormOracle, right: NormOracle) -> Decomposition:
    """``Σ_i e_i ⊗ grid[i]``."""
    return _decomposition(np.eye(grid.shape[0], dtype=np.complex128), grid, left, right, "rows")


def column_decomposition(grid: Grid, left: NormOracle, right: NormOracle) -> Decomposition:
    """``Σ_j grid[:, j] ⊗ f_j``."""
    return _decomposition(grid, np.eye(grid.shape[1], dtype=np.complex128), left, right, "columns")


def svd_decomposition(grid: Grid, left: NormOracle, right: NormOracle) -> Decomposition:
    """Singular value decomposition, one term per nonzero singular value."""
    u, s, vh = np.linalg.svd(grid, full_matrices=False)
    rank = int(np.count_nonzero(s > settings.RANK_TOL * max(float(s[0]), 1e-300)))
    return _decomposition(u[:, :rank] * s[:rank], vh[:rank], left, right, "svd")


def _empty(grid: Grid) -> Decomposition:
    return Decomposition(
        left=np.zeros((grid.shape[0], 0), dtype=np.complex128),
        right=np.zeros((0, grid.shape[1]), dtype=np.complex128),
        costs=(),
        origin="zero",
    )


# ============ Local Search ============


def _complete_right(grid: Grid, x: Grid, y: Grid) -> Grid:
    pinv = np.linalg.pinv(x)
    return pinv @ grid + (np.eye(x.shape[1]) - pinv @ x) @ y


def _complete_left(grid: Grid, x: Grid, y: Grid) -> Grid:
    pinv = np.linalg.pinv(y)
    return grid @ pinv + x @ (np.eye(y.shape[0]) - y @ pinv)


def _local_search(
    grid: Grid,
    start: Decomposition,
    left: NormOracle,
    right: NormOracle,
    steps: int,
    rng: np.random.Generator,
    target: float,
) -> Decomposition:
    """Perturb one term at a time, re-solve the other side, keep improvements.

    Every iteration draws the same random quantities whether or not the move
    is accepted, so a longer run extends a shorter one.
    """
    x, y = start.left.copy(), start.right.copy()
    length = x.shape[1]
    if length == 0:
        return start
    costs = start.costs
    best = sum(costs)
    scale = float(np.abs(grid).max())
    step = 0.3
    accepted = 0
    for _ in range(steps):
        k = int(rng.integers(length))
        side = int(rng.integers(2))
        noise = random_cvector(x.shape[0] if side == 0 else y.shape[1], rng)
        if best <= target:
            continue
        if side == 0:
            x2 = x.copy()
            x2[:, k] += step * (np.linalg.norm(x[:, k]) + 1e-12) * noise / np.linalg.norm(noise)
            y2 = _complete_right(grid, x2, y)
        else:
            y2 = y.copy()
            y2[k] += step * (np.linalg.norm(y[k]) + 1e-12) * noise / np.linalg.norm(noise)
            x2 = _complete_left(grid, x, y2)
        if np.abs(x2 @ y2 - grid).max() > RESIDUAL_TOL * scale:
            step = max(step * 0.5, 1e-4)
            continue
        x2, y2 = _balance(x2, y2)
        costs2 = decomposition_costs(x2, y2, left, right)
        if sum(costs2) < best:
            x, y, costs, best = x2, y2, costs2, sum(costs2)
            accepted += 1
            step = min(step * 1.5, 2.0)
        else:
            step = max(step * 0.7, 1e-4)
    logger.debug(f"local search: {accepted}/{steps} moves accepted, cost {best:.6g}")
    return Decomposition(left=x, right=y, costs=costs, origin="local_search")


def _random_start(grid: Grid, length: int, rng: np.random.Generator) -> tuple[Grid, Grid]:
    n_left = grid.shape[0]
    raw = rng.standard_normal((n_left, length)) + 1j * rng.standard_normal((n_left, length))
    if length < n_left:
        u, s, _ = np.linalg.svd(grid, full_matrices=False)
        rank = max(1, int(np.count_nonzero(s > settings.RANK_TOL * float(s[0]))))
        raw = u[:, :rank] @ raw[:rank]
    return raw, np.linalg.pinv(raw) @ grid


def proj_norm_upper(
    grid: Grid,
    left: NormOracle,
    right: NormOracle,
    budget: int | None = None,
    seed: int | None = None,
    max_length: int | None = None,
    target: float | None = None,
) -> tuple[float, Decomposition]:
    """Cost of the best decomposition found; never below the projective norm.

    Structured candidates (rows, columns, singular vectors) come first; the
    best of them and ``RESTARTS`` random starts are then improved by local
    search for ``budget`` steps each. Restart k draws from the generator
    seeded with ``(seed, k)``, so the result is deterministic per seed and
    never increases with the budget.

    Args:
        grid: Coefficient matrix of shape ``(left.dim, right.dim)``.
        left: Norm oracle of the left factor.
        right: Norm oracle of the right factor.
        budget: Local search steps per restart.
        seed: Seed of the restart schedule.
        max_length: Longest decomposition tried by random restarts.
        target: Stop searching once the cost reaches this value.

    Returns:
        The best cost and its decomposition.
    """
    budget = settings.BUDGET if budget is None else budget
    seed = settings.SEED if seed is None else seed
    grid = np.asarray(grid, dtype=np.complex128)
    if not np.any(grid):
        return 0.0, _empty(grid)
    max_length = (
        settings.LENGTH_FACTOR * min(grid.shape) if max_length is None else max_length
    )
    stop = -np.inf if target is None else target * (1 + 1e-12)

    candidates = [
        row_decomposition(grid, left, right),
        column_decomposition(grid, left, right),
        svd_decomposition(grid, left, right),
    ]
    best = min(candidates, key=lambda d: d.cost)
    if best.cost <= stop:
        return best.cost, best

    results = [_local_search(grid, best, left, right, budget, np.random.default_rng([seed, 0]), stop)]
    rank = len(candidates[2].costs)
    length = max(rank, min(max_length, grid.shape[0]))
    for k in range(1, settings.RESTARTS + 1):
        rng = np.random.default_rng([seed, k])
        x, y = _random_start(grid, length, rng)
        start = _decomposition(x, y, left, right, "restart")
        if np.abs(start.reconstruct() - grid).max() > RESIDUAL_TOL * float(np.abs(grid).max()):
            continue
        results.append(_local_search(grid, start, left, right, budget, rng, stop))
    found = min(results, key=lambda d: d.cost)
    if found.cost < best.cost:
        best = found
    logger.debug(f"projective upper: {best.cost:.6g} ({best.origin}, length {best.length})")
    return best.cost, best


# ============ Lower Bounds ============


def proj_norm_lower(
    grid: Grid,
    left: Factor,
    right: NormOracle,
    budget: int | None = None,
    seed: int | None = None,
) -> tuple[float, FunctionalWitness | StructuralWitness]:
    """Lower bound ``sup_f ||(f ⊗ id) grid|| / ||f||*``; never above the norm.

    Exact through the ℓ1 identity when either factor is ℓ1-type. Otherwise
    the functional f is searched from singular-vector, basis and random
    seeds, alternating with norming functionals of the right factor when it
    is a classical space.
    """
    budget = settings.BUDGET if budget is None else budget
    seed = settings.SEED if seed is None else seed
    grid = np.asarray(grid, dtype=np.complex128)
    if not np.any(grid):
        return 0.0, StructuralWitness(tag="zero", value=0.0)

    if _is_l1(left):
        weights = left.l1_weights
        assert weights is not None
        value = float(
            sum(w * _lower(right, row) for w, row in zip(weights, grid, strict=True) if np.any(row))
        )
        return value, StructuralWitness(tag="l1_identity_rows", value=value)
    if _is_l1(right):
        weights = right.l1_weights  # type: ignore[attr-defined]
        assert weights is not None
        value = float(
            sum(w * left.norm_bounds(col)[0] for w, col in zip(weights, grid.T, strict=True) if np.any(col))
        )
        return value, StructuralWitness(tag="l1_identity_columns", value=value)

    def evaluate(f: CVector) -> float:
        dual = left.dual_norm(f)
        if dual <= 0:
            return 0.0
        return _lower(right, f @ grid) / dual

    u, s, _ = np.linalg.svd(grid, full_matrices=False)
    rank = int(np.count_nonzero(s > settings.RANK_TOL * float(s[0])))
    starts = [left.norming_functional(u[:, k]) for k in range(rank)]
    starts += list(np.eye(left.dim, dtype=np.complex128))
    rng = np.random.default_rng([seed, 0])
    starts += [left.norming_functional(random_cvector(left.dim, rng)) for _ in range(settings.RESTARTS)]

    best_value, best_f = 0.0, starts[0]
    rounds = min(budget, ALTERNATION_ROUNDS) if isinstance(right, Factor) else 0
    for f in starts:
        for _ in range(rounds + 1):
            value = evaluate(f)
            if value > best_value:
                best_value, best_f = value, f
            if not rounds:
                break
            g = right.norming_functional(f @ grid)  # type: ignore[attr-defined]
            c = grid @ g
            if not np.any(c):
                break
            f = left.norming_functional(c)
    logger.debug(f"projective lower: {best_value:.6g}")
    return best_value, FunctionalWitness(tag="functional_search", value=best_value, vectors={"f": best_f})


# ============ Certificates ============


def projective_certificate(
    grid: Grid,
    left: Factor,
    right: NormOracle,
    budget: int | None = None,
    seed: int | None = None,
) -> NormCertificate:
    """Interval for ``||grid||`` in ``left ⊗_pr right``.

    Exact through the ℓ1 identity or, for two Hilbert factors, the nuclear
    norm; otherwise the interval between the functional and decomposition
    searches.
    """
    budget = settings.BUDGET if budget is None else budget
    seed = settings.SEED if seed is None else seed
    grid = np.asarray(grid, dtype=np.complex128)
    if not np.any(grid):
        return NormCertificate.exact(0.0, CertificateMethod.CLOSED_FORM, seed)

    if _is_l1(left):
        lower, witness = proj_norm_lower(grid, left, right, budget, seed)
        dec = row_decomposition(grid, left, right)
        method = CertificateMethod.CLOSED_FORM if grid.shape[0] == 1 else CertificateMethod.L1_IDENTITY
        return NormCertificate(lower, dec.cost, method, seed, upper_witness=dec, lower_witness=witness)
    if _is_l1(right):
        lower, witness = proj_norm_lower(grid, left, right, budget, seed)
        dec = column_decomposition(grid, left, right)
        return NormCertificate(
            lower, dec.cost, CertificateMethod.L1_IDENTITY, seed, upper_witness=dec, lower_witness=witness
        )
    if _is_hilbert(left) and _is_hilbert(right):
        dec = svd_decomposition(grid, left, right)
        nuclear = float(np.linalg.svd(grid, compute_uv=False).sum())
        return NormCertificate(
            nuclear,
            dec.cost,
            CertificateMethod.CLOSED_FORM,
            seed,
            upper_witness=dec,
            lower_witness=StructuralWitness(tag="nuclear_norm", value=nuclear),
        )

    lower, lower_witness = proj_norm_lower(grid, left, right, budget, seed)
    upper, dec = proj_norm_upper(grid, left, right, budget, seed, target=lower)
    if upper - lower > settings.OPTIMIZER_TOL * max(upper, 1e-300):
        logger.warning(f"projective certificate gap: [{lower:.6g}, {upper:.6g}]")
    return NormCertificate(
        lower,
        upper,
        CertificateMethod.DECOMPOSITION_SEARCH,
        seed,
        upper_witness=dec,
        lower_witness=lower_witness,
    )


def recheck_decomposition(
    dec: Decomposition, grid: Grid, left: NormOracle, right: NormOracle
) -> tuple[float, float]:
    """Reconstruction error and freshly evaluated cost of a decomposition."""
    grid = np.asarray(grid, dtype=np.complex128)
    if dec.length == 0:
        return float(np.abs(grid).max(initial=0.0)), 0.0
    residual = float(np.abs(dec.reconstruct() - grid).max(initial=0.0))
    return residual, float(sum(decomposition_costs(dec.left, dec.right, left, right)))
