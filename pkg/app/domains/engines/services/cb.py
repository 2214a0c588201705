"""Completely bounded norms by supremum search over amplified unit elements.

Every reported value is a ratio ``lower(||φ_∞(u)||) / upper(||u||)`` at an
explicit element, so estimates are certified lower bounds. Level profiles are
cumulative: an element of level d embeds at every higher level.
"""

import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from typing import Any

import numpy as np
import numpy.typing as npt

from app.core.config import settings
from app.core.exceptions import DimensionError, DomainMismatchError, InvalidParameterError
from app.domains.amplification.schemas import AmpElem, BioperatorDesc, OperatorDesc
from app.domains.amplification.services.actions import amplify_bioperator, amplify_operator
from app.domains.engines.schemas import CertificateMethod, ElementWitness, NormCertificate
from app.domains.matrix.services.linalg import basis_vector, random_cvector
from app.domains.spaces.schemas import CBSpaceQuantization
from app.domains.spaces.services.factors import Factor
from app.domains.spaces.services.norms import nested_budget, pq_norm, underlying_factor

logger = logging.getLogger(__name__)

Coords = npt.NDArray[np.complex128]
Candidate = tuple[Coords, ...]

ALTERNATION_ROUNDS = 8
NESTED_LEVEL_CAP = 2


@dataclass(frozen=True, eq=False)
class SearchResult:
    value: float
    profile: dict[int, float]
    levels: dict[int, float]
    candidate: Candidate | None


@dataclass(frozen=True, eq=False)
class CBEstimate:
    """Certified lower bound on a cb-norm with its per-level profile.

    ``profile`` is the running maximum over levels; ``levels`` holds what the
    search found at each level on its own, without carrying lower levels up.
    """

    lower: float
    profile: dict[int, float] = field(default_factory=dict)
    witness: ElementWitness | None = None
    seed: int = 0
    levels: dict[int, float] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "lower": self.lower,
            "upper": None,
            "profile": {str(d): v for d, v in sorted(self.profile.items())},
            "levels": {str(d): v for d, v in sorted(self.levels.items())},
            "seed": self.seed,
            "witness": None if self.witness is None else self.witness.to_dict(),
        }


# ============ Search Core ============


def _noise(shape: tuple[int, ...], rng: np.random.Generator) -> Coords:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def _ratio(output: AmpElem, inputs: Sequence[AmpElem], budget: int, seed: int) -> float:
    denominator = 1.0
    for u in inputs:
        upper = pq_norm(u, budget, seed).upper
        if upper is None or upper <= 0:
            return 0.0
        denominator *= upper
    return pq_norm(output, budget, seed).lower / denominator


def _lift(vectors: Sequence[npt.ArrayLike], level: int) -> list[Coords]:
    """Level-one vectors as coordinate arrays ``I_level ⊗ x``."""
    eye = np.eye(level, dtype=np.complex128)
    return [np.asarray(x, dtype=np.complex128)[:, None, None] * eye[None] for x in vectors]


def _spread(vectors: Sequence[npt.ArrayLike], level: int) -> Coords | None:
    """``Σ_k E_kk x_k`` for the first ``level`` vectors."""
    if len(vectors) < level:
        return None
    out = np.zeros((len(vectors[0]), level, level), dtype=np.complex128)  # type: ignore[arg-type]
    for k in range(level):
        out[:, k, k] = vectors[k]
    return out


def _climb(
    evaluate: Callable[[Candidate], float],
    start: Candidate,
    value: float,
    steps: int,
    rng: np.random.Generator,
) -> tuple[Candidate, float]:
    best, best_value = start, value
    step = 0.5
    for _ in range(steps):
        noise = [_noise(c.shape, rng) for c in best]
        trial = tuple(
            c + step * max(float(np.abs(c).max(initial=0.0)), 1e-12) * z
            for c, z in zip(best, noise, strict=True)
        )
        trial_value = evaluate(trial)
        if trial_value > best_value:
            best, best_value = trial, trial_value
            step = min(step * 1.5, 2.0)
        else:
            step = max(step * 0.6, 1e-4)
    return best, best_value


def _sup_search(
    evaluate: Callable[[Candidate], float],
    seeds_at: Callable[[int, np.random.Generator], list[Candidate]],
    max_level: int,
    budget: int,
    seed: int,
) -> SearchResult:
    """Multistart hill climbing per level.

    Each level starts from its own seeds only, so the raw per-level values are
    independent estimates; the profile is their running maximum.
    """
    profile: dict[int, float] = {}
    levels: dict[int, float] = {}
    best_value, best_candidate = 0.0, None
    for level in range(1, max_level + 1):
        rng = np.random.default_rng([seed, level])
        seeds = seeds_at(level, rng)
        scored = [(evaluate(c), k, c) for k, c in enumerate(seeds)]
        if not scored:
            profile[level] = best_value
            levels[level] = 0.0
            continue
        value, _, start = max(scored, key=lambda t: (t[0], -t[1]))
        start, value = _climb(evaluate, start, value, budget, rng)
        logger.debug(f"cb search level {level}: {value:.6g}")
        if value > best_value:
            best_value, best_candidate = value, start
        profile[level] = best_value
        levels[level] = value
    return SearchResult(best_value, profile, levels, best_candidate)


def _check_level(max_level: int) -> None:
    if max_level < 1:
        raise InvalidParameterError("Level cap must be at least 1", details={"max_level": max_level})


def _random_unit(dim: int, rng: np.random.Generator) -> np.ndarray:
    x = random_cvector(dim, rng)
    return x / max(float(np.linalg.norm(x)), 1e-300)


# ============ Linear Operators ============


def _operator_vectors(
    action: np.ndarray, domain: Factor | None, codomain: Factor | None, rng: np.random.Generator
) -> list[np.ndarray]:
    """Level-one search vectors: basis, row-norming vectors and an alternation."""
    n = action.shape[1]
    vectors = [basis_vector(n, i) for i in range(n)]
    vectors += [_random_unit(n, rng) for _ in range(settings.RESTARTS)]
    if domain is None:
        return vectors
    vectors += [domain.norming_vector(row) for row in action if np.any(row)]
    if codomain is None:
        return vectors
    x = max(vectors, key=lambda v: codomain.norm(action @ v) / max(domain.norm(v), 1e-300))
    for _ in range(ALTERNATION_ROUNDS):
        y = action @ x
        if not np.any(y):
            break
        x = domain.norming_vector(codomain.norming_functional(y) @ action)
        vectors.append(x)
    return vectors


def cb_norm_estimate(
    phi: OperatorDesc,
    max_level: int | None = None,
    budget: int | None = None,
    seed: int | None = None,
) -> CBEstimate:
    """Lower bound on ``||φ||_cb`` from elements of levels ``1..max_level``."""
    max_level = settings.LEVEL_CAP if max_level is None else max_level
    budget = settings.BUDGET if budget is None else budget
    seed = settings.SEED if seed is None else seed
    _check_level(max_level)
    inner = nested_budget(budget)
    if not np.any(phi.action):
        zeros = {d: 0.0 for d in range(1, max_level + 1)}
        return CBEstimate(0.0, zeros, None, seed, dict(zeros))

    domain = underlying_factor(phi.domain, inner, seed)
    codomain = underlying_factor(phi.codomain, inner, seed)
    level_one = _operator_vectors(phi.action, domain, codomain, np.random.default_rng([seed, 0]))

    def to_elem(candidate: Candidate) -> AmpElem:
        return AmpElem.from_coordinates(candidate[0], phi.domain)

    def evaluate(candidate: Candidate) -> float:
        u = to_elem(candidate)
        return _ratio(amplify_operator(phi, u), [u], inner, seed)

    ranked = sorted(level_one, key=lambda x: -evaluate((_lift([x], 1)[0],)))

    def seeds_at(level: int, rng: np.random.Generator) -> list[Candidate]:
        if level == 1:
            return [(c,) for c in _lift(level_one, 1)]
        seeds = [(c,) for c in _lift(ranked[:2], level)]
        spread = _spread(ranked, level)
        if spread is not None:
            seeds.append((spread,))
        seeds += [(_noise((phi.domain.dimension, level, level), rng),) for _ in range(settings.RESTARTS)]
        return seeds

    found = _sup_search(evaluate, seeds_at, max_level, budget, seed)
    best = found.candidate
    witness = None if best is None else ElementWitness("cb_sup", found.value, (to_elem(best),))
    return CBEstimate(found.value, found.profile, witness, seed, found.levels)


# ============ Bioperators ============


def cb_bilinear_estimate(
    rho: BioperatorDesc,
    max_level: int | None = None,
    budget: int | None = None,
    seed: int | None = None,
) -> CBEstimate:
    """Lower bound on ``||ρ||_cb`` from pairs ``(u, v)`` of a common level."""
    max_level = settings.LEVEL_CAP if max_level is None else max_level
    budget = settings.BUDGET if budget is None else budget
    seed = settings.SEED if seed is None else seed
    _check_level(max_level)
    inner = nested_budget(budget)
    coeffs = rho.coefficients
    if not np.any(coeffs):
        zeros = {d: 0.0 for d in range(1, max_level + 1)}
        return CBEstimate(0.0, zeros, None, seed, dict(zeros))

    left = underlying_factor(rho.left, inner, seed)
    right = underlying_factor(rho.right, inner, seed)
    target = underlying_factor(rho.codomain, inner, seed)
    n_left, n_right = rho.left.dimension, rho.right.dimension
    rng0 = np.random.default_rng([seed, 0])

    pairs = [(basis_vector(n_left, i), basis_vector(n_right, j)) for i in range(n_left) for j in range(n_right)]
    pairs += [(_random_unit(n_left, rng0), _random_unit(n_right, rng0)) for _ in range(settings.RESTARTS)]
    if left is not None and right is not None and target is not None:
        for x, y in list(pairs):
            for _ in range(ALTERNATION_ROUNDS):
                out = rho.apply(x, y)
                if not np.any(out):
                    break
                f = target.norming_functional(out)
                x = left.norming_vector(np.einsum("g,gij,j->i", f, coeffs, y))
                y = right.norming_vector(np.einsum("g,gij,i->j", f, coeffs, x))
            pairs.append((x, y))

    def to_elems(candidate: Candidate) -> tuple[AmpElem, AmpElem]:
        return (
            AmpElem.from_coordinates(candidate[0], rho.left),
            AmpElem.from_coordinates(candidate[1], rho.right),
        )

    def evaluate(candidate: Candidate) -> float:
        u, v = to_elems(candidate)
        return _ratio(amplify_bioperator(rho, u, v), [u, v], inner, seed)

    def lifted(level: int, x: np.ndarray, y: np.ndarray) -> Candidate:
        return (_lift([x], level)[0], _lift([y], level)[0])

    ranked = sorted(pairs, key=lambda xy: -evaluate(lifted(1, *xy)))

    def seeds_at(level: int, rng: np.random.Generator) -> list[Candidate]:
        if level == 1:
            return [lifted(1, x, y) for x, y in pairs]
        seeds = [lifted(level, x, y) for x, y in ranked[:2]]
        spread_u = _spread([x for x, _ in ranked], level)
        spread_v = _spread([y for _, y in ranked], level)
        if spread_u is not None and spread_v is not None:
            seeds.append((spread_u, spread_v))
        seeds += [
            (_noise((n_left, level, level), rng), _noise((n_right, level, level), rng))
            for _ in range(settings.RESTARTS)
        ]
        return seeds

    found = _sup_search(evaluate, seeds_at, max_level, budget, seed)
    best = found.candidate
    witness = None if best is None else ElementWitness("cb_bilinear_sup", found.value, to_elems(best))
    return CBEstimate(found.value, found.profile, witness, seed, found.levels)


# ============ Operator-Valued Elements ============


def _cb_ambient(phi: AmpElem) -> CBSpaceQuantization:
    if not isinstance(phi.ambient, CBSpaceQuantization):
        raise DomainMismatchError(
            "Expected an element of a cb_space ambient", details={"kind": phi.ambient.kind}
        )
    return phi.ambient


def evaluation(u: AmpElem, phi: AmpElem) -> AmpElem:
    """``ℰ_∞(u, Φ)``: ``(a x, b φ) -> (a ⋄ b) φ(x)``.

    Raises:
        DimensionError: If u does not live in the operators' domain.
    """
    space = _cb_ambient(phi)
    if u.ambient != space.domain:
        raise DimensionError(
            "Element is not in the operator domain",
            details={"domain": space.domain.kind, "ambient": u.ambient.kind},
        )
    n_domain, n_codomain = space.domain.dimension, space.codomain.dimension
    ops = phi.coordinates().reshape(n_codomain, n_domain, phi.level, phi.level)
    coords = u.coordinates()
    out = np.einsum("iab,gicd->gacbd", coords, ops).reshape(
        n_codomain, u.level * phi.level, u.level * phi.level
    )
    return AmpElem.from_coordinates(out, space.codomain)


def cbspace_norm(
    phi: AmpElem,
    max_level: int | None = None,
    budget: int | None = None,
    seed: int | None = None,
) -> CBEstimate:
    """Lower bound on the CB-quantized norm ``sup ||ℰ_∞(u, Φ)||`` over unit u."""
    max_level = settings.LEVEL_CAP if max_level is None else max_level
    budget = settings.BUDGET if budget is None else budget
    seed = settings.SEED if seed is None else seed
    _check_level(max_level)
    space = _cb_ambient(phi)
    inner = nested_budget(budget)
    if phi.is_zero():
        zeros = {d: 0.0 for d in range(1, max_level + 1)}
        return CBEstimate(0.0, zeros, None, seed, dict(zeros))

    n_domain = space.domain.dimension
    rng0 = np.random.default_rng([seed, 0])
    if phi.level == 1:
        action = phi.coordinates()[:, 0, 0].reshape(space.codomain.dimension, n_domain)
        level_one = _operator_vectors(
            action,
            underlying_factor(space.domain, inner, seed),
            underlying_factor(space.codomain, inner, seed),
            rng0,
        )
    else:
        level_one = [basis_vector(n_domain, i) for i in range(n_domain)]
        level_one += [_random_unit(n_domain, rng0) for _ in range(settings.RESTARTS)]

    def to_elem(candidate: Candidate) -> AmpElem:
        return AmpElem.from_coordinates(candidate[0], space.domain)

    def evaluate(candidate: Candidate) -> float:
        u = to_elem(candidate)
        return _ratio(evaluation(u, phi), [u], inner, seed)

    ranked = sorted(level_one, key=lambda x: -evaluate((_lift([x], 1)[0],)))

    def seeds_at(level: int, rng: np.random.Generator) -> list[Candidate]:
        if level == 1:
            return [(c,) for c in _lift(level_one, 1)]
        seeds = [(c,) for c in _lift(ranked[:2], level)]
        spread = _spread(ranked, level)
        if spread is not None:
            seeds.append((spread,))
        seeds += [(_noise((n_domain, level, level), rng),) for _ in range(settings.RESTARTS)]
        return seeds

    found = _sup_search(evaluate, seeds_at, max_level, budget, seed)
    best = found.candidate
    witness = None if best is None else ElementWitness("cb_space_sup", found.value, (to_elem(best),))
    return CBEstimate(found.value, found.profile, witness, seed, found.levels)


def cbspace_certificate(
    phi: AmpElem, budget: int | None = None, seed: int | None = None
) -> NormCertificate:
    """Certificate with a searched lower bound and no upper bound."""
    budget = settings.BUDGET if budget is None else budget
    seed = settings.SEED if seed is None else seed
    estimate = cbspace_norm(
        phi,
        max_level=min(NESTED_LEVEL_CAP, settings.LEVEL_CAP),
        budget=nested_budget(budget),
        seed=seed,
    )
    return NormCertificate(
        estimate.lower,
        None,
        CertificateMethod.SUP_SEARCH,
        seed,
        lower_witness=estimate.witness,
    )


def profile_is_monotone(profile: dict[int, float], tol: float = 0.0) -> bool:
    levels = sorted(profile)
    return all(profile[b] >= profile[a] - tol for a, b in zip(levels, levels[1:]))


__all__ = [
    "CBEstimate",
    "cb_bilinear_estimate",
    "cb_norm_estimate",
    "cbspace_certificate",
    "cbspace_norm",
    "evaluation",
    "profile_is_monotone",
]
