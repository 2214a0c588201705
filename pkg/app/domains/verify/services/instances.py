"""Random instances and the exactly evaluable spaces the checks sample from."""

import math

import numpy as np

from app.domains.amplification.schemas import AmpElem
from app.domains.engines.schemas import NormCertificate
from app.domains.matrix.schemas import CMatrix, CVector
from app.domains.matrix.services.linalg import random_cmatrix, random_cvector, random_unitary, rank_one
from app.domains.spaces.schemas import (
    LpSpace,
    PQSpace,
    l1_sequence_space,
    lp_over_atoms,
    max_quantization,
    p_quantization,
    schatten_line,
)
from app.domains.verify.schemas import CheckContext

EXPONENTS = (1.0, 1.5, 2.0, 4.0, math.inf)
ATOM_WEIGHTS = [1.0, 0.5]


def exact_spaces(n: int) -> list[tuple[str, PQSpace]]:
    """Quantizations whose certificates close (lower = upper) on every element."""
    return [
        ("schatten_line_1", schatten_line(1.0)),
        ("schatten_line_2", schatten_line(2.0)),
        ("schatten_line_inf", schatten_line(math.inf)),
        ("max_l1", max_quantization(LpSpace(n=n, p=1.0))),
        ("schatten2_l1", p_quantization(LpSpace(n=n, p=1.0), 2.0)),
        ("schatten2_l2", p_quantization(LpSpace(n=n, p=2.0), 2.0)),
        ("l1_sequence", l1_sequence_space(n)),
        ("l2_of_schatten2", lp_over_atoms(ATOM_WEIGHTS, schatten_line(2.0), 2.0)),
    ]


def random_coords(n: int, d: int, rng: np.random.Generator) -> np.ndarray:
    return np.stack([random_cmatrix(d, rng) for _ in range(n)])


def random_element(space: PQSpace, d: int, rng: np.random.Generator) -> AmpElem:
    return AmpElem.from_coordinates(random_coords(space.dimension, d, rng), space)


def unit_vector(n: int, rng: np.random.Generator) -> CVector:
    x = random_cvector(n, rng)
    return x / np.linalg.norm(x)


def rank_one_contraction(d: int, rng: np.random.Generator) -> CMatrix:
    """Random rank-one matrix of operator norm one."""
    return rank_one(unit_vector(d, rng), unit_vector(d, rng))


def rank_one_projection(d: int, rng: np.random.Generator) -> CMatrix:
    xi = unit_vector(d, rng)
    return rank_one(xi, xi)


def orthogonal_pair(
    space: PQSpace, d: int, rng: np.random.Generator
) -> tuple[AmpElem, AmpElem]:
    """Elements at level 2d with orthogonal supports, rotated by a random unitary."""
    top = 2 * d
    n = space.dimension
    rotation = random_unitary(top, rng)
    first = np.zeros((n, top, top), dtype=np.complex128)
    second = np.zeros((n, top, top), dtype=np.complex128)
    first[:, :d, :d] = random_coords(n, d, rng)
    second[:, d:, d:] = random_coords(n, d, rng)
    first = rotation @ first @ rotation.conj().T
    second = rotation @ second @ rotation.conj().T
    return AmpElem.from_coordinates(first, space), AmpElem.from_coordinates(second, space)


def upper(cert: NormCertificate) -> float:
    return math.inf if cert.upper is None else cert.upper


def relative(value: float, scale: float) -> float:
    return value / max(1.0, abs(scale))


def relative_gap(cert: NormCertificate) -> float:
    return relative(cert.gap, upper(cert))


def check_levels(ctx: CheckContext, cap: int = 4) -> int:
    """Level cap of sup searches: one above the instance level, within the configured cap."""
    return max(1, min(ctx.sizes.d + 1, ctx.level_cap, cap))
