"""Dual norms by ascent over the primal unit ball.

``sup {|f @ x| : ||x|| <= 1}`` is searched from the factor's own norming
vector, a small grid of phase vectors in low dimension and random starts,
then refined with Nelder-Mead on the real parametrization of x. Every value
is a ratio ``|f @ x| / ||x||`` at an explicit x, hence a lower bound.
"""

import itertools
import logging

import numpy as np
import numpy.typing as npt
from scipy.optimize import minimize

from app.core.config import settings
from app.domains.matrix.schemas import CVector
from app.domains.matrix.services.linalg import random_cvector
from app.domains.spaces.services.factors import Factor

logger = logging.getLogger(__name__)

GRID_DIMENSION = 3
GRID_ENTRIES = (0.0, 1.0, -1.0, 1j, -1j)


def _ratio(f: CVector, x: CVector, inner: Factor) -> float:
    size = inner.norm(x)
    if size <= 0:
        return 0.0
    return float(abs(f @ x)) / size


def _grid(dim: int) -> list[CVector]:
    if dim > GRID_DIMENSION:
        return []
    return [
        np.array(entries, dtype=np.complex128)
        for entries in itertools.product(GRID_ENTRIES, repeat=dim)
        if any(entries)
    ]


def _as_real(x: CVector) -> npt.NDArray[np.float64]:
    return np.concatenate([x.real, x.imag])


def _as_complex(z: npt.NDArray[np.float64]) -> CVector:
    half = z.size // 2
    return z[:half] + 1j * z[half:]


def maximize_pairing(
    f: CVector,
    inner: Factor,
    budget: int | None = None,
    seed: int | None = None,
) -> tuple[float, CVector]:
    """Lower bound on the dual norm of ``f`` with the vector attaining it."""
    budget = settings.BUDGET if budget is None else budget
    seed = settings.SEED if seed is None else seed
    f = inner.check(f)
    if not np.any(f):
        return 0.0, np.zeros(inner.dim, dtype=np.complex128)

    rng = np.random.default_rng([seed, 0])
    starts = [inner.norming_vector(f)] + _grid(inner.dim)
    starts += [random_cvector(inner.dim, rng) for _ in range(settings.RESTARTS)]
    best_x = max(starts, key=lambda x: _ratio(f, x, inner))
    best = _ratio(f, best_x, inner)

    result = minimize(
        lambda z: -_ratio(f, _as_complex(z), inner),
        _as_real(best_x),
        method="Nelder-Mead",
        options={"maxiter": 20 * budget, "xatol": 1e-12, "fatol": 1e-14},
    )
    refined = _as_complex(result.x)
    value = _ratio(f, refined, inner)
    if value > best:
        best, best_x = value, refined
    logger.debug(f"dual ascent: {best:.6g} after {result.nit} refinement steps")
    return best, best_x
