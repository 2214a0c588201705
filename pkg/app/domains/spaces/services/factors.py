"""Classical normed spaces as factors for tensor and duality computations.

A factor evaluates its norm and its dual norm under the bilinear pairing
``f @ x``, and produces norming functionals and norming vectors. Factors whose
values come from a search report ``exact = False``; their ``dual_norm`` is
then an upper bound, which keeps lower bounds divided by it sound.
"""

import logging
import math
from abc import ABC, abstractmethod

import numpy as np
import numpy.typing as npt

from app.core.exceptions import DimensionError
from app.domains.matrix.schemas import CVector
from app.domains.matrix.services.linalg import (
    dual_exponent,
    lp_norm,
    schatten_norm,
    schatten_norming_dual,
)
from app.domains.spaces.schemas import (
    BaseSpace,
    BochnerSpace,
    DualSpace,
    LpSpace,
    TensorSpace,
    WeightedL1Space,
)

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]


def _phase(z: npt.ArrayLike) -> npt.NDArray[np.complex128]:
    z = np.asarray(z, dtype=np.complex128)
    mags = np.abs(z)
    out = np.zeros_like(z)
    nonzero = mags > 0
    out[nonzero] = z[nonzero] / mags[nonzero]
    return out


class Factor(ABC):
    """A finite-dimensional normed space with its dual."""

    exact: bool = True

    def __init__(self, dim: int) -> None:
        self.dim = dim

    @property
    def l1_weights(self) -> FloatArray | None:
        """Weights w when the norm is ``Σ w_i |x_i|``, else None."""
        return None

    @abstractmethod
    def norm(self, x: CVector) -> float:
        """Norm of x (an upper bound when not exact)."""

    @abstractmethod
    def dual_norm(self, f: CVector) -> float:
        """Dual norm of f (an upper bound when not exact)."""

    @abstractmethod
    def norming_functional(self, x: CVector) -> CVector:
        """f with dual norm at most 1 and ``f @ x`` as large as available."""

    @abstractmethod
    def norming_vector(self, f: CVector) -> CVector:
        """x with norm at most 1 and ``f @ x`` as large as available."""

    def norm_bounds(self, x: CVector) -> tuple[float, float]:
        value = self.norm(x)
        return value, value

    def check(self, x: CVector) -> CVector:
        x = np.asarray(x, dtype=np.complex128).ravel()
        if x.size != self.dim:
            raise DimensionError(
                "Vector does not match the space dimension",
                details={"expected": self.dim, "got": int(x.size)},
            )
        return x


class LpFactor(Factor):
    """Weighted ℓ_p: ``(Σ w_i |x_i|^p)^(1/p)``, max for p = inf."""

    def __init__(self, n: int, p: float, weights: npt.ArrayLike | None = None) -> None:
        super().__init__(n)
        self.p = float(p)
        self.weights = (
            np.ones(n) if weights is None else np.asarray(weights, dtype=np.float64)
        )
        self.q = dual_exponent(self.p)

    @property
    def l1_weights(self) -> FloatArray | None:
        if self.p == 1:
            return self.weights
        if self.dim == 1:
            return self.weights ** (1.0 / self.p) if not math.isinf(self.p) else np.ones(1)
        return None

    def norm(self, x: CVector) -> float:
        x = self.check(x)
        if math.isinf(self.p):
            return lp_norm(x, math.inf)
        return lp_norm(np.abs(x) * self.weights ** (1.0 / self.p), self.p)

    def dual_norm(self, f: CVector) -> float:
        f = self.check(f)
        if math.isinf(self.p):
            return float(np.abs(f).sum())
        # dual weights w^(1 - q), written as a scaling by w^(-1/p)
        return lp_norm(np.abs(f) * self.weights ** (-1.0 / self.p), self.q)

    def norming_functional(self, x: CVector) -> CVector:
        x = self.check(x)
        if not np.any(x):
            return np.zeros(self.dim, dtype=np.complex128)
        if self.p == 1:
            return self.weights * _phase(x).conj()
        if math.isinf(self.p):
            j = int(np.argmax(np.abs(x)))
            f = np.zeros(self.dim, dtype=np.complex128)
            f[j] = _phase(x[j]).conj()
            return f
        total = self.norm(x)
        return self.weights * _phase(x).conj() * (np.abs(x) / total) ** (self.p - 1)

    def norming_vector(self, f: CVector) -> CVector:
        f = self.check(f)
        if not np.any(f):
            return np.zeros(self.dim, dtype=np.complex128)
        if math.isinf(self.p):
            return _phase(f).conj()
        scale = self.weights ** (-1.0 / self.p)
        g = f * scale
        if self.p == 1:
            j = int(np.argmax(np.abs(g)))
            x = np.zeros(self.dim, dtype=np.complex128)
            x[j] = _phase(g[j]).conj() * scale[j]
            return x
        total = lp_norm(g, self.q)
        y = _phase(g).conj() * (np.abs(g) / total) ** (self.q - 1)
        return y * scale


class SchattenFactor(Factor):
    """K_p at level d on row-major flattened d x d matrices."""

    def __init__(self, d: int, p: float) -> None:
        super().__init__(d * d)
        self.d = d
        self.p = float(p)
        self.q = dual_exponent(self.p)

    def _square(self, x: CVector) -> npt.NDArray[np.complex128]:
        return self.check(x).reshape(self.d, self.d)

    def norm(self, x: CVector) -> float:
        return schatten_norm(self._square(x), self.p)

    def dual_norm(self, f: CVector) -> float:
        return schatten_norm(self._square(f), self.q)

    def norming_functional(self, x: CVector) -> CVector:
        return schatten_norming_dual(self._square(x), self.p).ravel()

    def norming_vector(self, f: CVector) -> CVector:
        return schatten_norming_dual(self._square(f), self.q).ravel()


class DualFactor(Factor):
    """Dual space: the roles of norm and dual norm swap."""

    def __init__(self, inner: Factor) -> None:
        super().__init__(inner.dim)
        self.inner = inner
        self.exact = inner.exact

    def norm(self, x: CVector) -> float:
        return self.inner.dual_norm(x)

    def dual_norm(self, f: CVector) -> float:
        return self.inner.norm(f)

    def norming_functional(self, x: CVector) -> CVector:
        return self.inner.norming_vector(x)

    def norming_vector(self, f: CVector) -> CVector:
        return self.inner.norming_functional(f)


class BochnerFactor(Factor):
    """L_p(X, E) over finite atoms, blocks of ``inner.dim`` coordinates."""

    def __init__(self, weights: npt.ArrayLike, inner: Factor, p: float) -> None:
        w = np.asarray(weights, dtype=np.float64)
        super().__init__(w.size * inner.dim)
        self.inner = inner
        self.outer = LpFactor(w.size, p, w)
        self.exact = inner.exact

    @property
    def l1_weights(self) -> FloatArray | None:
        inner_weights = self.inner.l1_weights
        if self.outer.p != 1 or inner_weights is None:
            return None
        return np.kron(self.outer.weights, inner_weights)

    def blocks(self, x: CVector) -> npt.NDArray[np.complex128]:
        return self.check(x).reshape(self.outer.dim, self.inner.dim)

    def norm(self, x: CVector) -> float:
        return self.outer.norm(np.array([self.inner.norm(b) for b in self.blocks(x)]))

    def dual_norm(self, f: CVector) -> float:
        return self.outer.dual_norm(
            np.array([self.inner.dual_norm(b) for b in self.blocks(f)])
        )

    def norming_functional(self, x: CVector) -> CVector:
        blocks = self.blocks(x)
        sizes = np.array([self.inner.norm(b) for b in blocks])
        alphas = self.outer.norming_functional(sizes).real
        return np.concatenate(
            [a * self.inner.norming_functional(b) for a, b in zip(alphas, blocks, strict=True)]
        )

    def norming_vector(self, f: CVector) -> CVector:
        blocks = self.blocks(f)
        sizes = np.array([self.inner.dual_norm(b) for b in blocks])
        betas = self.outer.norming_vector(sizes).real
        return np.concatenate(
            [b_ * self.inner.norming_vector(b) for b_, b in zip(betas, blocks, strict=True)]
        )


class TensorFactor(Factor):
    """Classical projective tensor product E ⊗_pr F.

    Exact when one side is ℓ1-type (the ℓ1(X) identity) or both sides are
    unweighted ℓ2 (nuclear norm); otherwise the norm comes from the
    decomposition search and is an upper bound.
    """

    def __init__(self, left: Factor, right: Factor, budget: int = 16, seed: int = 0) -> None:
        super().__init__(left.dim * right.dim)
        self.left = left
        self.right = right
        self.budget = budget
        self.seed = seed
        self.mode = self._mode()
        self.exact = self.mode != "search"

    def _mode(self) -> str:
        if self.left.l1_weights is not None and self.left.exact and self.right.exact:
            return "left_l1"
        if self.right.l1_weights is not None and self.left.exact and self.right.exact:
            return "right_l1"
        if all(
            isinstance(side, LpFactor) and side.p == 2 and np.allclose(side.weights, 1.0)
            for side in (self.left, self.right)
        ):
            return "hilbert"
        return "search"

    @property
    def l1_weights(self) -> FloatArray | None:
        lw, rw = self.left.l1_weights, self.right.l1_weights
        if lw is None or rw is None:
            return None
        return np.kron(lw, rw)

    def grid(self, x: CVector) -> npt.NDArray[np.complex128]:
        return self.check(x).reshape(self.left.dim, self.right.dim)

    def norm_bounds(self, x: CVector) -> tuple[float, float]:
        if self.exact:
            return super().norm_bounds(x)
        from app.domains.engines.services.projective import (
            proj_norm_lower,
            proj_norm_upper,
        )

        grid = self.grid(x)
        upper, _ = proj_norm_upper(grid, self.left, self.right, self.budget, self.seed)
        lower, _ = proj_norm_lower(grid, self.left, self.right, self.budget, self.seed)
        if lower > upper * (1.0 + 1e-9):
            logger.warning(f"tensor factor bounds cross: lower={lower!r} upper={upper!r}")
        return lower, upper

    def norm(self, x: CVector) -> float:
        grid = self.grid(x)
        if self.mode == "left_l1":
            w = self.left.l1_weights
            assert w is not None
            return float(sum(w[i] * self.right.norm(row) for i, row in enumerate(grid)))
        if self.mode == "right_l1":
            w = self.right.l1_weights
            assert w is not None
            return float(sum(w[j] * self.left.norm(col) for j, col in enumerate(grid.T)))
        if self.mode == "hilbert":
            return float(np.linalg.svd(grid, compute_uv=False).sum())
        return self.norm_bounds(x)[1]

    def dual_norm(self, f: CVector) -> float:
        grid = self.grid(f)
        if self.mode == "left_l1":
            w = self.left.l1_weights
            assert w is not None
            return max(self.right.dual_norm(row) / w[i] for i, row in enumerate(grid))
        if self.mode == "right_l1":
            w = self.right.l1_weights
            assert w is not None
            return max(self.left.dual_norm(col) / w[j] for j, col in enumerate(grid.T))
        if self.mode == "hilbert":
            return float(np.linalg.svd(grid, compute_uv=False)[0])
        # injective norm bounded by the row decomposition of f
        return float(
            sum(
                self.left.dual_norm(np.eye(self.left.dim)[i]) * self.right.dual_norm(row)
                for i, row in enumerate(grid)
            )
        )

    def norming_functional(self, x: CVector) -> CVector:
        grid = self.grid(x)
        if self.mode == "left_l1":
            w = self.left.l1_weights
            assert w is not None
            return np.concatenate(
                [w[i] * self.right.norming_functional(row) for i, row in enumerate(grid)]
            )
        if self.mode == "right_l1":
            w = self.right.l1_weights
            assert w is not None
            cols = [w[j] * self.left.norming_functional(col) for j, col in enumerate(grid.T)]
            return np.stack(cols, axis=1).ravel()
        if self.mode == "hilbert":
            u, _, vh = np.linalg.svd(grid, full_matrices=False)
            return (u.conj() @ vh.conj()).ravel()
        g, h = self._best_product(grid, functional=True)
        return np.kron(g, h)

    def norming_vector(self, f: CVector) -> CVector:
        grid = self.grid(f)
        if self.mode == "hilbert":
            u, _, vh = np.linalg.svd(grid, full_matrices=False)
            return np.kron(u[:, 0].conj(), vh[0].conj())
        x, y = self._best_product(grid, functional=False)
        return np.kron(x, y)

    def _best_product(
        self, grid: npt.NDArray[np.complex128], functional: bool
    ) -> tuple[CVector, CVector]:
        """Alternating search for a unit product pair maximizing the pairing."""
        left_pick = self.left.norming_functional if functional else self.left.norming_vector
        right_pick = (
            self.right.norming_functional if functional else self.right.norming_vector
        )
        u, _, _ = np.linalg.svd(grid, full_matrices=False)
        a = left_pick(u[:, 0])
        b = right_pick(a @ grid)
        for _ in range(self.budget):
            a = left_pick(grid @ b)
            b = right_pick(a @ grid)
        return a, b


def factor_for(space: BaseSpace, budget: int = 16, seed: int = 0) -> Factor:
    """Factor evaluating the norm of a base-space descriptor."""
    if isinstance(space, LpSpace):
        return LpFactor(space.n, space.p)
    if isinstance(space, WeightedL1Space):
        return LpFactor(space.dimension, 1.0, space.weights)
    if isinstance(space, DualSpace):
        return DualFactor(factor_for(space.space, budget, seed))
    if isinstance(space, BochnerSpace):
        return BochnerFactor(space.weights, factor_for(space.inner, budget, seed), space.p)
    if isinstance(space, TensorSpace):
        return TensorFactor(
            factor_for(space.left, budget, seed),
            factor_for(space.right, budget, seed),
            budget=budget,
            seed=seed,
        )
    raise DimensionError("Unknown base space", details={"kind": str(space)})
