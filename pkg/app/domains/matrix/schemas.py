"""Matrix types: complex levels and singular forms."""

from dataclasses import dataclass
from typing import Any

import numpy as np
import numpy.typing as npt

from app.core.exceptions import DimensionError

# A finite-rank operator supported on the first ``level`` basis vectors.
CMatrix = npt.NDArray[np.complex128]
CVector = npt.NDArray[np.complex128]


def as_cmatrix(entries: Any) -> CMatrix:
    """Coerce to a square complex array, rejecting anything else."""
    a = np.asarray(entries, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise DimensionError(
            "Matrix must be square with positive level",
            details={"shape": list(a.shape)},
        )
    return a


def as_cvector(entries: Any) -> CVector:
    """Coerce to a one-dimensional complex array."""
    x = np.asarray(entries, dtype=np.complex128)
    if x.ndim != 1:
        raise DimensionError(
            "Vector must be one-dimensional",
            details={"shape": list(x.shape)},
        )
    return x


def level(a: CMatrix) -> int:
    """Level d of a d x d matrix."""
    return int(a.shape[0])


@dataclass(frozen=True)
class SingularForm:
    """Factorization ``left @ diag(values) @ right`` of a matrix.

    ``values`` is non-increasing and nonnegative; both factors are unitary.
    """

    left: CMatrix
    values: npt.NDArray[np.float64]
    right: CMatrix

    def reconstruct(self) -> CMatrix:
        """Multiply the factors back together."""
        return (self.left * self.values) @ self.right

    def rank(self, tol: float = 1e-10) -> int:
        """Number of singular values above ``tol`` times the largest."""
        if self.values.size == 0 or self.values[0] <= 0:
            return 0
        return int(np.count_nonzero(self.values > tol * self.values[0]))
