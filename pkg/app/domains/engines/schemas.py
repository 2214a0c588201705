"""Norm certificates and the witnesses that back their bounds."""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np
import numpy.typing as npt

from app.core.exceptions import DimensionError
from app.domains.amplification.schemas import AmpElem, encode_complex
from app.domains.matrix.schemas import CMatrix
from app.domains.matrix.services.linalg import embed, schatten_norm

logger = logging.getLogger(__name__)

SOUNDNESS_SLACK = 1e-9


class CertificateMethod(str, Enum):
    """Provenance of a certificate."""

    CLOSED_FORM = "closed_form"
    L1_IDENTITY = "l1_identity"
    INTERVAL_AGGREGATE = "interval_aggregate"
    DECOMPOSITION_SEARCH = "decomposition_search"
    STRUCTURAL = "structural"
    SUP_SEARCH = "sup_search"
    EXPLICIT_WITNESS = "explicit_witness"


def _dump(witness: Any) -> Any:
    if witness is None:
        return None
    if hasattr(witness, "to_dict"):
        return witness.to_dict()
    return witness


# ============ Witnesses ============


@dataclass(frozen=True, eq=False)
class Decomposition:
    """Finite decomposition ``M = Σ_k x_k ⊗ y_k`` with per-term costs.

    ``left`` holds the x_k as columns, ``right`` holds the y_k as rows.
    """

    left: npt.NDArray[np.complex128]
    right: npt.NDArray[np.complex128]
    costs: tuple[float, ...]
    origin: str = "search"

    @property
    def cost(self) -> float:
        return float(sum(self.costs))

    @property
    def length(self) -> int:
        return len(self.costs)

    def reconstruct(self) -> npt.NDArray[np.complex128]:
        return self.left @ self.right

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": "decomposition",
            "origin": self.origin,
            "cost": self.cost,
            "terms": [
                {"left": encode_complex(self.left[:, k]), "right": encode_complex(self.right[k]), "cost": c}
                for k, c in enumerate(self.costs)
            ],
        }


@dataclass(frozen=True, eq=False)
class FunctionalWitness:
    """Functionals whose pairing realises a lower bound."""

    tag: str
    value: float
    vectors: dict[str, npt.NDArray[np.complex128]] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": "functional",
            "tag": self.tag,
            "value": self.value,
            "vectors": {k: encode_complex(v) for k, v in self.vectors.items()},
        }


@dataclass(frozen=True, eq=False)
class StructuralWitness:
    """Lower or upper bound obtained by reduction to another evaluation."""

    tag: str
    value: float
    detail: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {"kind": "structural", "tag": self.tag, "value": self.value, "detail": self.detail}


@dataclass(frozen=True, eq=False)
class ElementWitness:
    """An element (or pair) at which a supremum was observed."""

    tag: str
    value: float
    elements: tuple[AmpElem, ...]

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": "element",
            "tag": self.tag,
            "value": self.value,
            "elements": [u.to_dict() for u in self.elements],
        }


# ============ Diamond Representations ============


@dataclass(frozen=True, eq=False)
class PopTerm:
    """One term ``a · (u ⋄ v) · b`` with the factor norms used for its cost."""

    a: CMatrix
    u: AmpElem
    v: AmpElem
    b: CMatrix
    u_norm: float
    v_norm: float

    def __post_init__(self) -> None:
        if self.a.shape != self.b.shape or self.a.shape[0] < self.u.level * self.v.level:
            raise DimensionError(
                "Outer matrices must share a level covering u ⋄ v",
                details={
                    "a": list(self.a.shape),
                    "b": list(self.b.shape),
                    "inner": self.u.level * self.v.level,
                },
            )

    @property
    def level(self) -> int:
        return int(self.a.shape[0])

    @property
    def cost(self) -> float:
        return (
            schatten_norm(self.a, math.inf)
            * self.u_norm
            * self.v_norm
            * schatten_norm(self.b, math.inf)
        )

    def coordinates(self, level: int | None = None) -> npt.NDArray[np.complex128]:
        """Coordinates of ``a (u ⋄ v) b`` on the tensor basis."""
        d = self.level
        uc, vc = self.u.coordinates(), self.v.coordinates()
        out = np.empty((uc.shape[0] * vc.shape[0], d, d), dtype=np.complex128)
        for i, ui in enumerate(uc):
            for j, vj in enumerate(vc):
                out[i * vc.shape[0] + j] = self.a @ embed(np.kron(ui, vj), d) @ self.b
        if level is not None and level != d:
            out = np.stack([embed(block, level) for block in out])
        return out

    def to_dict(self) -> dict[str, Any]:
        return {
            "a": encode_complex(self.a),
            "u": self.u.to_dict(),
            "v": self.v.to_dict(),
            "b": encode_complex(self.b),
            "u_norm": self.u_norm,
            "v_norm": self.v_norm,
            "cost": self.cost,
        }


@dataclass(frozen=True, eq=False)
class PopRepresentation:
    """Representation ``Σ_k a_k · (u_k ⋄ v_k) · b_k`` of a tensor element."""

    terms: tuple[PopTerm, ...]
    origin: str = "search"

    @property
    def cost(self) -> float:
        return float(sum(t.cost for t in self.terms))

    @property
    def level(self) -> int:
        return max((t.level for t in self.terms), default=1)

    @property
    def is_single_diamond(self) -> bool:
        return len(self.terms) == 1

    def coordinates(self, level: int | None = None) -> npt.NDArray[np.complex128]:
        d = self.level if level is None else level
        total: npt.NDArray[np.complex128] | None = None
        for term in self.terms:
            part = term.coordinates(d)
            total = part if total is None else total + part
        if total is None:
            raise DimensionError("Empty representation has no coordinates")
        return total

    def residual(self, target: AmpElem) -> float:
        """Largest entry of the reconstruction error against ``target``."""
        if not self.terms:
            return float(np.abs(target.coordinates()).max(initial=0.0))
        d = max(self.level, target.level)
        diff = self.coordinates(d) - target.coordinates(d)
        return float(np.abs(diff).max(initial=0.0))

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": "single_diamond" if self.is_single_diamond else "pop_representation",
            "origin": self.origin,
            "cost": self.cost,
            "terms": [t.to_dict() for t in self.terms],
        }


# ============ Certificates ============


@dataclass(frozen=True, eq=False)
class NormCertificate:
    """Sound interval ``[lower, upper]`` around a norm value.

    ``upper`` is None when no certified upper bound exists (sup-type norms).
    """

    lower: float
    upper: float | None
    method: CertificateMethod
    seed: int = 0
    upper_witness: Any = None
    lower_witness: Any = None

    def __post_init__(self) -> None:
        lower = max(0.0, float(self.lower))
        if self.upper is not None:
            upper = float(self.upper)
            excess = lower - upper
            if excess > SOUNDNESS_SLACK * max(1.0, upper):
                logger.warning(
                    f"{self.method.value} certificate bounds cross: lower={lower!r} upper={upper!r}"
                )
            elif excess > 0:
                lower = upper
            object.__setattr__(self, "upper", upper)
        object.__setattr__(self, "lower", lower)

    @classmethod
    def exact(cls, value: float, method: CertificateMethod, seed: int = 0, witness: Any = None) -> "NormCertificate":
        return cls(lower=value, upper=value, method=method, seed=seed, upper_witness=witness, lower_witness=witness)

    @property
    def crossed(self) -> bool:
        """Lower bound above the upper bound beyond round-off; the interval is unsound."""
        return self.upper is not None and self.lower > self.upper

    @property
    def gap(self) -> float:
        if self.upper is None:
            return math.inf
        return self.upper - self.lower

    def is_tight(self, tol: float = 1e-9) -> bool:
        return not self.crossed and self.gap <= tol * max(1.0, self.lower)

    @property
    def heuristic(self) -> bool:
        return not self.is_tight()

    @property
    def value(self) -> float:
        """Best single estimate: the upper bound when present, else the lower."""
        return self.lower if self.upper is None else self.upper

    def to_dict(self) -> dict[str, Any]:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "method": self.method.value,
            "seed": self.seed,
            "heuristic": self.heuristic,
            "crossed": self.crossed,
            "witness": {
                "upper": _dump(self.upper_witness),
                "lower": _dump(self.lower_witness),
            },
        }


def aggregate_lp(
    certificates: list[NormCertificate], weights: list[float], p: float
) -> tuple[float, float | None]:
    """Weighted ℓ_p aggregate of interval endpoints, monotone in each endpoint."""
    lows = np.array([c.lower for c in certificates])
    highs = [c.upper for c in certificates]
    w = np.array(weights, dtype=np.float64)
    if math.isinf(p):
        lower = float(lows.max(initial=0.0))
        upper = None if any(h is None for h in highs) else float(max(highs, default=0.0))  # type: ignore[type-var]
        return lower, upper
    lower = float(np.sum(w * lows**p) ** (1.0 / p))
    if any(h is None for h in highs):
        return lower, None
    upper = float(np.sum(w * np.array(highs, dtype=np.float64) ** p) ** (1.0 / p))
    return lower, upper
