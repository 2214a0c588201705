"""Property checks, their outcomes and the suite report."""

import math
from collections.abc import Callable
from dataclasses import dataclass, field, fields, replace
from enum import Enum
from typing import Any

import numpy as np

from app.core.exceptions import InvalidParameterError


class Verdict(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"


class Profile(str, Enum):
    """Instance sizes used by a suite run."""

    QUICK = "quick"
    FULL = "full"


@dataclass(frozen=True)
class CheckSizes:
    """Level, dimension and sample counts handed to every check."""

    d: int
    n: int
    samples: int
    diamond_samples: int

    @classmethod
    def for_profile(cls, profile: Profile) -> "CheckSizes":
        if profile == Profile.FULL:
            return cls(d=3, n=3, samples=20, diamond_samples=10_000)
        return cls(d=2, n=2, samples=3, diamond_samples=200)

    def override(self, **changes: int) -> "CheckSizes":
        """Copy with some fields replaced.

        Raises:
            InvalidParameterError: On an unknown field or a value below one.
        """
        known = {f.name for f in fields(self)}
        unknown = sorted(set(changes) - known)
        if unknown:
            raise InvalidParameterError(
                "Unknown check size", details={"sizes": unknown, "known": sorted(known)}
            )
        small = {k: v for k, v in changes.items() if v < 1}
        if small:
            raise InvalidParameterError("Check sizes must be at least 1", details=small)
        return replace(self, **changes)

    def to_dict(self) -> dict[str, int]:
        return {"d": self.d, "n": self.n, "samples": self.samples, "diamond_samples": self.diamond_samples}


@dataclass(frozen=True)
class CheckContext:
    """Seed, sizes and search budget of one check run."""

    seed: int
    sizes: CheckSizes
    budget: int
    level_cap: int

    def rng(self, stream: int = 0) -> np.random.Generator:
        return np.random.default_rng([self.seed, stream])


@dataclass
class CheckOutcome:
    """Largest violation and largest certificate gap observed over all instances."""

    margin: float = 0.0
    gap: float = 0.0
    instances: list[dict[str, Any]] = field(default_factory=list)

    def record(self, violation: float, gap: float = 0.0, **detail: Any) -> None:
        violation = max(0.0, float(violation))
        gap = max(0.0, float(gap))
        self.margin = max(self.margin, violation)
        self.gap = max(self.gap, gap)
        self.instances.append({"margin": violation, "gap": gap, **detail})


@dataclass(frozen=True)
class PropertyCheck:
    """A registered check: a named, anchored, seeded numerical property."""

    name: str
    anchor: str
    tolerance: float
    run: Callable[[CheckContext], CheckOutcome]


def _finite(value: float) -> float | str:
    return value if math.isfinite(value) else "inf"


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one check with its verdict."""

    check: str
    anchor: str
    seed: int
    sizes: CheckSizes
    margin: float
    gap: float
    tolerance: float
    verdict: Verdict
    instances: list[dict[str, Any]] = field(default_factory=list)

    @staticmethod
    def judge(margin: float, gap: float, tolerance: float) -> Verdict:
        if margin > tolerance:
            return Verdict.FAIL
        if gap > tolerance:
            return Verdict.INCONCLUSIVE
        return Verdict.PASS

    def to_dict(self) -> dict[str, Any]:
        return {
            "check": self.check,
            "anchor": self.anchor,
            "seed": self.seed,
            "sizes": self.sizes.to_dict(),
            "margin": _finite(self.margin),
            "gap": _finite(self.gap),
            "tolerance": self.tolerance,
            "verdict": self.verdict.value,
            "instances": [
                {k: _finite(v) if isinstance(v, float) else v for k, v in inst.items()}
                for inst in self.instances
            ],
        }


@dataclass(frozen=True)
class SuiteReport:
    """Results of a suite run, ordered by check name."""

    seed: int
    profile: Profile
    results: list[CheckResult]

    @property
    def all_passed(self) -> bool:
        return all(r.verdict == Verdict.PASS for r in self.results)

    def counts(self) -> dict[str, int]:
        counts = {v.value: 0 for v in Verdict}
        for r in self.results:
            counts[r.verdict.value] += 1
        return counts

    def to_dict(self) -> dict[str, Any]:
        return {
            "seed": self.seed,
            "profile": self.profile.value,
            "summary": {"total": len(self.results), **self.counts()},
            "all_passed": self.all_passed,
            "checks": [r.to_dict() for r in self.results],
        }
