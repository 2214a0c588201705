"""Runs registered property checks and assembles suite reports."""

import logging
import time

from app.core.config import settings
from app.domains.verify.schemas import (
    CheckContext,
    CheckResult,
    CheckSizes,
    Profile,
    PropertyCheck,
    SuiteReport,
)
from app.domains.verify.services.registry import build_registry, resolve

logger = logging.getLogger(__name__)


def _context(
    seed: int | None,
    profile: Profile,
    budget: int | None,
    level_cap: int | None,
    sizes: CheckSizes | None = None,
) -> CheckContext:
    return CheckContext(
        seed=settings.SEED if seed is None else seed,
        sizes=CheckSizes.for_profile(profile) if sizes is None else sizes,
        budget=settings.BUDGET if budget is None else budget,
        level_cap=settings.LEVEL_CAP if level_cap is None else level_cap,
    )


def _execute(check: PropertyCheck, ctx: CheckContext, tolerance: float | None) -> CheckResult:
    tol = check.tolerance if tolerance is None else tolerance
    started = time.perf_counter()
    outcome = check.run(ctx)
    verdict = CheckResult.judge(outcome.margin, outcome.gap, tol)
    logger.info(
        f"{check.name}: {verdict.value} (margin {outcome.margin:.3g}, gap {outcome.gap:.3g}, "
        f"{time.perf_counter() - started:.2f}s)"
    )
    return CheckResult(
        check=check.name,
        anchor=check.anchor,
        seed=ctx.seed,
        sizes=ctx.sizes,
        margin=outcome.margin,
        gap=outcome.gap,
        tolerance=tol,
        verdict=verdict,
        instances=outcome.instances,
    )


def run_check(
    name: str,
    seed: int | None = None,
    profile: Profile = Profile.QUICK,
    budget: int | None = None,
    level_cap: int | None = None,
    tolerance: float | None = None,
    sizes: CheckSizes | None = None,
    **size_overrides: int,
) -> CheckResult:
    """Run one check, looked up by name or unique name prefix.

    ``sizes`` replaces the profile sizes; keyword overrides such as ``n=3``
    or ``d=3`` adjust single fields on top of them.

    Raises:
        InvalidParameterError: If the name matches no check or several, or an
            override names an unknown size or a value below one.
    """
    check = resolve(name, build_registry())
    base = CheckSizes.for_profile(profile) if sizes is None else sizes
    ctx = _context(seed, profile, budget, level_cap, base.override(**size_overrides))
    return _execute(check, ctx, tolerance)


def run_all(
    seed: int | None = None,
    profile: Profile = Profile.QUICK,
    budget: int | None = None,
    level_cap: int | None = None,
    tolerance: float | None = None,
    names: list[str] | None = None,
) -> SuiteReport:
    """Run the registered checks (or the named subset) in name order."""
    registry = build_registry()
    ctx = _context(seed, profile, budget, level_cap)
    selected = list(registry.values()) if not names else [resolve(n, registry) for n in names]
    selected = sorted({c.name: c for c in selected}.values(), key=lambda c: c.name)
    logger.info(f"Running {len(selected)} checks (seed {ctx.seed}, profile {profile.value})")
    results = [_execute(check, ctx, tolerance) for check in selected]
    report = SuiteReport(seed=ctx.seed, profile=profile, results=results)
    logger.info(f"Suite summary: {report.counts()}")
    return report


def list_checks() -> list[dict[str, object]]:
    return [
        {"check": c.name, "anchor": c.anchor, "tolerance": c.tolerance} for c in build_registry().values()
    ]
