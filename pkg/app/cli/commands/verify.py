"""``verify``: run the property-check suite."""

import argparse
import logging

from app.cli.io import CommandResult
from app.core.exceptions import CheckFailure
from app.domains.verify.schemas import Profile, Verdict
from app.domains.verify.services.runner import list_checks, run_all

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction, common: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser("verify", parents=[common], help="Run the property-check suite")
    parser.add_argument(
        "--profile", choices=[p.value for p in Profile], default=Profile.QUICK.value, help="Instance sizes"
    )
    parser.add_argument(
        "--check", action="append", dest="checks", default=None, help="Check name or prefix (repeatable)"
    )
    parser.add_argument("--list", action="store_true", help="List the registered checks and exit")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> CommandResult:
    if args.list:
        return CommandResult({"checks": list_checks()})
    report = run_all(
        seed=args.seed,
        profile=Profile(args.profile),
        budget=args.budget,
        level_cap=args.level_cap,
        tolerance=args.tol,
        names=args.checks,
    )
    if report.all_passed:
        return CommandResult(report.to_dict())
    failing = [r.check for r in report.results if r.verdict != Verdict.PASS]
    return CommandResult(
        report.to_dict(),
        CheckFailure(f"{len(failing)} checks did not pass", details={"checks": failing}),
    )
