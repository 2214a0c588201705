"""Argument parser aggregating every subcommand."""

import argparse

from app import __version__
from app.cli.commands import cbnorm, norm, tensor, verify, vn


def positive_int(value: str) -> int:
    number = int(value)
    if number < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {value}")
    return number


def non_negative_float(value: str) -> float:
    number = float(value)
    if not number >= 0:
        raise argparse.ArgumentTypeError(f"expected a tolerance >= 0, got {value}")
    return number


def _common_flags() -> argparse.ArgumentParser:
    """Flags shared by all subcommands; unset values fall back to PQNORM_ settings."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="Seed of every randomized search")
    common.add_argument("--budget", type=positive_int, default=None, help="Local search steps per restart")
    common.add_argument("--level-cap", type=positive_int, default=None, help="Largest level of sup searches")
    common.add_argument("--tol", type=non_negative_float, default=None, help="Override check tolerances")
    common.add_argument("--out", default=None, help="Write the JSON result to this file")
    common.add_argument("--log-level", default=None, help="Logging level (default from settings)")
    common.add_argument("--log-format", choices=["text", "json"], default=None, help="Log record format")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pqnorm",
        description="Certified norms of proto-quantum spaces, their tensors and cb-maps",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    common = _common_flags()
    for command in (norm, cbnorm, tensor, vn, verify):
        command.register(subparsers, common)
    return parser
