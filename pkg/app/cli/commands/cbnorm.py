"""``cbnorm``: searched lower bound on the cb-norm of an operator or bioperator."""

import argparse
import logging

from app.cli.io import CommandResult, load_json
from app.domains.amplification.schemas import OperatorDocument, parse_document
from app.domains.engines.services.cb import cb_bilinear_estimate, cb_norm_estimate

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction, common: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser(
        "cbnorm", parents=[common], help="cb-norm estimate of a linear or bilinear operator"
    )
    parser.add_argument("--in", dest="source", required=True, help="Operator JSON file or inline JSON")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> CommandResult:
    document: OperatorDocument = parse_document(OperatorDocument, load_json(args.source))
    if document.kind == "bilinear":
        estimate = cb_bilinear_estimate(document.to_bioperator(), args.level_cap, args.budget, args.seed)
    else:
        estimate = cb_norm_estimate(document.to_operator(), args.level_cap, args.budget, args.seed)
    logger.info(f"cb estimate ({document.kind}): {estimate.lower:.6g}")
    return CommandResult({**estimate.to_dict(), "kind": document.kind})
