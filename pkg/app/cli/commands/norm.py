"""``norm``: certificate for an element of any quantization."""

import argparse
import logging

from app.cli.io import CommandResult, load_json
from app.domains.amplification.schemas import ElementDocument, parse_document
from app.domains.spaces.services.norms import pq_norm

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction, common: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser(
        "norm", parents=[common], help="Norm certificate of an amplified element"
    )
    parser.add_argument("--in", dest="source", required=True, help="Element JSON file or inline JSON")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> CommandResult:
    document: ElementDocument = parse_document(ElementDocument, load_json(args.source))
    u = document.to_elem()
    logger.info(f"Evaluating a level-{u.level} element of {u.ambient.kind} ({len(u.terms)} terms)")
    cert = pq_norm(u, args.budget, args.seed)
    return CommandResult({**cert.to_dict(), "ambient": u.ambient.kind, "level": u.level})
