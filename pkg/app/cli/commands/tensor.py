"""``tensor``: build pop/pr tensor descriptors, or the diamond of two elements."""

import argparse
import logging
from typing import Any, Literal

from pydantic import BaseModel, TypeAdapter

from app.cli.io import CommandResult, load_json, parse_with
from app.core.exceptions import DomainMismatchError
from app.domains.amplification.schemas import ElementDocument, parse_document
from app.domains.amplification.services.actions import amp_diamond
from app.domains.spaces.schemas import BaseSpace, PQSpace, pop_tensor, pr_tensor
from app.domains.spaces.services.norms import pq_norm

logger = logging.getLogger(__name__)

_pq_spaces: TypeAdapter[Any] = TypeAdapter(PQSpace)
_base_spaces: TypeAdapter[Any] = TypeAdapter(BaseSpace)


class TensorRequest(BaseModel):
    """Two factors: space descriptors, or element documents for a diamond product."""

    kind: Literal["pop", "pr"] = "pop"
    left: dict[str, Any]
    right: dict[str, Any]


def register(subparsers: argparse._SubParsersAction, common: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser(
        "tensor", parents=[common], help="Tensor descriptor or diamond product of two elements"
    )
    parser.add_argument("--in", dest="source", required=True, help="Tensor request JSON")
    parser.add_argument("--norm", action="store_true", help="Also certify the diamond product")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> CommandResult:
    request: TensorRequest = parse_document(TensorRequest, load_json(args.source))
    if "ambient" in request.left or "ambient" in request.right:
        return _diamond(request, args)

    if request.kind == "pr":
        ambient = pr_tensor(
            parse_with(_base_spaces, request.left, "base space"),
            parse_with(_pq_spaces, request.right, "space"),
        )
    else:
        ambient = pop_tensor(
            parse_with(_pq_spaces, request.left, "space"),
            parse_with(_pq_spaces, request.right, "space"),
        )
    return CommandResult({"ambient": ambient.model_dump(mode="json"), "dimension": ambient.dimension})


def _diamond(request: TensorRequest, args: argparse.Namespace) -> CommandResult:
    if request.kind != "pop":
        raise DomainMismatchError("Diamond products live in pop tensors", details={"kind": request.kind})
    u = parse_document(ElementDocument, request.left).to_elem()
    v = parse_document(ElementDocument, request.right).to_elem()
    product = amp_diamond(u, v, pop_tensor(u.ambient, v.ambient))
    payload: dict[str, Any] = {"element": ElementDocument.from_elem(product).model_dump(mode="json")}
    if args.norm:
        payload["certificate"] = pq_norm(product, args.budget, args.seed).to_dict()
    logger.info(f"Diamond product at level {product.level} with {len(product.terms)} terms")
    return CommandResult(payload)
