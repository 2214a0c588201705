"""``vn``: the diagonal witness family and its pop/op comparison."""

import argparse
import logging
from pathlib import Path
from typing import Any

from app.cli.io import CommandResult, dumps
from app.domains.amplification.schemas import AmpElem, ElementDocument
from app.domains.engines.services.families import vn_family, vn_reference, vn_split, vn_witness
from app.domains.engines.services.pop import op_norm_upper, pop_certificate, recheck_single_diamond

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction, common: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser(
        "vn", parents=[common], help="Diagonal family V_n: pop-norm n against op-norm n squared"
    )
    parser.add_argument("n", type=int, help="Order of the family (n >= 1)")
    parser.add_argument("--m", type=int, default=None, help="Split V_n into V_m and V_n - V_m")
    parser.add_argument("--out-dir", default=None, help="Directory for the element files")
    parser.set_defaults(handler=run)


def _document(u: AmpElem) -> dict[str, Any]:
    return ElementDocument.from_elem(u).model_dump(mode="json")


def _write(out_dir: str | None, elements: dict[str, AmpElem]) -> list[str]:
    if out_dir is None:
        return []
    target = Path(out_dir)
    target.mkdir(parents=True, exist_ok=True)
    written = []
    for name, u in elements.items():
        path = target / f"{name}.json"
        path.write_text(dumps(_document(u)) + "\n", encoding="utf-8")
        written.append(str(path))
    logger.info(f"Wrote {len(written)} element files to {target}")
    return written


def run(args: argparse.Namespace) -> CommandResult:
    n = args.n
    reference = vn_reference(n)
    whole = vn_family(n)
    cert = pop_certificate(whole, args.budget, args.seed)
    op_upper, _ = op_norm_upper(whole, args.budget, args.seed)
    _, witness_cost = recheck_single_diamond(vn_witness(n), whole, args.budget, args.seed)
    elements = {f"V_{n}": whole}
    payload: dict[str, Any] = {
        "n": n,
        "reference": reference.to_dict(),
        "pop": cert.to_dict(),
        "op": {"upper": op_upper, "witness_cost": witness_cost},
        "gap_present": witness_cost > cert.lower + 1e-9,
    }

    if args.m is not None:
        m = args.m
        head, tail, _ = vn_split(n, m)
        head_upper, _ = op_norm_upper(head, args.budget, args.seed)
        tail_upper, _ = op_norm_upper(tail, args.budget, args.seed)
        payload["triangle"] = {
            "m": m,
            "reference": {"V_m": m * m, "V_n-V_m": (n - m) ** 2, "V_n": n * n},
            "op_upper": {"V_m": head_upper, "V_n-V_m": tail_upper, "V_n": witness_cost},
            "violated": head_upper + tail_upper < witness_cost,
        }
        elements[f"V_{m}"] = head
        elements[f"V_{n}-V_{m}"] = tail

    payload["files"] = _write(args.out_dir, elements)
    payload["elements"] = {name: _document(u) for name, u in elements.items()}
    return CommandResult(payload)
