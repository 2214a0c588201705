"""Input decoding and JSON output for subcommands."""

import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from pydantic import TypeAdapter, ValidationError

from app.core.exceptions import ParseError, PQNormError

logger = logging.getLogger(__name__)


def load_json(source: str) -> Any:
    """Decode ``source`` as a file path when one exists, else as inline JSON.

    Raises:
        ParseError: If the text is not valid JSON or the file is unreadable.
    """
    path = Path(source)
    try:
        text = path.read_text(encoding="utf-8") if path.is_file() else source
    except OSError as exc:
        raise ParseError("Cannot read input file", details={"path": source, "reason": str(exc)}) from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(
            "Input is not valid JSON", details={"line": exc.lineno, "column": exc.colno, "reason": exc.msg}
        ) from exc


def _sanitize(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return "inf" if value > 0 else "-inf"
    if isinstance(value, dict):
        return {str(k): _sanitize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_sanitize(v) for v in value]
    return value


def dumps(payload: Any) -> str:
    return json.dumps(_sanitize(payload), indent=2, sort_keys=True)


def emit(payload: Any, out: str | None = None) -> str:
    """Write the payload as JSON to ``out`` (a path) or return it for stdout."""
    text = dumps(payload)
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
        logger.info(f"Wrote {out}")
    return text


@dataclass(frozen=True)
class CommandResult:
    """Payload printed by a subcommand, plus an error that sets the exit code."""

    payload: Any
    failure: PQNormError | None = None


def parse_with(adapter: TypeAdapter[Any], payload: Any, what: str) -> Any:
    """Validate ``payload`` with a type adapter, mapping schema errors to ParseError."""
    try:
        return adapter.validate_python(payload)
    except ValidationError as exc:
        raise ParseError(
            f"Invalid {what}", details={"errors": exc.errors(include_url=False, include_context=False)}
        ) from exc
