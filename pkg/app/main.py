"""Command-line entry point.

Results go to stdout as JSON; logs go to stderr. Exit codes: 0 ok, 2 parse
error, 3 semantic error, 4 failing checks.
"""

import logging
import sys
from collections.abc import Sequence

from app.cli.io import dumps, emit
from app.cli.parser import build_parser
from app.core.config import settings
from app.core.exceptions import PQNormError
from app.core.logging import configure_logging

logger = logging.getLogger(__name__)


def main(argv: Sequence[str] | None = None) -> int:
    """Parse ``argv``, run the subcommand and return the process exit code."""
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level, args.log_format)
    logger.debug(f"{settings.APP_NAME} v{settings.APP_VERSION}: {args.command}")

    try:
        result = args.handler(args)
    except PQNormError as exc:
        logger.error(f"{type(exc).__name__}: {exc.message}")
        print(dumps(exc.to_dict()))
        return exc.exit_code

    text = emit(result.payload, args.out)
    if not args.out:
        print(text)
    if result.failure is not None:
        logger.error(f"{type(result.failure).__name__}: {result.failure.message}")
        return result.failure.exit_code
    return 0


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
