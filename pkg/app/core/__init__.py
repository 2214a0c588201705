"""Core module - Settings, errors and logging shared by every domain.

Import the error types directly where needed:

    from app.core.exceptions import DimensionError, ParseError
"""

from app.core.config import settings

__all__ = [
    "settings",
]
