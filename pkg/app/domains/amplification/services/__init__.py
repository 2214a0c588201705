"""Amplification services."""

from app.domains.amplification.services.actions import (
    amp_diamond,
    amplify_bioperator,
    amplify_operator,
    compress,
    module_action,
    scalar_diamond,
    support_projection,
)

__all__ = [
    "amp_diamond",
    "amplify_bioperator",
    "amplify_operator",
    "compress",
    "module_action",
    "scalar_diamond",
    "support_projection",
]
