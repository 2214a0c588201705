"""Matrix services - dense complex linear algebra on levels."""

from app.domains.matrix.services.linalg import (
    align,
    diamond,
    dual_exponent,
    embed,
    flip_unitary,
    pinch_roots_of_unity,
    rank_one,
    schatten_norm,
    singular_triples,
)

__all__ = [
    "align",
    "diamond",
    "dual_exponent",
    "embed",
    "flip_unitary",
    "pinch_roots_of_unity",
    "rank_one",
    "schatten_norm",
    "singular_triples",
]
