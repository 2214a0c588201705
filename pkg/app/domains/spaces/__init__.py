"""Spaces domain - base space and quantization descriptors, norm evaluation.

Note: Use direct imports to avoid circular dependencies:

    from app.domains.spaces.schemas import LpSpace, SchattenQuantization, pop_tensor
    from app.domains.spaces.services.factors import factor_for
    from app.domains.spaces.services.norms import pq_norm, base_norm
"""
