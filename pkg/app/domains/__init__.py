"""Domain modules - numerical logic organized by bounded contexts.

Note: Domain modules are imported lazily to avoid circular imports.
Import them directly where needed:

    from app.domains.spaces.schemas import LpSpace, p_quantization
    from app.domains.spaces.services.norms import pq_norm
    from app.domains.engines.services.pop import pop_certificate
"""
