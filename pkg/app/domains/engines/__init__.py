"""Engines domain - certified bounds for projective, diamond and cb norms.

Note: Use direct imports to avoid circular dependencies:

    from app.domains.engines.schemas import NormCertificate, PopRepresentation
    from app.domains.engines.services.pop import pop_certificate, op_norm_upper
    from app.domains.engines.services.cb import cb_norm_estimate
"""
