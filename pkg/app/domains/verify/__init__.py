"""Verify domain - seeded property checks with margins and verdicts.

Note: Use direct imports to avoid circular dependencies:

    from app.domains.verify.schemas import CheckResult, SuiteReport
    from app.domains.verify.services.runner import run_all, run_check
"""
