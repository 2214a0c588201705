"""Verify services - check functions, the registry and the runner."""
