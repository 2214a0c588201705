"""Spaces services - classical factors, dual ascent and quantized norms."""
