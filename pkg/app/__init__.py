"""pqnorm - Norm certificates for proto-quantum (matricially normed) spaces."""

__version__ = "0.1.0"
