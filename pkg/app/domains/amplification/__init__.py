"""Amplification domain - elements of K E, bimodule actions and amplified maps."""
