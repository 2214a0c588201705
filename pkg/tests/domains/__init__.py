"""Tests for domains package."""
