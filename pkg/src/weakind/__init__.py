"""Weakened independence models for two-way contingency tables."""

__version__ = "0.1.0"
