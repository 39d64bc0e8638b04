"""Exact intersection-theory kernel and the check pipeline built on it."""

__version__ = "0.1.0"
