"""Exact representation engine for finite solvable groups given by long presentations."""

__version__ = "0.1.0"
