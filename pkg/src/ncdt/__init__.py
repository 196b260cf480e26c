"""Exact generating functions of open non-commutative DT invariants."""

__version__ = "0.1.0"
