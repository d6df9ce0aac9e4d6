"""Bi-coset graph construction, automorphism analysis and Hamilton-cycle search."""

__version__ = "0.1.0"
