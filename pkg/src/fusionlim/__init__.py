"""Exact higher limits over orbit categories, fusion systems of M x| Gamma,
and linking-system axiom checking."""

__version__ = "0.1.0"
