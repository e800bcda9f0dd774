"""Graded affine Hecke algebras, spin covers of Weyl groups and Dirac operators."""

__version__ = "0.1.0"
