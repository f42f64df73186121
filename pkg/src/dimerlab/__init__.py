"""Dimer algebras, their contractions, and the monomial rings attached to them."""

__version__ = "0.1.0"
