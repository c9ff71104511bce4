"""Exact exterior calculus for torsion geometry on nilpotent Lie algebras."""

__version__ = "0.1.0"
