"""Exact homological-algebra workbench: torsion, localisation and completion functors."""

__version__ = "0.1.0"
