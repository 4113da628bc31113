"""Toolkit for building odd-dimensional orthogonal groups over small fields
and auditing the factorizations Z = XY of their subgroup pairs, both by exact
order arithmetic and by coset-orbit computation."""

__version__ = "0.1.0"
