"""Equitable k-colorings of graphs: solvers, bound tables, and verification
campaigns over planar graph families without short cycles."""

__version__ = "0.1.0"
