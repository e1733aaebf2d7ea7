"""Finite-scale Schreier graphs, coarse invariants and cube complex combinatorics."""

__version__ = "0.1.0"
