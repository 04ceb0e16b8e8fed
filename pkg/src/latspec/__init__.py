"""Exact computation of Diophantine spectra of planar unimodular lattices."""

__version__ = "0.1.0"
