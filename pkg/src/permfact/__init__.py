"""Exact verification toolkit for the permutation-type matrix bifactorisations
of x^d - y^d (d odd), the NS-sector data of the matching superconformal minimal
model, and the dictionary between the two fusion rings."""

__version__ = "0.1.0"
