"""Exact counting of (multiplicative) Diophantine approximations, with the
main terms, volume formulas and Bohr-set machinery needed to test the
almost-everywhere asymptotics against random samples."""

__version__ = "0.1.0"
