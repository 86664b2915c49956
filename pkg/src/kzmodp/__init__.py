"""Polynomial solutions of KZ equations over F_p and Hasse-Witt matrices of superelliptic curves."""

__version__ = "0.1.0"
