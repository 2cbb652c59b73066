"""Exact Witt classes, Lagrangian paths and Maslov indices over Q and GF(p)."""

__version__ = "0.1.0"
