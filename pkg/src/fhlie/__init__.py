"""Exact computations around finite p-groups and Lie rings with a Frobenius
group of automorphisms whose kernel is cyclic."""

__version__ = "0.1.0"
