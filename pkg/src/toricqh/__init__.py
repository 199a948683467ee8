"""Exact computer algebra for symplectic toric manifolds.

From a rational Delzant polytope the package computes the classical and
small quantum cohomology rings, Seidel elements of torus subcircles, and a
battery of obstruction tests certifying that Hamiltonian circle loops are
essential.  All arithmetic is exact over the rationals.
"""

__version__ = "0.1.0"
