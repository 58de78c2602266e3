"""Exact exterior calculus and certificate-producing verifiers for cosymplectic spheres."""

__version__ = "0.1.0"
