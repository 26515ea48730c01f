"""Exact machinery for points with algebraic conjugate coordinates near manifolds."""

__version__ = "0.1.0"
