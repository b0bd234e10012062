"""Balanced quantum-torus algebras of triangulated closed oriented surfaces,
their irreducible representations at odd roots of unity, and off-diagonal
kernels of the induced skein operators."""

__version__ = "0.1.0"
