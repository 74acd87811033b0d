"""Group constructions K(G,n), K~(G,n) and fundamental-group calculators for
Galois closures of generic projections."""

__version__ = "0.1.0"
