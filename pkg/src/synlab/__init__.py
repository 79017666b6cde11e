"""synlab: dimension tables for the mod (p, v1^k) syntomic cohomology,
topological cyclic homology, and algebraic K-theory of Z/p^n, computed two
independent ways and cross-checked exactly over F_p."""

__version__ = "0.1.0"
