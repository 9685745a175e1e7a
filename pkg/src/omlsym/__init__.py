"""Finite orthomodular lattices, their six symmetric differences, and congruence checks."""
from .lattice import Oml, RawLattice, SymDiffKind, commutator, commutes, perspective, sym_diff, validate

__all__ = ["Oml", "RawLattice", "SymDiffKind", "commutator", "commutes", "perspective", "sym_diff",
           "validate"]
