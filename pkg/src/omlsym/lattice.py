"""Finite orthomodular lattices as dense integer tables.

Elements are the indices ``0..size-1``.  An :class:`Oml` is only ever built by
:func:`validate`, which tabulates meet and join from the order relation and
checks every ortholattice axiom plus the orthomodular law.  All the
operations below accept scalars or numpy index arrays interchangeably, so the
same code drives single evaluations and exhaustive vectorized scans.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np


class ValidationError(ValueError):
    """Raised by :func:`validate`; ``witness`` is the lexicographically least violating tuple."""

    def __init__(self, witness: tuple, message: str = ""):
        self.witness = tuple(int(w) for w in witness)
        super().__init__(message or f"{type(self).__name__} witness {self.witness}")


class NotAPoset(ValidationError):
    pass


class NotALattice(ValidationError):
    pass


class OrthoNotInvolution(ValidationError):
    pass


class OrthoNotComplement(ValidationError):
    pass


class OrthoNotAntitone(ValidationError):
    pass


class NotOrthomodular(ValidationError):
    pass


@dataclass(frozen=True, eq=False)
class RawLattice:
    """Unvalidated lattice data: an order relation, an orthocomplement and optional names."""

    size: int
    leq: np.ndarray
    ortho: tuple[int, ...]
    names: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("a lattice needs at least one element")
        leq = np.asarray(self.leq, dtype=bool)
        if leq.shape != (self.size, self.size):
            raise ValueError(f"leq must be {self.size}x{self.size}, got {leq.shape}")
        object.__setattr__(self, "leq", leq)
        ortho = tuple(int(v) for v in self.ortho)
        if sorted(ortho) != list(range(self.size)):
            raise ValueError("ortho is not a permutation of the element indices")
        object.__setattr__(self, "ortho", ortho)
        if self.names is not None:
            names = tuple(self.names)
            if len(names) != self.size or len(set(names)) != self.size:
                raise ValueError("names must be one distinct identifier per element")
            object.__setattr__(self, "names", names)

    @classmethod
    def from_covers(cls, size: int, covers: Iterable[tuple[int, int]], ortho: Sequence[int],
                    names: Optional[Sequence[str]] = None) -> "RawLattice":
        """Build the order as the reflexive-transitive closure of a cover relation."""
        leq = np.eye(size, dtype=bool)
        for lo, hi in covers:
            leq[lo, hi] = True
        # Warshall closure, one pivot at a time
        for k in range(size):
            leq |= leq[:, k, None] & leq[None, k, :]
        return cls(size, leq, tuple(ortho), None if names is None else tuple(names))


@dataclass(frozen=True, eq=False)
class Oml:
    """A validated finite orthomodular lattice.  Treat as immutable."""

    size: int
    leq: np.ndarray
    meet: np.ndarray
    join: np.ndarray
    ortho: np.ndarray
    bottom: int
    top: int
    names: Optional[tuple[str, ...]] = field(default=None)

    def name(self, e: int) -> str:
        return self.names[e] if self.names is not None else f"e{int(e)}"

    def elements(self) -> range:
        return range(self.size)

    @cached_property
    def raw(self) -> RawLattice:
        return RawLattice(self.size, self.leq, tuple(self.ortho.tolist()), self.names)

    @cached_property
    def commutation(self) -> np.ndarray:
        """Boolean matrix of the commutativity relation (definitional route)."""
        n = self.size
        out = np.zeros((n, n), dtype=bool)
        for a in range(n):
            for b in range(a, n):
                out[a, b] = out[b, a] = _commutes_definitional(self, a, b)
        out.flags.writeable = False
        return out

    @cached_property
    def perspectivity(self) -> np.ndarray:
        """``perspectivity[a, b]`` is true iff a and b share a common complement."""
        complement = (self.meet == self.bottom) & (self.join == self.top)  # [a, c]
        out = (complement.astype(np.int64) @ complement.T.astype(np.int64)) > 0
        out.flags.writeable = False
        return out

    def __repr__(self):
        return f"Oml(size={self.size})"


def _lex_first(mask: np.ndarray) -> Optional[tuple]:
    hits = np.argwhere(mask)
    return tuple(hits[0]) if len(hits) else None


def _bound_table(leq: np.ndarray) -> tuple[np.ndarray, Optional[tuple]]:
    """Greatest lower bounds for every pair, or the first pair lacking one.

    For a fixed ``a`` the row ``lower[b, c]`` marks the common lower bounds c
    of a and b; the meet is the unique common lower bound lying above all of
    them.
    """
    n = len(leq)
    leq_i = leq.astype(np.int64)
    table = np.empty((n, n), dtype=np.int64)
    missing = None
    for a in range(n):
        lower = leq[:, a][None, :] & leq.T  # lower[b, c] = c <= a and c <= b
        counts = lower.astype(np.int64) @ leq_i  # counts[b, g] = #lower bounds below g
        ok = lower & (counts == lower.sum(axis=1, keepdims=True))
        found = ok.any(axis=1)
        if not found.all():
            b = int(np.argmin(found))
            if missing is None or (a, b) < missing:
                missing = (a, b)
        table[a] = np.argmax(ok, axis=1)
    return table, missing


def validate(raw: RawLattice) -> Oml:
    """Check every axiom and return the fully tabulated lattice.

    Raises the :class:`ValidationError` subclass of the first axiom violated,
    checked in the order poset, lattice, involution, complement, antitone,
    orthomodular; the witness is the least violating tuple in index order.
    """
    n = raw.size
    leq = raw.leq.copy()
    ortho = np.array(raw.ortho, dtype=np.int64)

    irreflexive = np.flatnonzero(~np.diag(leq))
    if len(irreflexive):
        a = int(irreflexive[0])
        raise NotAPoset((a, a), f"NotAPoset: {a} is not <= itself")
    w = _lex_first(leq & leq.T & ~np.eye(n, dtype=bool))
    if w is not None:
        raise NotAPoset(w, f"NotAPoset: antisymmetry fails for {w}")
    for a in range(n):
        bad = leq[a][:, None] & leq & ~leq[a][None, :]  # a<=b, b<=c, not a<=c
        w = _lex_first(bad)
        if w is not None:
            raise NotAPoset((a, *w), f"NotAPoset: transitivity fails for {(a, *w)}")

    meet, missing = _bound_table(leq)
    join, missing_up = _bound_table(leq.T)
    if missing is not None or missing_up is not None:
        w = min(m for m in (missing, missing_up) if m is not None)
        raise NotALattice(w, f"NotALattice: no meet or join for {w}")

    bottom = int(np.flatnonzero(leq.all(axis=1))[0])
    top = int(np.flatnonzero(leq.all(axis=0))[0])

    w = _lex_first(ortho[ortho] != np.arange(n))
    if w is not None:
        raise OrthoNotInvolution(w)
    idx = np.arange(n)
    w = _lex_first((meet[idx, ortho] != bottom) | (join[idx, ortho] != top))
    if w is not None:
        raise OrthoNotComplement(w)
    w = _lex_first(leq & ~leq[ortho][:, ortho].T)
    if w is not None:
        raise OrthoNotAntitone(w)
    # a <= b must give b = a v (b ^ a')
    recovered = join[idx[:, None], meet[idx[None, :], ortho[:, None]]]
    w = _lex_first(leq & (recovered != idx[None, :]))
    if w is not None:
        raise NotOrthomodular(w)

    for arr in (leq, meet, join, ortho):
        arr.flags.writeable = False
    return Oml(n, leq, meet, join, ortho, bottom, top, raw.names)


class SymDiffKind(enum.Enum):
    """The six symmetric differences; the value is the ASCII operator body."""

    NABLA = "n"
    DELTA = "d"
    PLUS_L = "+l"
    PLUS_R = "+r"
    PLUS_LP = "+l'"
    PLUS_RP = "+r'"

    @property
    def operator(self) -> str:
        return f"<{self.value}>"


def sym_diff(L: Oml, kind: SymDiffKind, a, b):
    """Evaluate one of the six symmetric differences on elements or index arrays."""
    m, j, o = L.meet, L.join, L.ortho
    if kind is SymDiffKind.NABLA:
        return j[m[a, o[b]], m[o[a], b]]
    if kind is SymDiffKind.DELTA:
        return m[j[a, b], j[o[a], o[b]]]
    if kind is SymDiffKind.PLUS_L:
        return m[j[a, m[o[a], b]], j[o[a], o[b]]]
    if kind is SymDiffKind.PLUS_R:
        return m[j[m[a, o[b]], b], j[o[a], o[b]]]
    if kind is SymDiffKind.PLUS_LP:
        return m[j[a, b], j[o[a], m[a, o[b]]]]
    if kind is SymDiffKind.PLUS_RP:
        return m[j[a, b], j[m[o[a], b], o[b]]]
    raise ValueError(kind)


def sym_diff_table(L: Oml, kind: SymDiffKind) -> np.ndarray:
    idx = np.arange(L.size)
    return sym_diff(L, kind, idx[:, None], idx[None, :])


def commutator(L: Oml, a, b):
    """(a & b) | (a & b') | (a' & b) | (a' & b')"""
    m, j, o = L.meet, L.join, L.ortho
    return j[j[m[a, b], m[a, o[b]]], j[m[o[a], b], m[o[a], o[b]]]]


def generated_subalgebra(L: Oml, seed: Iterable[int], limit: Optional[int] = None) -> frozenset[int]:
    """Least subset holding ``seed``, bottom and top, closed under meet, join and ortho.

    With ``limit`` set the fixpoint iteration stops as soon as the set grows
    past ``limit`` elements and the partial (oversized) set is returned.
    """
    current = np.unique(np.array([*seed, L.bottom, L.top], dtype=np.int64))
    while True:
        grown = np.unique(np.concatenate([
            current,
            L.ortho[current],
            L.meet[current[:, None], current[None, :]].ravel(),
            L.join[current[:, None], current[None, :]].ravel(),
        ]))
        if len(grown) == len(current) or (limit is not None and len(grown) > limit):
            return frozenset(grown.tolist())
        current = grown


def is_distributive(L: Oml, subset: Optional[Iterable[int]] = None) -> bool:
    """Exhaustive check of a & (b | c) = (a & b) | (a & c) over ``subset`` (default: all of L)."""
    s = np.arange(L.size) if subset is None else np.array(sorted(subset), dtype=np.int64)
    b, c = s[:, None], s[None, :]
    for a in s:
        if np.any(L.meet[a, L.join[b, c]] != L.join[L.meet[a, b], L.meet[a, c]]):
            return False
    return True


# A Boolean algebra generated by two elements has at most 16 elements.
_FREE_BA2_SIZE = 16


def _commutes_definitional(L: Oml, a: int, b: int) -> bool:
    sub = generated_subalgebra(L, (a, b), limit=_FREE_BA2_SIZE)
    return len(sub) <= _FREE_BA2_SIZE and is_distributive(L, sub)


def commutes(L: Oml, a: int, b: int) -> bool:
    """True iff the subalgebra generated by {a, b} is Boolean."""
    return bool(L.commutation[a, b])


def commutes_shortcut(L: Oml, a, b):
    """The equational test a = (a & b) | (a & b'); vectorizes over index arrays."""
    return L.join[L.meet[a, b], L.meet[a, L.ortho[b]]] == a


def shortcut_agrees(L: Oml) -> bool:
    """Whether :func:`commutes_shortcut` matches the definitional relation on every pair of L."""
    idx = np.arange(L.size)
    return bool(np.array_equal(commutes_shortcut(L, idx[:, None], idx[None, :]), L.commutation))


def perspective(L: Oml, a: int, b: int) -> Optional[int]:
    """Least-index common complement of a and b, or None."""
    c = np.arange(L.size)
    ok = ((L.meet[a, c] == L.bottom) & (L.meet[b, c] == L.bottom)
          & (L.join[a, c] == L.top) & (L.join[b, c] == L.top))
    hits = np.flatnonzero(ok)
    return int(hits[0]) if len(hits) else None


def is_boolean(L: Oml) -> bool:
    return is_distributive(L)
