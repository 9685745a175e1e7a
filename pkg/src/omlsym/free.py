"""The free OML on two generators x, y in Navara coordinates.

Every element is a pair (Boolean part, MO2 part).  The Boolean part is a
subset of the four atoms ``x&y, x&y', x'&y, x'&y'`` (bit i = atom i in that
order); the MO2 part lives in the six-element block below ``c'(x, y)``,
ordered ``[0, x, y, x', y', 1]``.  Index of an element = mask * 6 + part.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cache, reduce

import numpy as np

from .lattice import Oml, RawLattice, SymDiffKind, validate
from .terms import Join, Meet, One, Ortho, Term, Var, Zero

FULL_MASK = 0b1111
ATOM_LABELS = ("x&y", "x&y'", "x'&y", "x'&y'")


class Mo2(enum.IntEnum):
    ZERO = 0
    X = 1
    Y = 2
    XP = 3
    YP = 4
    ONE = 5

    @property
    def label(self) -> str:
        return ("0", "x", "y", "x'", "y'", "1")[self]


_MO2_ORTHO = (Mo2.ONE, Mo2.XP, Mo2.YP, Mo2.X, Mo2.Y, Mo2.ZERO)


def mo2_join(p: Mo2, q: Mo2) -> Mo2:
    if p == q or q == Mo2.ZERO:
        return p
    if p == Mo2.ZERO:
        return q
    return Mo2.ONE


def mo2_meet(p: Mo2, q: Mo2) -> Mo2:
    if p == q or q == Mo2.ONE:
        return p
    if p == Mo2.ONE:
        return q
    return Mo2.ZERO


@dataclass(frozen=True, order=True)
class NavaraElement:
    mask: int
    part: Mo2

    @property
    def index(self) -> int:
        return self.mask * 6 + int(self.part)

    @classmethod
    def from_index(cls, i: int) -> "NavaraElement":
        return cls(i // 6, Mo2(i % 6))

    def __str__(self):
        return f"{mask_bits(self.mask)}:{self.part.label}"


def mask_bits(mask: int) -> str:
    """Atom mask as four characters, x&y first."""
    return "".join("1" if mask >> k & 1 else "0" for k in range(4))


def nav_join(e: NavaraElement, f: NavaraElement) -> NavaraElement:
    return NavaraElement(e.mask | f.mask, mo2_join(e.part, f.part))


def nav_meet(e: NavaraElement, f: NavaraElement) -> NavaraElement:
    return NavaraElement(e.mask & f.mask, mo2_meet(e.part, f.part))


def nav_ortho(e: NavaraElement) -> NavaraElement:
    return NavaraElement(FULL_MASK & ~e.mask, _MO2_ORTHO[e.part])


X = NavaraElement(0b0011, Mo2.X)
Y = NavaraElement(0b0101, Mo2.Y)
ALL = tuple(NavaraElement(m, p) for m in range(16) for p in Mo2)

# the MO2 part each symmetric difference of the generators carries
KIND_PART = {
    SymDiffKind.NABLA: Mo2.ZERO,
    SymDiffKind.DELTA: Mo2.ONE,
    SymDiffKind.PLUS_L: Mo2.X,
    SymDiffKind.PLUS_R: Mo2.Y,
    SymDiffKind.PLUS_LP: Mo2.XP,
    SymDiffKind.PLUS_RP: Mo2.YP,
}


class FreeConstructionError(RuntimeError):
    pass


@cache
def make_free() -> tuple[Oml, int, int]:
    """Return F(x, y) as a validated Oml together with the indices of x and y."""
    n = len(ALL)
    leq = np.array([[nav_meet(e, f) == e for f in ALL] for e in ALL])
    raw = RawLattice(n, leq, tuple(nav_ortho(e).index for e in ALL), tuple(str(e) for e in ALL))
    L = validate(raw)
    join = np.array([[nav_join(e, f).index for f in ALL] for e in ALL])
    meet = np.array([[nav_meet(e, f).index for f in ALL] for e in ALL])
    if not (np.array_equal(join, L.join) and np.array_equal(meet, L.meet)):
        raise FreeConstructionError("componentwise tables disagree with the order relation")
    return L, X.index, Y.index


def phi(e: NavaraElement) -> int:
    """Image in the free Boolean algebra on u, v: the atom mask (the MO2 block maps to 0)."""
    return e.mask


SYM_DIFF_MASK = 0b0110  # x&y' and x'&y


def preimage_sym_diff() -> list[NavaraElement]:
    return [e for e in ALL if phi(e) == SYM_DIFF_MASK]


def _commutator_ortho(x: Term, y: Term) -> Term:
    xp, yp = Ortho(x), Ortho(y)
    c = Join(Join(Join(Meet(x, y), Meet(x, yp)), Meet(xp, y)), Meet(xp, yp))
    return Ortho(c)


def to_term(e: NavaraElement) -> Term:
    """Canonical term: join of the Boolean atoms present and the MO2 part's defining meet."""
    x, y = Var("x"), Var("y")
    xp, yp = Ortho(x), Ortho(y)
    atoms = (Meet(x, y), Meet(x, yp), Meet(xp, y), Meet(xp, yp))
    parts: list[Term] = [atoms[k] for k in range(4) if e.mask >> k & 1]
    cp = _commutator_ortho(x, y)
    block = {Mo2.X: Meet(x, cp), Mo2.Y: Meet(y, cp), Mo2.XP: Meet(xp, cp), Mo2.YP: Meet(yp, cp),
             Mo2.ONE: cp}.get(e.part)
    if block is not None:
        parts.append(block)
    if not parts:
        return Zero()
    if e.mask == FULL_MASK and e.part == Mo2.ONE:
        return One()
    return reduce(Join, parts)
