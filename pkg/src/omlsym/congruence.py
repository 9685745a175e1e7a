"""p-ideals, congruences and the congruence-class formulas of a finite OML.

Congruences are stored as a block map ``element -> least member of its
class``; p-ideals as frozensets of element indices.  Everything here is
checked by exhaustive table scans, so the intended scale is a few hundred
elements at most.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np
from more_itertools import set_partitions

from .lattice import Oml, SymDiffKind, sym_diff, sym_diff_table
from .terms import IdentityReport, check_predicate

PLUS_L = SymDiffKind.PLUS_L
DELTA = SymDiffKind.DELTA


class RelationNotCongruence(RuntimeError):
    pass


class SizeGuardExceeded(ValueError):
    pass


@dataclass(frozen=True)
class PIdeal:
    lattice: Oml
    members: frozenset[int]

    def __len__(self):
        return len(self.members)

    def __contains__(self, e):
        return e in self.members

    def sorted(self) -> list[int]:
        return sorted(self.members)


@dataclass(frozen=True)
class Congruence:
    lattice: Oml
    blocks: tuple[int, ...]

    def relation(self) -> np.ndarray:
        b = np.array(self.blocks)
        return b[:, None] == b[None, :]

    def classes(self) -> list[frozenset[int]]:
        out: dict[int, set[int]] = {}
        for e, b in enumerate(self.blocks):
            out.setdefault(b, set()).add(e)
        return [frozenset(out[b]) for b in sorted(out)]


@dataclass(frozen=True)
class KernelReport:
    subgroup_ok: bool
    normal_ok: bool
    order_ideal_ok: bool

    @property
    def is_kernel(self) -> bool:
        return self.subgroup_ok and self.normal_ok and self.order_ideal_ok


def _as_array(S: Iterable[int]) -> np.ndarray:
    return np.array(sorted(S), dtype=np.int64)


def _member_mask(L: Oml, S: Iterable[int]) -> np.ndarray:
    mask = np.zeros(L.size, dtype=bool)
    mask[_as_array(S)] = True
    return mask


def _first_outside(mask: np.ndarray, values: np.ndarray) -> Optional[tuple]:
    hits = np.argwhere(~mask[values])
    return tuple(int(v) for v in hits[0]) if len(hits) else None


def lattice_ideal_violation(L: Oml, S: Iterable[int]) -> Optional[tuple]:
    """First reason S is not a lattice ideal, as a tagged tuple, or None."""
    s = _as_array(S)
    if len(s) == 0:
        return ("empty",)
    mask = _member_mask(L, s)
    below = L.leq[:, s]  # below[x, k]: x <= s[k]
    hits = np.argwhere(below & ~mask[:, None])
    if len(hits):
        x, k = hits[0]
        return ("down", int(s[k]), int(x))
    w = _first_outside(mask, L.join[s[:, None], s[None, :]])
    if w is not None:
        return ("join", int(s[w[0]]), int(s[w[1]]))
    return None


def p_ideal_violation(L: Oml, S: Iterable[int]) -> Optional[tuple]:
    """Like :func:`lattice_ideal_violation`, then x & (i | x') must stay in S for all x, i."""
    v = lattice_ideal_violation(L, S)
    if v is not None:
        return v
    s = _as_array(S)
    x = np.arange(L.size)[:, None]
    w = _first_outside(_member_mask(L, s), L.meet[x, L.join[s[None, :], L.ortho[x]]])
    if w is not None:
        return ("perspective", w[0], int(s[w[1]]))
    return None


def is_p_ideal(L: Oml, S: Iterable[int]) -> bool:
    return p_ideal_violation(L, S) is None


def is_p_ideal_alt(L: Oml, S: Iterable[int]) -> bool:
    """p-ideal test through x +l (i +l x) in S for all x and all i in S."""
    if lattice_ideal_violation(L, S) is not None:
        return False
    s = _as_array(S)
    x = np.arange(L.size)[:, None]
    images = sym_diff(L, PLUS_L, x, sym_diff(L, PLUS_L, s[None, :], x))
    return bool(_member_mask(L, s)[images].all())


def p_ideal_closure(L: Oml, S: Iterable[int]) -> PIdeal:
    """Least p-ideal containing S (fixpoint of down-closure, joins and the x & (i | x') images)."""
    mask = _member_mask(L, [*S, L.bottom])
    x = np.arange(L.size)[:, None]
    while True:
        s = np.flatnonzero(mask)
        grown = mask | L.leq[:, s].any(axis=1)
        grown[L.join[s[:, None], s[None, :]].ravel()] = True
        grown[L.meet[x, L.join[s[None, :], L.ortho[x]]].ravel()] = True
        if np.array_equal(grown, mask):
            return PIdeal(L, frozenset(s.tolist()))
        mask = grown


def all_p_ideals(L: Oml) -> list[PIdeal]:
    """Every p-ideal: the join-closure of the principal ones, sorted by (size, members)."""
    principal = {p_ideal_closure(L, [a]).members for a in range(L.size)}
    found = set(principal)
    frontier = set(principal)
    while frontier:
        new = set()
        for I in frontier:
            for J in principal:
                K = p_ideal_closure(L, I | J).members
                if K not in found:
                    new.add(K)
        found |= new
        frontier = new
    return [PIdeal(L, m) for m in sorted(found, key=lambda m: (len(m), sorted(m)))]


def is_compatible(L: Oml, R: np.ndarray) -> bool:
    """Whether an equivalence relation (Boolean matrix) respects meet, join and ortho."""
    A, B = np.nonzero(R)
    c = np.arange(L.size)[None, :]
    a, b = A[:, None], B[:, None]
    return bool(R[L.ortho[A], L.ortho[B]].all()
                and R[L.meet[a, c], L.meet[b, c]].all()
                and R[L.join[a, c], L.join[b, c]].all())


def is_equivalence(R: np.ndarray) -> bool:
    Ri = R.astype(np.int64)
    return bool(np.diag(R).all() and (R == R.T).all() and (((Ri @ Ri) > 0) <= R).all())


def congruence_from_relation(L: Oml, R: np.ndarray) -> Congruence:
    if not (is_equivalence(R) and is_compatible(L, R)):
        raise RelationNotCongruence("relation is not a congruence")
    return Congruence(L, tuple(int(np.argmax(row)) for row in R))


def congruence_from_pideal(L: Oml, I: PIdeal, variant: SymDiffKind = DELTA) -> Congruence:
    """x ~ y iff the chosen symmetric difference of x and y lies in I."""
    if variant not in (DELTA, PLUS_L):
        raise ValueError(f"variant must be DELTA or PLUS_L, got {variant}")
    R = _member_mask(L, I.members)[sym_diff_table(L, variant)]
    return congruence_from_relation(L, R)


def kernel(theta: Congruence) -> PIdeal:
    L = theta.lattice
    return PIdeal(L, class_of(theta, L.bottom))


def class_of(theta: Congruence, a: int) -> frozenset[int]:
    block = theta.blocks[a]
    return frozenset(e for e, b in enumerate(theta.blocks) if b == block)


@dataclass(frozen=True)
class ClassFormulaReport:
    """Which congruence-class formulas hold for one p-ideal I and element a."""

    class_is_shift: bool         # [a] = I +l a
    class_is_join_form: bool     # [a] = a | (I & a')
    ideal_is_shift_back: bool    # I = [a] +l a
    ideal_is_self_diff: bool     # I = [a] D [a]
    shift_is_bijection: bool     # i -> i +l a is one-to-one from I onto [a]
    upper_part_is_join_form: bool = field(default=False, compare=False)  # [a] restricted to >= a

    @property
    def all_hold(self) -> bool:
        # the upper-part flag is diagnostic only
        return all((self.class_is_shift, self.class_is_join_form, self.ideal_is_shift_back,
                    self.ideal_is_self_diff, self.shift_is_bijection))


def class_formula_report(L: Oml, I: PIdeal, a: int, theta: Optional[Congruence] = None) -> ClassFormulaReport:
    if theta is None:
        theta = congruence_from_pideal(L, I)
    cls = class_of(theta, a)
    i = np.array(I.sorted())
    u = np.array(sorted(cls))
    shifted = sym_diff(L, PLUS_L, i, a).tolist()
    joined = frozenset(L.join[a, L.meet[i, L.ortho[a]]].tolist())
    return ClassFormulaReport(
        class_is_shift=cls == frozenset(shifted),
        class_is_join_form=cls == joined,
        ideal_is_shift_back=I.members == frozenset(sym_diff(L, PLUS_L, u, a).tolist()),
        ideal_is_self_diff=I.members == frozenset(sym_diff(L, DELTA, u[:, None], u[None, :]).ravel().tolist()),
        shift_is_bijection=len(set(shifted)) == len(i) == len(cls) and cls == frozenset(shifted),
        upper_part_is_join_form=joined == frozenset(e for e in cls if L.leq[a, e]),
    )


def class_formulas_check(L: Oml, I: PIdeal, a: int, theta: Optional[Congruence] = None) -> bool:
    """Check [a] = I +l a = a | (I & a') and I = [a] +l a = [a] D [a], with i -> i +l a one-to-one."""
    return class_formula_report(L, I, a, theta).all_hold


def kernel_conditions(L: Oml, S: Iterable[int]) -> KernelReport:
    """Evaluate the three kernel conditions on S independently."""
    s = _as_array(S)
    mask = _member_mask(L, s)
    if len(s) == 0:
        return KernelReport(False, True, True)
    subgroup = bool(mask[L.bottom] and mask[sym_diff(L, PLUS_L, s[:, None], s[None, :])].all())
    x = np.arange(L.size)[:, None]
    normal = bool(mask[sym_diff(L, PLUS_L, x, sym_diff(L, PLUS_L, s[None, :], x))].all())
    order_ideal = not (L.leq[:, s].any(axis=1) & ~mask).any()
    return KernelReport(subgroup, normal, bool(order_ideal))


def _downsets_with_bottom(L: Oml) -> list[frozenset[int]]:
    strictly_below = [frozenset(np.flatnonzero(L.leq[:, e]).tolist()) - {e} for e in range(L.size)]
    start = frozenset([L.bottom])
    seen = {start}
    stack = [start]
    while stack:
        S = stack.pop()
        for e in range(L.size):
            if e not in S and strictly_below[e] <= S:
                T = S | {e}
                if T not in seen:
                    seen.add(T)
                    stack.append(T)
    return sorted(seen, key=lambda m: (len(m), sorted(m)))


def kernel_caveat_search(L: Oml, max_size: int = 24) -> Optional[tuple[frozenset[int], KernelReport]]:
    """Least subset that is a +l-subalgebra and an order ideal with (x +l I) +l x in I, yet no kernel.

    Candidates are ordered by (size, sorted members); returns None if none exists.
    """
    if L.size > max_size:
        raise SizeGuardExceeded(f"subset search limited to {max_size} elements, got {L.size}")
    x = np.arange(L.size)[:, None]
    for S in _downsets_with_bottom(L):
        report = kernel_conditions(L, S)
        if not report.subgroup_ok:
            continue
        s = _as_array(S)
        swapped = sym_diff(L, PLUS_L, sym_diff(L, PLUS_L, x, s[None, :]), x)
        if _member_mask(L, s)[swapped].all() and not is_p_ideal(L, S):
            return S, report
    return None


def malcev_csakany_check(L: Oml) -> tuple[IdentityReport, IdentityReport]:
    """Check m(x, z, z) = x, m(x, x, z) = z and (m(x, y, z) = z iff x = y) for m = (x +l y) +l z."""

    def m(x, y, z):
        return sym_diff(L, PLUS_L, sym_diff(L, PLUS_L, x, y), z)

    def malcev(env):
        x, z = env["x"], env["z"]
        return (m(x, z, z) == x) & (m(x, x, z) == z)

    def csakany(env):
        x, y, z = env["x"], env["y"], env["z"]
        return (m(x, y, z) == z) == (x == y)

    names = ("x", "y", "z")
    return check_predicate(L, names, malcev), check_predicate(L, names, csakany)


@dataclass(frozen=True)
class CongruenceReport:
    ideals: tuple[PIdeal, ...]
    congruences: tuple[Congruence, ...]
    regular: bool
    uniform: bool
    permutable: bool


def _compose(R: np.ndarray, S: np.ndarray) -> np.ndarray:
    return (R.astype(np.int64) @ S.astype(np.int64)) > 0


def congruence_properties(L: Oml) -> CongruenceReport:
    ideals = all_p_ideals(L)
    congs = [congruence_from_pideal(L, I) for I in ideals]
    owners: dict[frozenset[int], set[int]] = {}
    for k, theta in enumerate(congs):
        for c in theta.classes():
            owners.setdefault(c, set()).add(k)
    regular = all(len(v) == 1 for v in owners.values())
    uniform = all(len({len(c) for c in theta.classes()}) == 1 for theta in congs)
    rels = [theta.relation() for theta in congs]
    permutable = all(np.array_equal(_compose(R, S), _compose(S, R))
                     for i, R in enumerate(rels) for S in rels[i + 1:])
    return CongruenceReport(tuple(ideals), tuple(congs), regular, uniform, permutable)


def brute_force_congruences(L: Oml, max_size: int = 8) -> list[Congruence]:
    """All congruences by scanning every set partition; an oracle independent of p-ideals."""
    if L.size > max_size:
        raise SizeGuardExceeded(f"partition scan limited to {max_size} elements, got {L.size}")
    out = []
    for partition in set_partitions(range(L.size)):
        label = np.empty(L.size, dtype=np.int64)
        for block in partition:
            label[block] = min(block)
        R = label[:, None] == label[None, :]
        if is_compatible(L, R):
            out.append(Congruence(L, tuple(label.tolist())))
    return sorted(out, key=lambda t: t.blocks)


def congruence_set(congs: Sequence[Congruence]) -> set[tuple[int, ...]]:
    return {t.blocks for t in congs}
