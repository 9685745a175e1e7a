"""Standard finite OMLs and the ``oml v1`` lattice file format.

File format (UTF-8, LF, ``#`` comments)::

    oml v1
    elements: 6
    names: 0 a b a' b' 1
    covers: 0 1
    ...
    ortho: 5 3 4 1 2 0

``covers: i j`` means i is covered by j.  Bottom and top are inferred.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cache
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .lattice import Oml, RawLattice, validate

DEFAULT_MAX_SIZE = 4096
MAGIC = "oml v1"


class LatticeSizeError(ValueError):
    pass


class LatticeFileError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class LatticeSyntaxError(LatticeFileError):
    pass


class DanglingReference(LatticeFileError):
    pass


class DuplicateCover(LatticeFileError):
    pass


class OrthoNotPermutation(LatticeFileError):
    pass


def _check_size(size: int, max_size: int):
    if size > max_size:
        raise LatticeSizeError(f"lattice of {size} elements exceeds max size {max_size}")


def boolean_algebra(k: int, max_size: int = DEFAULT_MAX_SIZE) -> Oml:
    """The Boolean algebra 2^k; element index equals its bitmask."""
    if not 0 <= k <= 16:
        raise ValueError(f"exponent k={k} outside 0..16")
    n = 1 << k
    _check_size(n, max_size)
    idx = np.arange(n)
    leq = (idx[:, None] & ~idx[None, :]) == 0
    return validate(RawLattice(n, leq, tuple((~idx) & (n - 1))))


def _letters(n: int) -> list[str]:
    if n <= 26:
        return [chr(ord("a") + i) for i in range(n)]
    return [f"a{i + 1}" for i in range(n)]


def mo_raw(n: int) -> RawLattice:
    if n < 1:
        raise ValueError(f"MO(n) needs n >= 1, got {n}")
    size = 2 * n + 2
    top = size - 1
    covers = [(0, i) for i in range(1, size - 1)] + [(i, top) for i in range(1, size - 1)]
    ortho = [top] + [i + n for i in range(1, n + 1)] + [i - n for i in range(n + 1, 2 * n + 1)] + [0]
    atoms = _letters(n)
    names = ["0", *atoms, *(a + "'" for a in atoms), "1"]
    return RawLattice.from_covers(size, covers, ortho, names)


def mo(n: int) -> Oml:
    """MO_n: bottom, atoms a1..an, their complements a1'..an', top (in that index order)."""
    return validate(mo_raw(n))


def product(A: Oml, B: Oml, max_size: int = DEFAULT_MAX_SIZE) -> Oml:
    """Direct product; the pair (i, j) gets index i * B.size + j."""
    size = A.size * B.size
    _check_size(size, max_size)
    leq = np.kron(A.leq.astype(np.int8), B.leq.astype(np.int8)).astype(bool)
    ortho = (A.ortho[:, None] * B.size + B.ortho[None, :]).ravel()
    names = None
    if A.names is not None or B.names is not None:
        names = tuple(f"({A.name(i)},{B.name(j)})" for i in range(A.size) for j in range(B.size))
    return validate(RawLattice(size, leq, tuple(ortho), names))


def benzene() -> RawLattice:
    """The hexagon O6: 0 < a < b < 1 and 0 < b' < a' < 1; an ortholattice that is not orthomodular."""
    names = ("0", "a", "b", "b'", "a'", "1")
    covers = [(0, 1), (1, 2), (2, 5), (0, 3), (3, 4), (4, 5)]
    return RawLattice.from_covers(6, covers, (5, 4, 3, 2, 1, 0), names)


def cover_pairs(leq: np.ndarray) -> list[tuple[int, int]]:
    strict = leq & ~np.eye(len(leq), dtype=bool)
    via = (strict.astype(np.int64) @ strict.astype(np.int64)) > 0
    return [(int(i), int(j)) for i, j in np.argwhere(strict & ~via)]


def format_lattice(L: Union[Oml, RawLattice]) -> str:
    raw = L.raw if isinstance(L, Oml) else L
    lines = [MAGIC, f"elements: {raw.size}"]
    if raw.names is not None:
        lines.append("names: " + " ".join(raw.names))
    lines += [f"covers: {i} {j}" for i, j in cover_pairs(raw.leq)]
    lines.append("ortho: " + " ".join(str(v) for v in raw.ortho))
    return "\n".join(lines) + "\n"


_LINE = re.compile(r"^(\w+):\s*(.*)$")
_INT = re.compile(r"^\d+$")


def parse_lattice(text: str) -> RawLattice:
    size = None
    names = None
    covers: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    ortho = None
    magic_seen = False

    def indices(tokens, lineno):
        for tok in tokens:
            if not _INT.match(tok):
                raise LatticeSyntaxError(f"expected an element index, got {tok!r}", lineno)
        vals = [int(t) for t in tokens]
        for v in vals:
            if v >= size:
                raise DanglingReference(f"element {v} out of range 0..{size - 1}", lineno)
        return vals

    for lineno, line in enumerate(text.split("\n"), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if not magic_seen:
            if line != MAGIC:
                raise LatticeSyntaxError(f"expected {MAGIC!r} header", lineno)
            magic_seen = True
            continue
        m = _LINE.match(line)
        if m is None:
            raise LatticeSyntaxError(f"unrecognised line {line!r}", lineno)
        key, rest = m.group(1), m.group(2).split()
        if key == "elements":
            if size is not None or len(rest) != 1 or not _INT.match(rest[0]) or int(rest[0]) < 1:
                raise LatticeSyntaxError("'elements:' must appear once with a positive count", lineno)
            size = int(rest[0])
            continue
        if size is None:
            raise LatticeSyntaxError(f"{key!r} before 'elements:'", lineno)
        if key == "names":
            if names is not None or len(rest) != size or len(set(rest)) != size:
                raise LatticeSyntaxError(f"'names:' needs {size} distinct identifiers", lineno)
            names = tuple(rest)
        elif key == "covers":
            if len(rest) != 2:
                raise LatticeSyntaxError("'covers:' takes two indices", lineno)
            pair = tuple(indices(rest, lineno))
            if pair in seen:
                raise DuplicateCover(f"cover {pair} repeated", lineno)
            seen.add(pair)
            covers.append(pair)
        elif key == "ortho":
            if ortho is not None:
                raise LatticeSyntaxError("'ortho:' repeated", lineno)
            ortho = indices(rest, lineno)
            if sorted(ortho) != list(range(size)):
                raise OrthoNotPermutation(f"ortho must list a permutation of 0..{size - 1}", lineno)
        else:
            raise LatticeSyntaxError(f"unknown key {key!r}", lineno)

    if not magic_seen:
        raise LatticeSyntaxError(f"missing {MAGIC!r} header", 1)
    if size is None:
        raise LatticeSyntaxError("missing 'elements:'")
    if ortho is None:
        raise LatticeSyntaxError("missing 'ortho:'")
    return RawLattice.from_covers(size, covers, ortho, names)


def read_lattice(path) -> RawLattice:
    return parse_lattice(Path(path).read_text(encoding="utf-8"))


def write_lattice(L: Union[Oml, RawLattice], path) -> None:
    Path(path).write_bytes(format_lattice(L).encode("utf-8"))


# Lattice specs -----------------------------------------------------------


@dataclass(frozen=True)
class Boolean:
    k: int


@dataclass(frozen=True)
class MO:
    n: int


@dataclass(frozen=True)
class Product:
    left: "LatticeSpec"
    right: "LatticeSpec"


@dataclass(frozen=True)
class Free2:
    pass


@dataclass(frozen=True)
class Benzene:
    pass


@dataclass(frozen=True)
class File:
    path: str


LatticeSpec = Union[Boolean, MO, Product, Free2, Benzene, File]

_NAMED = re.compile(r"^(bool|mo)(\d+)$")


def parse_spec(text: str, nested: bool = False) -> LatticeSpec:
    """Parse ``bool<k>``, ``mo<n>``, ``free2``, ``benzene``, ``file:<path>`` or ``prod:<a>,<b>``."""
    if text.startswith("file:"):
        return File(text[5:])
    if text.startswith("prod:") and not nested:
        parts = text[5:].split(",")
        if len(parts) != 2:
            raise ValueError(f"prod: needs exactly two lattice names, got {text!r}")
        return Product(parse_spec(parts[0], True), parse_spec(parts[1], True))
    if text == "free2":
        return Free2()
    if text == "benzene":
        return Benzene()
    m = _NAMED.match(text)
    if m:
        k = int(m.group(2))
        return Boolean(k) if m.group(1) == "bool" else MO(k)
    raise ValueError(f"unknown lattice {text!r}")


def build_raw(spec: LatticeSpec, max_size: int = DEFAULT_MAX_SIZE) -> Union[Oml, RawLattice]:
    """Resolve a spec; returns an Oml for built-ins, a RawLattice for benzene and files."""
    if isinstance(spec, Boolean):
        return boolean_algebra(spec.k, max_size)
    if isinstance(spec, MO):
        _check_size(2 * spec.n + 2, max_size)
        return mo(spec.n)
    if isinstance(spec, Free2):
        from .free import make_free

        _check_size(96, max_size)
        return make_free()[0]
    if isinstance(spec, Benzene):
        _check_size(6, max_size)
        return benzene()
    if isinstance(spec, File):
        raw = read_lattice(spec.path)
        _check_size(raw.size, max_size)
        return raw
    if isinstance(spec, Product):
        return product(build(spec.left, max_size), build(spec.right, max_size), max_size)
    raise TypeError(spec)


def build(spec: LatticeSpec, max_size: int = DEFAULT_MAX_SIZE) -> Oml:
    L = build_raw(spec, max_size)
    return L if isinstance(L, Oml) else validate(L)


@cache
def standard_catalog() -> dict[str, Oml]:
    """bool0..bool4, mo1..mo4, prod(bool2,mo2) and free2, keyed by name."""
    from .free import make_free

    out = {f"bool{k}": boolean_algebra(k) for k in range(5)}
    out.update({f"mo{n}": mo(n) for n in range(1, 5)})
    out["prod:bool2,mo2"] = product(boolean_algebra(2), mo(2))
    out["free2"] = make_free()[0]
    return out
