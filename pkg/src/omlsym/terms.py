"""Terms over (meet, join, ortho, 0, 1) plus the six symmetric-difference operators.

Grammar, loosest first::

    equation := expr '=' expr
    expr     := join [SYMOP join]        # no chaining without parentheses
    join     := meet ('|' meet)*
    meet     := post ('&' post)*
    post     := atom "'"*
    atom     := VAR | '0' | '1' | '(' expr ')'

where SYMOP is one of ``<n> <d> <+l> <+r> <+l'> <+r'>``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Iterator, Mapping, Optional, Sequence, Union

import numpy as np

from .lattice import Oml, SymDiffKind


class TermSyntaxError(ValueError):
    def __init__(self, message: str, pos: int):
        self.pos = pos
        super().__init__(f"{message} at position {pos}")


class UnboundVariable(KeyError):
    pass


@dataclass(frozen=True)
class Var:
    name: str
    pos: Optional[int] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Zero:
    pos: Optional[int] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class One:
    pos: Optional[int] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Meet:
    left: "Term"
    right: "Term"
    pos: Optional[int] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Join:
    left: "Term"
    right: "Term"
    pos: Optional[int] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Ortho:
    arg: "Term"
    pos: Optional[int] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class SymDiff:
    kind: SymDiffKind
    left: "Term"
    right: "Term"
    pos: Optional[int] = field(default=None, compare=False, repr=False)


Term = Union[Var, Zero, One, Meet, Join, Ortho, SymDiff]


# Parsing ---------------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<symop><(?:n|d|\+l'|\+r'|\+l|\+r)>)
  | (?P<badop><[^>\s]*>?)
  | (?P<var>[a-z][a-z0-9_]*)
  | (?P<const>[01])
  | (?P<punct>[()&|'=])
""", re.VERBOSE)

_SYMOPS = {k.operator: k for k in SymDiffKind}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise TermSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind == "badop":
            raise TermSyntaxError(f"unknown operator {m.group()!r}", pos)
        if kind != "ws":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, text, pos = self.take()
        if text != value:
            found = "end of input" if kind == "end" else repr(text)
            raise TermSyntaxError(f"expected {value!r}, found {found}", pos)

    def finish(self):
        kind, text, pos = self.peek()
        if kind != "end":
            raise TermSyntaxError(f"unexpected {text!r}", pos)

    def expr(self) -> Term:
        left = self.join()
        kind, text, pos = self.peek()
        if kind != "symop":
            return left
        self.take()
        right = self.join()
        nxt = self.peek()
        if nxt[0] == "symop":
            raise TermSyntaxError(
                "parentheses required: symmetric differences are not associative", nxt[2])
        return SymDiff(_SYMOPS[text], left, right, pos)

    def join(self) -> Term:
        t = self.meet()
        while self.peek()[1] == "|":
            pos = self.take()[2]
            t = Join(t, self.meet(), pos)
        return t

    def meet(self) -> Term:
        t = self.post()
        while self.peek()[1] == "&":
            pos = self.take()[2]
            t = Meet(t, self.post(), pos)
        return t

    def post(self) -> Term:
        t = self.atom()
        while self.peek()[1] == "'":
            pos = self.take()[2]
            t = Ortho(t, pos)
        return t

    def atom(self) -> Term:
        kind, text, pos = self.take()
        if kind == "var":
            return Var(text, pos)
        if kind == "const":
            return Zero(pos) if text == "0" else One(pos)
        if text == "(":
            t = self.expr()
            self.expect(")")
            return t
        found = "end of input" if kind == "end" else repr(text)
        raise TermSyntaxError(f"expected a term, found {found}", pos)


def parse(text: str) -> Term:
    p = _Parser(text)
    t = p.expr()
    p.finish()
    return t


def parse_equation(text: str) -> tuple[Term, Term]:
    p = _Parser(text)
    lhs = p.expr()
    p.expect("=")
    rhs = p.expr()
    p.finish()
    return lhs, rhs


def format_term(t: Term) -> str:
    """Render ``t`` in the input grammar, parenthesising only where precedence demands."""

    def go(t, level):
        # levels: 0 symdiff operand context, 1 join, 2 meet, 3 postfix
        if isinstance(t, Var):
            return t.name
        if isinstance(t, Zero):
            return "0"
        if isinstance(t, One):
            return "1"
        if isinstance(t, Ortho):
            return go(t.arg, 3) + "'"
        if isinstance(t, Meet):
            s = f"{go(t.left, 2)} & {go(t.right, 3)}"
            return s if level <= 2 else f"({s})"
        if isinstance(t, Join):
            s = f"{go(t.left, 1)} | {go(t.right, 2)}"
            return s if level <= 1 else f"({s})"
        if isinstance(t, SymDiff):
            s = f"{go(t.left, 1)} {t.kind.operator} {go(t.right, 1)}"
            return s if level == 0 else f"({s})"
        raise TypeError(t)

    return go(t, 0)


# Structure -------------------------------------------------------------------

def free_vars(t: Term) -> frozenset[str]:
    if isinstance(t, Var):
        return frozenset([t.name])
    if isinstance(t, (Zero, One)):
        return frozenset()
    if isinstance(t, Ortho):
        return free_vars(t.arg)
    return free_vars(t.left) | free_vars(t.right)


def sym_diff_formula(kind: SymDiffKind, x: Term, y: Term) -> Term:
    """The lattice-term definition of each symmetric difference."""
    xp, yp = Ortho(x), Ortho(y)
    if kind is SymDiffKind.NABLA:
        return Join(Meet(x, yp), Meet(xp, y))
    if kind is SymDiffKind.DELTA:
        return Meet(Join(x, y), Join(xp, yp))
    if kind is SymDiffKind.PLUS_L:
        return Meet(Join(x, Meet(xp, y)), Join(xp, yp))
    if kind is SymDiffKind.PLUS_R:
        return Meet(Join(Meet(x, yp), y), Join(xp, yp))
    if kind is SymDiffKind.PLUS_LP:
        return Meet(Join(x, y), Join(xp, Meet(x, yp)))
    if kind is SymDiffKind.PLUS_RP:
        return Meet(Join(x, y), Join(Meet(xp, y), yp))
    raise ValueError(kind)


def expand(t: Term) -> Term:
    """Replace every SymDiff node by its lattice-term formula."""
    if isinstance(t, (Var, Zero, One)):
        return t
    if isinstance(t, Ortho):
        return Ortho(expand(t.arg))
    if isinstance(t, Meet):
        return Meet(expand(t.left), expand(t.right))
    if isinstance(t, Join):
        return Join(expand(t.left), expand(t.right))
    if isinstance(t, SymDiff):
        return sym_diff_formula(t.kind, expand(t.left), expand(t.right))
    raise TypeError(t)


# Evaluation ------------------------------------------------------------------

Assignment = Mapping[str, int]


def evaluate(L: Oml, t: Term, env: Mapping[str, Union[int, np.ndarray]]):
    """Evaluate bottom-up through L's tables; env values may be index arrays."""
    if isinstance(t, Var):
        try:
            return env[t.name]
        except KeyError:
            raise UnboundVariable(t.name) from None
    if isinstance(t, Zero):
        return L.bottom
    if isinstance(t, One):
        return L.top
    if isinstance(t, Ortho):
        return L.ortho[evaluate(L, t.arg, env)]
    a = evaluate(L, t.left, env)
    b = evaluate(L, t.right, env)
    if isinstance(t, Meet):
        return L.meet[a, b]
    if isinstance(t, Join):
        return L.join[a, b]
    if isinstance(t, SymDiff):
        # through the formula, so the term layer does not share code with lattice.sym_diff
        x, y = Var("\0x"), Var("\0y")
        return evaluate(L, sym_diff_formula(t.kind, x, y), {"\0x": a, "\0y": b})
    raise TypeError(t)


def eval_term(L: Oml, t: Term, env: Assignment) -> int:
    return int(evaluate(L, t, env))


# Exhaustive checking ---------------------------------------------------------

@dataclass(frozen=True)
class Commutes:
    """Hypothesis ``left C right`` tested through the lattice's definitional relation."""

    left: str
    right: str


Hypothesis = Union[tuple[Term, Term], Commutes]


@dataclass(frozen=True)
class IdentityReport:
    holds: bool
    counterexample: Optional[dict[str, int]]
    tuples_checked: int


CHUNK = 1 << 20


def _chunks(L: Oml, names: Sequence[str]) -> Iterator[tuple[int, dict[str, np.ndarray], int]]:
    shape = (L.size,) * len(names)
    total = L.size ** len(names)
    for start in range(0, total, CHUNK):
        flat = np.arange(start, min(start + CHUNK, total))
        coords = np.unravel_index(flat, shape) if names else ()
        yield start, dict(zip(names, coords)), len(flat)


def _holds(L: Oml, hyp: Hypothesis, env) -> np.ndarray:
    if isinstance(hyp, Commutes):
        return L.commutation[env[hyp.left], env[hyp.right]]
    lhs, rhs = hyp
    return np.asarray(evaluate(L, lhs, env) == evaluate(L, rhs, env))


def _hyp_vars(hyp: Hypothesis) -> frozenset[str]:
    if isinstance(hyp, Commutes):
        return frozenset([hyp.left, hyp.right])
    return free_vars(hyp[0]) | free_vars(hyp[1])


def check_predicate(L: Oml, names: Sequence[str], predicate: Callable[[dict], np.ndarray]) -> IdentityReport:
    """Scan all assignments of ``names`` in lexicographic order; report the first where predicate is false.

    ``predicate`` receives a dict of equally-shaped index arrays and returns a
    Boolean array.  ``tuples_checked`` counts assignments up to and including
    the reported one.
    """
    names = sorted(names)
    total = 0
    for start, env, count in _chunks(L, names):
        ok = np.broadcast_to(predicate(env), (count,))
        bad = np.flatnonzero(~ok)
        if len(bad):
            k = int(bad[0])
            return IdentityReport(False, {v: int(env[v][k]) for v in names}, start + k + 1)
        total += count
    return IdentityReport(True, None, total)


def check_conditional(L: Oml, hypotheses: Sequence[Hypothesis], lhs: Term, rhs: Term) -> IdentityReport:
    """Check lhs = rhs on every assignment satisfying all hypotheses.

    Assignments run in lexicographic order (variables alphabetical, elements
    by index); the first violation is reported.  Filtered assignments still
    count towards ``tuples_checked``.
    """
    names = free_vars(lhs) | free_vars(rhs) | frozenset().union(*map(_hyp_vars, hypotheses))

    def predicate(env):
        ok = np.asarray(evaluate(L, lhs, env) == evaluate(L, rhs, env))
        for hyp in hypotheses:
            ok = ok | ~_holds(L, hyp, env)
        return ok

    return check_predicate(L, names, predicate)


def check_identity(L: Oml, lhs: Term, rhs: Term) -> IdentityReport:
    return check_conditional(L, (), lhs, rhs)


def commutes_hypothesis(L: Oml, u: str, v: str) -> Hypothesis:
    """``u C v`` as the equation u = (u & v) | (u & v') when that is known to be exact on L."""
    from .lattice import shortcut_agrees

    if shortcut_agrees(L):
        x, y = Var(u), Var(v)
        return (x, Join(Meet(x, y), Meet(x, Ortho(y))))
    return Commutes(u, v)


def exists_witness(L: Oml, var: str, lhs: Term, rhs: Term, env: Assignment) -> Optional[int]:
    """Least element that, bound to ``var``, makes lhs = rhs under env."""
    full = dict(env)
    full[var] = np.arange(L.size)
    ok = np.broadcast_to(evaluate(L, lhs, full) == evaluate(L, rhs, full), (L.size,))
    hits = np.flatnonzero(ok)
    return int(hits[0]) if len(hits) else None
