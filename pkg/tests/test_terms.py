import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from omlsym.catalog import boolean_algebra, mo, standard_catalog
from omlsym.lattice import SymDiffKind, sym_diff
from omlsym.terms import (
    Commutes, Join, Meet, One, Ortho, SymDiff, TermSyntaxError, UnboundVariable, Var, Zero,
    check_conditional, check_identity, commutes_hypothesis, eval_term, evaluate, exists_witness, expand,
    format_term, free_vars, parse, parse_equation,
)

K = SymDiffKind
x, y, z = Var("x"), Var("y"), Var("z")

leaves = st.one_of(st.sampled_from(["x", "y", "z"]).map(Var), st.just(Zero()), st.just(One()))
terms = st.recursive(
    leaves,
    lambda inner: st.one_of(
        inner.map(Ortho),
        st.builds(Meet, inner, inner),
        st.builds(Join, inner, inner),
        st.builds(SymDiff, st.sampled_from(list(K)), inner, inner),
    ),
    max_leaves=10,
)
lattices = st.sampled_from([n for n, L in standard_catalog().items() if L.size <= 24])


def has_symdiff(t):
    if isinstance(t, SymDiff):
        return True
    if isinstance(t, Ortho):
        return has_symdiff(t.arg)
    if isinstance(t, (Meet, Join)):
        return has_symdiff(t.left) or has_symdiff(t.right)
    return False


# parsing ---------------------------------------------------------------------

def test_parse_examples():
    assert parse("(x <+l> y) <+l> y") == SymDiff(K.PLUS_L, SymDiff(K.PLUS_L, x, y), y)
    assert parse("x & y'") == Meet(x, Ortho(y))
    assert parse("x | y & z") == Join(x, Meet(y, z))
    assert parse("x <+r'> y | z") == SymDiff(K.PLUS_RP, x, Join(y, z))
    assert parse("(x & y)''") == Ortho(Ortho(Meet(x, y)))
    assert parse("0 | 1") == Join(Zero(), One())
    assert parse("x_1 <n> y2") == SymDiff(K.NABLA, Var("x_1"), Var("y2"))


def test_every_operator_parses():
    for k in K:
        assert parse(f"x {k.operator} y") == SymDiff(k, x, y)


@pytest.mark.parametrize("text, pos", [
    ("x <+l> y <+l> z", 9),
    ("x <d> y <n> z", 8),
    ("x <+q> y", 2),
    ("x & ", 4),
    ("(x | y", 6),
    ("x $ y", 2),
    ("X", 0),
    ("x y", 2),
])
def test_parse_errors(text, pos):
    with pytest.raises(TermSyntaxError) as info:
        parse(text)
    assert info.value.pos == pos


def test_chain_error_message():
    with pytest.raises(TermSyntaxError, match="parentheses required"):
        parse("x <+l> y <+l> z")


def test_parse_equation():
    lhs, rhs = parse_equation("(x <+l> y) <+l> y = x")
    assert rhs == x and lhs.kind is K.PLUS_L
    with pytest.raises(TermSyntaxError):
        parse_equation("x = y = z")
    with pytest.raises(TermSyntaxError):
        parse_equation("x")


def test_positions_recorded():
    t = parse("x & y'")
    assert t.pos == 2 and t.right.pos == 5 and t.left.pos == 0


@given(terms)
def test_format_parse_round_trip(t):
    assert parse(format_term(t)) == t


# expansion and evaluation ----------------------------------------------------

def test_expand_examples():
    assert expand(SymDiff(K.DELTA, x, y)) == Meet(Join(x, y), Join(Ortho(x), Ortho(y)))
    assert expand(SymDiff(K.NABLA, x, y)) == Join(Meet(x, Ortho(y)), Meet(Ortho(x), y))
    assert expand(x) == x
    assert expand(SymDiff(K.PLUS_L, x, y)) == parse("(x | x' & y) & (x' | y')")
    assert expand(SymDiff(K.PLUS_R, x, y)) == parse("(x & y' | y) & (x' | y')")
    assert expand(SymDiff(K.PLUS_LP, x, y)) == parse("(x | y) & (x' | x & y')")
    assert expand(SymDiff(K.PLUS_RP, x, y)) == parse("(x | y) & (x' & y | y')")


@given(terms)
def test_expand_removes_symdiff_and_is_idempotent(t):
    e = expand(t)
    assert not has_symdiff(e)
    assert expand(e) == e
    assert free_vars(e) == free_vars(t)


@settings(max_examples=200)
@given(terms, lattices, st.data())
def test_expand_preserves_value(t, name, data):
    L = standard_catalog()[name]
    env = {v: data.draw(st.integers(0, L.size - 1)) for v in "xyz"}
    assert eval_term(L, expand(t), env) == eval_term(L, t, env)


def test_term_symdiff_matches_table_symdiff(any_lattice):
    L = any_lattice
    idx = np.arange(L.size)
    env = {"x": idx[:, None], "y": idx[None, :]}
    for k in K:
        assert np.array_equal(evaluate(L, SymDiff(k, x, y), env), sym_diff(L, k, idx[:, None], idx[None, :]))


def test_eval_examples():
    M = mo(2)
    assert eval_term(M, parse("x <d> y"), {"x": 1, "y": 2}) == 5
    assert eval_term(M, parse("x <+l> y"), {"x": 1, "y": 2}) == 1
    for L in (M, boolean_algebra(3)):
        for e in range(L.size):
            assert eval_term(L, parse("x & x'"), {"x": e}) == L.bottom


def test_unbound_variable():
    with pytest.raises(UnboundVariable):
        eval_term(mo(2), parse("x & y"), {"x": 1})


# checking --------------------------------------------------------------------

def test_check_identity_examples():
    r = check_identity(mo(2), *parse_equation("(x <+l> y) <+l> y = x"))
    assert r.holds and r.counterexample is None and r.tuples_checked == 36
    r = check_identity(mo(2), *parse_equation("x <+l> y = y <+l> x"))
    assert not r.holds and r.counterexample == {"x": 1, "y": 2}
    assert check_identity(boolean_algebra(2), *parse_equation("x <d> y = x <n> y")).holds


def test_counterexample_is_lexicographically_least():
    M = mo(3)
    lhs, rhs = parse_equation("x <+l> y = y <+l> x")
    r = check_identity(M, lhs, rhs)
    first = next((a, b) for a in range(M.size) for b in range(M.size)
                 if eval_term(M, lhs, {"x": a, "y": b}) != eval_term(M, rhs, {"x": a, "y": b}))
    assert (r.counterexample["x"], r.counterexample["y"]) == first
    assert r.tuples_checked == first[0] * M.size + first[1] + 1


def test_variables_ordered_alphabetically():
    # z is the first variable in text but second alphabetically
    r = check_identity(mo(2), *parse_equation("z <+l> a = a <+l> z"))
    assert r.counterexample == {"a": 1, "z": 2}


def test_closed_identity():
    assert check_identity(mo(2), *parse_equation("1' = 0")).tuples_checked == 1
    assert not check_identity(mo(2), *parse_equation("1 = 0")).holds


def test_conditional_examples():
    M3 = mo(3)
    hyps = [commutes_hypothesis(M3, "b", "a"), commutes_hypothesis(M3, "b", "c")]
    r = check_conditional(M3, hyps, *parse_equation("(b <+l> a) <+l> c = b <+l> (a <+l> c)"))
    assert r.holds and r.tuples_checked == 8 ** 3
    r = check_conditional(mo(2), [], *parse_equation("(x <d> y) <d> y = x <d> (y <d> y)"))
    assert r.counterexample == {"x": 1, "y": 2}
    assert not mo(2).commutation[1, 2]
    assert check_conditional(boolean_algebra(3), [], *parse_equation("(x <d> y) <d> z = x <d> (y <d> z)")).holds


def test_conditional_fails_without_hypotheses():
    r = check_identity(mo(3), *parse_equation("(b <+l> a) <+l> c = b <+l> (a <+l> c)"))
    assert not r.holds


def test_commutes_flag_and_equation_filter_identically(small_lattice):
    L = small_lattice
    eq = parse_equation("(b <d> a) <d> c = b <d> (a <d> c)")
    by_flag = check_conditional(L, [Commutes("b", "a"), Commutes("b", "c")], *eq)
    by_equation = check_conditional(L, [commutes_hypothesis(L, "b", "a"), commutes_hypothesis(L, "b", "c")], *eq)
    assert by_flag == by_equation


def test_exists_witness_examples():
    M = mo(2)
    assert exists_witness(M, "c", parse("a <d> c"), parse("b"), {"a": 1, "b": 2}) is None
    w = exists_witness(M, "c", parse("a <d> c"), parse("b <d> c"), {"a": 1, "b": 2})
    # scan by hand: c = 0, a, b give a/b, 0/1, 1/0; c = a' gives 1 = 1
    assert w == 3
    for L in (M, boolean_algebra(2), mo(4)):
        for a in range(L.size):
            assert exists_witness(L, "c", parse("a <d> c"), parse("a"), {"a": a}) == L.bottom


# identities over the catalog ---------------------------------------------------

CATALOG_IDENTITIES = [
    "(x <+l> y) <+l> y = x",
    "x <d> y = y <d> x",
    "x <d> y = x' <d> y'",
    "x <d> y = (x | y) <d> (x & y)",
    "x <n> y = (x <d> y')'",
    "x <d> y = (x <n> y')'",
    "x <+l> y = y <+r> x",
    "x <+l> y = x' <+l'> y'",
    "x <+l> y = y' <+r'> x'",
    "(x <+l> y)' = x' <+l> y",
    "x <+l> x = 0",
    "0 <+l> x = x",
    "1 <+l> x = x'",
]


@pytest.mark.parametrize("equation", CATALOG_IDENTITIES)
def test_identities_on_catalog(any_lattice, equation):
    assert check_identity(any_lattice, *parse_equation(equation)).holds
