import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import example_family
from folid.corpus import generate_corpus, random_formula, random_term
from folid.errors import NoClosedTerm
from folid.parser import parse_formula, parse_sequent
from folid.semantics import assignments, eval_formula, eval_term, sequent_valid
from folid.syntax import (
    App,
    Atom,
    Const,
    Eq,
    Forall,
    Imp,
    Not,
    Sequent,
    Signature,
    Var,
    free_vars,
    sequent_closure,
    substitute,
)

ZERO = Const("0")


def s(t):
    return App("s", (t,))


def N(t):
    return Atom("N", (t,), True)


@pytest.fixture(scope="module")
def small_family(example):
    sig, rules = example
    from folid.semantics import standardize
    return [standardize(m, rules) for m in example_family(sig)]


def test_substitute_replaces_free_occurrence():
    assert substitute(s(Var("x")), {"x": ZERO}) == s(ZERO)


def test_substitute_leaves_bound_occurrence():
    f = Forall("x", N(Var("x")))
    assert substitute(f, {"x": ZERO}) == f


def test_substitute_renames_to_avoid_capture():
    f = Forall("y", Eq(Var("y"), Var("x")))
    g = substitute(f, {"x": s(Var("y"))})
    assert isinstance(g, Forall) and g.var != "y"
    assert g.body == Eq(Var(g.var), s(Var("y")))
    assert free_vars(g) == {"y"}


def test_free_vars():
    assert free_vars(s(Var("x"))) == {"x"}
    assert free_vars(Forall("x", N(Var("x")))) == frozenset()
    assert free_vars(Sequent((N(Var("x")),), (N(s(Var("y"))),))) == {"x", "y"}


def test_alpha_equivalent_formulas_are_equal():
    assert Forall("x", N(Var("x"))) == Forall("z", N(Var("z")))
    assert Forall("x", N(Var("x"))) != Forall("x", N(Var("y")))


def test_sequent_set_semantics():
    a, b = N(Var("x")), N(Var("y"))
    assert Sequent((a, b, a), ()) == Sequent((b, a), ())
    assert len(Sequent((a, a), ()).antecedent) == 1


def test_sequent_closure_examples(example):
    sig, _ = example
    x = Var("x")
    assert sequent_closure(Sequent((N(x),), (N(x),)), sig) == Forall("x", Imp(N(x), N(x)))
    assert sequent_closure(Sequent((), (Eq(ZERO, ZERO),)), sig) == Eq(ZERO, ZERO)
    assert sequent_closure(Sequent((N(x),), ()), sig) == Forall("x", Imp(N(x), Not(Eq(ZERO, ZERO))))


def test_sequent_closure_needs_a_closed_term():
    bare = Signature(inductive_preds=(("P", 1),))
    with pytest.raises(NoClosedTerm):
        sequent_closure(Sequent((Atom("P", (Var("x"),), True),), ()), bare)


def test_empty_succedent_closure_agrees_with_validity(example, small_family):
    sig, _ = example
    seq = Sequent((N(Var("x")),), ())
    for m in small_family:
        assert eval_formula(sequent_closure(seq, sig), m) == sequent_valid(seq, m)


def _check_substitution_by_evaluation(f, theta, structures):
    g = substitute(f, theta)
    for m in structures:
        for rho in assignments(free_vars(f) | free_vars(g) | set().union(*(free_vars(t) for t in theta.values())), m):
            moved = dict(rho)
            moved.update({x: eval_term(t, m, rho) for x, t in theta.items()})
            if eval_formula(g, m, rho) != eval_formula(f, m, moved):
                return False
    return True


def test_capture_avoidance_example_by_evaluation(small_family):
    f = Forall("y", Eq(Var("y"), Var("x")))
    assert _check_substitution_by_evaluation(f, {"x": s(Var("y"))}, small_family)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 10**6))
def test_substitution_preserves_meaning(example, small_family, seed):
    sig, _ = example
    rng = random.Random(seed)
    f = random_formula(rng, sig, 3, ("x", "y"), ("x", "y", "z"), term_depth=1)
    t = random_term(rng, sig, ("x", "y", "z"), 0, 1)
    assert _check_substitution_by_evaluation(f, {"x": t}, small_family[::7])


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10**6))
def test_sequential_substitution_composes(example, small_family, seed):
    sig, _ = example
    rng = random.Random(seed)
    f = random_formula(rng, sig, 3, ("x", "y"), ("x", "y", "z"), term_depth=1)
    t1 = random_term(rng, sig, ("z",), 0, 1)
    t2 = random_term(rng, sig, ("z",), 0, 1)
    once = substitute(substitute(f, {"x": t1}), {"y": t2})
    both = substitute(f, {"x": t1, "y": t2})
    for m in small_family[::9]:
        for rho in assignments(free_vars(once) | free_vars(both), m):
            assert eval_formula(once, m, rho) == eval_formula(both, m, rho)


def test_closed_formulas_are_fixed_by_substitution(example):
    sig, _ = example
    for f in generate_corpus(sig, 50, seed=3):
        assert free_vars(f) == frozenset()
        assert substitute(f, {"x": ZERO, "y": s(ZERO)}) == f


def test_printed_sequents_parse_back(nat):
    sig, _ = nat
    for text in ["N(x) |- N(x)", "N(x), E(y) |- O(s(x)), x = y", "|- forall x. (N(x) -> E(x) \\/ O(x))"]:
        seq = parse_sequent(text, sig)
        assert parse_sequent(str(seq), sig) == seq
    assert parse_formula("~N(0)", sig) == Not(N(ZERO))
