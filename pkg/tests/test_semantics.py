import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import MODELS, example_family
from folid.corpus import generate_corpus
from folid.errors import UnboundVariable
from folid.parser import parse_formula, parse_sequent, parse_signature
from folid.semantics import (
    FiniteStructure,
    apply_phi,
    check_standard,
    check_unfold_equivalence,
    compute_lfp,
    empty_family,
    eval_formula,
    eval_term,
    kleene_stages,
    sequent_counterexample,
    sequent_valid,
    stage_bound,
    standard_by_unfolding,
    standardize,
    unfold_formula,
)
from folid.syntax import Falsum, Or, Sequent, sequent_closure, subformulas

TWO_PREDS = ("sig const 0; func s 1; ind P 1; ind Q 1; rules rule p0: => P(0); "
             "rule ps: Q(x) => P(s(x)); rule qs: P(x), Q(x) => Q(s(x)); rule q0: P(x) => Q(x);")


def clamp_structure(sig, s_table=(1, 2, 2)):
    return FiniteStructure(sig, 3, {"0": 0}, {"s": tuple(s_table)}, {}, {"N": frozenset()})


def test_eval_term_clamp(example):
    sig, _ = example
    m = clamp_structure(sig)
    assert eval_term(parse_formula("0 = 0", sig).left, m) == 0
    for text, want in [("s(s(0)) = 0", 2), ("s(s(s(0))) = 0", 2)]:
        assert eval_term(parse_formula(text, sig).left, m) == want


def test_unbound_variable(example):
    sig, _ = example
    m = clamp_structure(sig)
    with pytest.raises(UnboundVariable):
        eval_formula(parse_formula("N(x)", sig), m)


def test_eval_formula_examples(example):
    sig, rules = example
    m = standardize(clamp_structure(sig), rules)
    assert eval_formula(parse_formula("forall x. N(x)", sig), m)
    assert not eval_formula(parse_formula("N(0) /\\ ~N(0)", sig), m)
    assert eval_formula(parse_formula("exists x. ~(x = 0)", sig), m)
    assert not eval_formula(Falsum(), m)


def test_apply_phi_examples(example):
    sig, rules = example
    m = clamp_structure(sig)
    one = apply_phi(m, rules, empty_family(sig))
    assert one == (frozenset({(0,)}),)
    assert apply_phi(m, rules, one) == (frozenset({(0,), (1,)}),)


def test_apply_phi_matches_direct_operator(nat, models):
    _, rules = nat
    for m in models.values():
        fams = kleene_stages(m, rules, upto=4)
        for fam in fams:
            assert apply_phi(m, rules, fam) == oracles.phi(m, rules, fam)


def _families(n, k):
    subsets = [frozenset((u,) for u in c) for r in range(n + 1) for c in itertools.combinations(range(n), r)]
    return list(itertools.product(subsets, repeat=k))


def test_monotone_exhaustive():
    sig, rules = parse_signature(TWO_PREDS)
    for n in (1, 2):
        fams = _families(n, 2)
        for table in itertools.product(range(n), repeat=n):
            for zero in range(n):
                m = FiniteStructure(sig, n, {"0": zero}, {"s": table}, {}, {"P": frozenset(), "Q": frozenset()})
                image = {x: apply_phi(m, rules, x) for x in fams}
                for x, y in itertools.product(fams, repeat=2):
                    if all(a <= b for a, b in zip(x, y)):
                        assert all(a <= b for a, b in zip(image[x], image[y]))


def test_lfp_examples(example):
    sig, rules = example
    clamp = clamp_structure(sig)
    assert compute_lfp(clamp, rules) == (frozenset({(0,), (1,), (2,)}),)
    stages = kleene_stages(clamp, rules)
    assert len(stages) - 1 == 3
    ident = clamp_structure(sig, (0, 1, 2))
    assert compute_lfp(ident, rules) == (frozenset({(0,)}),)
    no_rules = compute_lfp(clamp, ())
    assert no_rules == (frozenset(),)


def test_lfp_is_least_prefixpoint(example, family):
    _, rules = example
    for m in family:
        assert compute_lfp(m, rules) == oracles.least_prefixpoint(m, rules)


def test_seminaive_matches_naive(nat, family, example):
    for m in family:
        assert compute_lfp(m, example[1], "seminaive") == compute_lfp(m, example[1], "naive")
    sig, rules = nat
    for m in example_family(sig):
        m = FiniteStructure(sig, m.size, m.consts, m.funcs, {}, {p: frozenset() for p in sig.inductive_names})
        assert compute_lfp(m, rules, "seminaive") == compute_lfp(m, rules, "naive")


def test_kleene_chain_within_bound(nat, models):
    _, rules = nat
    for m in models.values():
        assert len(kleene_stages(m, rules)) - 1 <= stage_bound(m)


def test_check_standard_examples(example, nat, models):
    sig, rules = example
    clamp = standardize(clamp_structure(sig), rules)
    assert check_standard(clamp, rules)
    ident = clamp_structure(sig, (0, 1, 2))
    full = ident.with_family((frozenset({(0,), (1,), (2,)}),))
    assert not check_standard(full, rules)
    smaller = clamp.with_family((frozenset({(0,), (1,)}),))
    assert not check_standard(smaller, rules)
    nsig, nrules = nat
    for name in MODELS:
        assert check_standard(models[name], nrules)


def test_unfold_zero_is_falsum(example):
    sig, rules = example
    assert unfold_formula(sig, rules, "N", 0) == Falsum()
    assert str(unfold_formula(sig, rules, "N", 0)) == "false"


def test_unfold_one_keeps_falsum(example):
    sig, rules = example
    f = unfold_formula(sig, rules, "N", 1)
    assert isinstance(f, Or)
    assert str(f.left) == "x = 0"
    assert Falsum() in set(subformulas(f.right))


def test_unfold_two_meaning(example):
    sig, rules = example
    n2 = unfold_formula(sig, rules, "N", 2)
    ref = parse_formula("x = 0 \\/ exists y. (x = s(y) /\\ y = 0)", sig)
    for m in example_family(sig, 4):
        for u in range(m.size):
            assert eval_formula(n2, m, {"x": u}) == eval_formula(ref, m, {"x": u})


def test_unfold_equivalence_fixtures(nat, models, family, example):
    _, rules = nat
    for m in models.values():
        assert check_unfold_equivalence(m, rules, stage_bound(m)) == []
    assert check_unfold_equivalence(family[40], example[1], 0) == []


def test_standard_by_unfolding_agrees(example, family):
    _, rules = example
    for m in family[::5]:
        std = standardize(m, rules)
        assert standard_by_unfolding(std, rules)
        full = m.with_family((frozenset((u,) for u in m.universe),))
        assert standard_by_unfolding(full, rules) == check_standard(full, rules)


def test_sequent_valid_examples(example):
    sig, rules = example
    refl = parse_sequent("N(x) |- N(x)", sig)
    bare = parse_sequent("|- N(x)", sig)
    clamp = standardize(clamp_structure(sig), rules)
    ident = standardize(clamp_structure(sig, (0, 1, 2)), rules)
    assert sequent_valid(refl, clamp) and sequent_valid(refl, ident)
    assert sequent_valid(bare, clamp)
    assert not sequent_valid(bare, ident)
    assert sequent_counterexample(bare, ident) == {"x": 1}


def test_closure_agrees_with_validity(nat, models):
    sig, _ = nat
    texts = ["N(x) |- N(x)", "|- N(x)", "N(x) |- E(x), O(x)", "E(x) |- N(x)", "N(x), N(y) |- x = y",
             "|- forall x. (N(x) -> E(x) \\/ O(x))", "N(x) |-"]
    for text in texts:
        seq = parse_sequent(text, sig)
        for m in models.values():
            assert eval_formula(sequent_closure(seq, sig), m) == sequent_valid(seq, m)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10**6), which=st.sampled_from(MODELS))
def test_closure_agrees_on_random_sequents(nat, models, seed, which):
    sig, _ = nat
    forms = generate_corpus(sig, 3, depth=2, seed=seed)
    seq = Sequent(tuple(forms[:2]), tuple(forms[2:]))
    m = models[which]
    assert eval_formula(sequent_closure(seq, sig), m) == sequent_valid(seq, m)
