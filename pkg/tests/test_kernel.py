import pytest

from conftest import NEGATIVE_PROOFS, POSITIVE_PROOFS, load_proof
from folid.errors import BadParameters, FreshnessViolation, NoSuchProductionRule
from folid.kernel import (
    RuleInstance,
    case_rules,
    check_local,
    expected_premises,
    mutually_dependent,
    unfold_tree,
)
from folid.parser import parse_formula, parse_proof, parse_sequent, parse_signature, parse_term


@pytest.fixture(scope="module")
def ex(nat):
    sig, rules = nat

    def seq(text):
        return parse_sequent(text, sig)

    def premises(conc, name, **kw):
        pred = kw.pop("pred", None)
        r = kw.pop("r", None)
        return expected_premises(seq(conc), RuleInstance(name, kw, pred, r), sig, rules)

    return seq, premises, sig


def test_case_on_N(ex):
    seq, premises, _ = ex
    got = premises("E(y), N(s(y)) |- O(y)", "Case", pred="N", p=1, fresh=[[], ["x"]])
    assert got == [seq("E(y), s(y) = 0 |- O(y)"), seq("E(y), s(y) = s(x), N(x) |- O(y)")]


def test_case_keep_principal(ex):
    seq, premises, _ = ex
    got = premises("N(t0) |- ", "Case", pred="N", p=0, fresh=[[], ["x"]], keep=True)
    assert got[1] == seq("N(t0), t0 = s(x), N(x) |-")


def test_case_over_mutual_scc(ex, nat):
    seq, premises, sig = ex
    _, rules = nat
    assert mutually_dependent(sig, rules, "E") == ("E", "O")
    assert mutually_dependent(sig, rules, "N") == ("N",)
    assert [r.name for r in case_rules(sig, rules, "E")] == ["e0", "es", "os"]
    got = premises("E(x) |- N(x)", "Case", pred="E", p=0, fresh=[[], ["y"], ["y"]])
    assert got == [seq("x = 0 |- N(x)"), seq("x = s(y), O(y) |- N(x)"), seq("x = s(y), E(y) |- N(x)")]


def test_case_freshness(ex):
    _, premises, sig = ex
    with pytest.raises(FreshnessViolation):
        premises("N(x), E(y) |- ", "Case", pred="N", p=parse_formula("N(x)", sig), fresh=[[], ["y"]])


def test_case_wrong_number_of_cases(ex):
    _, premises, _ = ex
    with pytest.raises(BadParameters):
        premises("N(x) |- ", "Case", pred="N", p=0, fresh=[[]])


def test_case_arity_mismatch_in_scc():
    sig, rules = parse_signature("sig const 0; ind P 1; ind R 2; rules rule a: R(x, x) => P(x); "
                                 "rule b: P(x) => R(x, 0);")
    conc = parse_sequent("P(0) |-", sig)
    with pytest.raises(BadParameters):
        expected_premises(conc, RuleInstance("Case", {"p": 0, "fresh": [["y"], ["y"]]}, "P"), sig, rules)


def test_indr_succ(ex):
    seq, premises, sig = ex
    got = premises("E(z) |- N(s(s(z))), O(z)", "IndR", pred="N", r=2, args=[parse_term("s(z)", sig)])
    assert got == [seq("E(z) |- N(s(z)), O(z)")]


def test_indr_unknown_rule(ex):
    _, premises, _ = ex
    with pytest.raises(NoSuchProductionRule):
        premises("|- N(0)", "IndR", pred="N", r=3)


def test_axiom(ex):
    _, premises, _ = ex
    assert premises("N(x) |- N(x)", "Axiom") == []
    with pytest.raises(BadParameters):
        premises("N(x) |- E(x)", "Axiom")


def test_propositional_rules(ex):
    seq, premises, sig = ex
    f = lambda t: parse_formula(t, sig)  # noqa: E731
    assert premises("~N(x) |- E(x)", "NegL", p=0) == [seq("|- E(x), N(x)")]
    assert premises("|- ~N(x)", "NegR", p=0) == [seq("N(x) |-")]
    assert premises("N(x) \\/ E(x) |- O(x)", "OrL", p=0) == [seq("N(x) |- O(x)"), seq("E(x) |- O(x)")]
    assert premises("|- N(x) /\\ E(x)", "AndR", p=0) == [seq("|- N(x)"), seq("|- E(x)")]
    assert premises("N(x) -> E(x) |- O(x)", "ImpL", p=0) == [seq("|- O(x), N(x)"), seq("E(x) |- O(x)")]
    assert premises("|- N(0)", "Cut", cut=f("E(0)")) == [seq("|- N(0), E(0)"), seq("E(0) |- N(0)")]


def test_quantifier_rules(ex):
    seq, premises, sig = ex
    t = parse_term("s(0)", sig)
    assert premises("forall x. N(x) |- ", "AllL", p=0, t=t) == [seq("N(s(0)) |-")]
    assert premises("|- exists x. N(x)", "ExR", p=0, t=t) == [seq("|- N(s(0))")]
    assert premises("exists x. N(x) |- E(y)", "ExL", p=0, x="z") == [seq("N(z) |- E(y)")]
    with pytest.raises(FreshnessViolation):
        premises("exists x. N(x) |- E(y)", "ExL", p=0, x="y")


def test_eq_rules(ex):
    seq, premises, sig = ex
    assert premises("|- s(0) = s(0)", "EqR") == []
    got = premises("x = 0, N(x) |- E(x)", "EqL", seq=seq("N(a) |- E(a)"), x="a", y="b",
                   t=parse_term("x", sig), u=parse_term("0", sig))
    assert got == [seq("N(0) |- E(0)")]


def test_structural_rules(ex):
    seq, premises, sig = ex
    assert premises("N(x), E(x) |- O(x)", "Wk", seq=seq("N(x) |- O(x)")) == [seq("N(x) |- O(x)")]
    with pytest.raises(BadParameters):
        premises("N(x) |- O(x)", "Wk", seq=seq("E(x) |- O(x)"))
    theta = {"y": parse_term("s(x)", sig)}
    assert premises("N(s(x)) |- ", "Subst", theta=theta, seq=seq("N(y) |-")) == [seq("N(y) |-")]


def test_expected_premises_is_deterministic(ex):
    _, premises, _ = ex
    a = premises("E(x) |- N(x)", "Case", pred="E", p=0, fresh=[[], ["y"], ["y"]])
    b = premises("E(x) |- N(x)", "Case", pred="E", p=0, fresh=[[], ["y"], ["y"]])
    assert a == b


@pytest.mark.parametrize("name", POSITIVE_PROOFS + NEGATIVE_PROOFS)
def test_fixtures_are_locally_valid(proofs, nat, name):
    sig, rules = nat
    assert check_local(proofs[name], sig, rules) == []


def test_bad_allr(nat):
    sig, rules = nat
    report = check_local(load_proof("bad_allr", sig), sig, rules)
    assert [(v.node, v.violation) for v in report] == [("n0", "FreshnessViolation")]
    assert set(report[0].to_json()) == {"node", "rule", "violation", "detail"}


def test_premise_mismatch_and_shared_nodes(nat):
    sig, rules = nat
    text = ('node n0: |- N(0) /\\ N(0) by AndR(p=0) premises [n1, n1];\n'
            'node n1: |- N(0) by IndR(N,1) premises [];\n')
    pg = parse_proof(text, sig)
    kinds = {v.violation for v in check_local(pg, sig, rules)}
    assert "SharedNode" in kinds
    text = ('node n0: |- N(s(0)) by IndR(N,2)(args=["0"]) premises [n1];\n'
            'node n1: |- N(s(0)) by IndR(N,2)(args=["0"]) premises [n2];\n'
            'node n2: |- N(0) by IndR(N,1) premises [];\n')
    report = check_local(parse_proof(text, sig), sig, rules)
    assert [(v.node, v.violation) for v in report] == [("n0", "PremiseMismatch")]


def test_unreachable(nat):
    sig, rules = nat
    text = ('node n0: N(x) |- N(x) by Axiom premises [];\n'
            'node n1: N(y) |- N(y) by Axiom premises [];\n')
    report = check_local(parse_proof(text, sig), sig, rules)
    assert [(v.node, v.violation) for v in report] == [("n1", "Unreachable")]


def _walk(t):
    yield t
    for c in t.children:
        yield from _walk(c)


def test_unfold_tree(proofs):
    eo = proofs["even_odd"]
    base = unfold_tree(eo, 0)
    assert base.size() == 12
    companion = next(n for n in _walk(base) if n.id == "n3")
    loop = companion.size()
    # each expansion swaps the bud leaf for a fresh copy of the companion subtree
    assert unfold_tree(eo, 1).size() == base.size() - 1 + loop
    assert unfold_tree(eo, 2).size() == base.size() + 2 * (loop - 1)
    refl = proofs["nat_refl"]
    for d in range(4):
        assert unfold_tree(refl, d).size() == 1


def test_unfold_tree_rejects_negative(proofs):
    with pytest.raises(ValueError):
        unfold_tree(proofs["nat_refl"], -1)
