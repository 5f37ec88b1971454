import json

import pytest

from conftest import FIXTURES, MODELS, NEGATIVE_PROOFS, POSITIVE_PROOFS, read
from folid.errors import (
    ArityMismatch,
    BudSequentMismatch,
    DanglingPremise,
    DuplicateSymbol,
    FolidError,
    FolidSyntaxError,
    OutOfUniverse,
    TableIncomplete,
    UndeclaredSymbol,
    UnknownRule,
)
from folid.parser import (
    parse_formula,
    parse_proof,
    parse_sequent,
    parse_signature,
    parse_structure,
    print_proof,
    print_signature,
    print_structure,
    structure_to_json,
)
from folid.syntax import App, Atom, Const, Forall, Imp, Or, And, Sequent, Var


def test_example_signature(example):
    sig, rules = example
    assert sig.constants == ("0",)
    assert sig.functions == (("s", 1),)
    assert sig.inductive_preds == (("N", 1),)
    assert [r.name for r in rules] == ["z", "sc"]
    assert rules[1].inductive == (Atom("N", (Var("x"),), True),)
    assert rules[1].args == (App("s", (Var("x"),)),)


@pytest.mark.parametrize("text, err", [
    ("sig ind N 1; rules rule bad: => N(x,y);", ArityMismatch),
    ("sig pred Q 1; ind P 1; rules rule r: Q(x), P(x) => P(s(x));", UndeclaredSymbol),
    ("sig const a; func a 1;", DuplicateSymbol),
    ("sig ind N 1 rules", FolidSyntaxError),
])
def test_signature_errors(text, err):
    with pytest.raises(err) as info:
        parse_signature(text)
    span = info.value.span
    assert span is not None
    assert 1 <= span.line <= text.count("\n") + 1
    assert 1 <= span.column <= len(text.splitlines()[span.line - 1]) + 1


def test_undeclared_symbol_names_it():
    with pytest.raises(UndeclaredSymbol, match="s"):
        parse_signature("sig pred Q 1; ind P 1; rules rule r: Q(x), P(x) => P(s(x));")


def test_signature_round_trip(nat):
    sig, rules = nat
    again = parse_signature(print_signature(sig, rules))
    assert again == (sig, rules)


def test_formula_precedence(nat):
    sig, _ = nat
    x = Var("x")
    f = parse_formula("forall x. N(x) -> N(s(x))", sig)
    assert f == Forall("x", Imp(Atom("N", (x,), True), Atom("N", (App("s", (x,)),), True)))
    abc, _ = parse_signature("sig pred a 0; pred b 0; pred c 0;")
    a, b, c = (Atom(n) for n in "abc")
    assert parse_formula("a /\\ b \\/ c", abc) == Or(And(a, b), c)
    assert parse_formula("a -> b -> c", abc) == Imp(a, Imp(b, c))


def test_sequent_parse(nat):
    sig, _ = nat
    n = Atom("N", (Var("x"),), True)
    assert parse_sequent("N(x) |- N(x)", sig) == Sequent((n,), (n,))


def test_formula_errors_carry_spans(nat):
    sig, _ = nat
    for text, err in [("N(x", FolidSyntaxError), ("Z(x)", UndeclaredSymbol), ("N(x, y)", ArityMismatch)]:
        with pytest.raises(err) as info:
            parse_formula(text, sig)
        assert info.value.span is not None
        assert 1 <= info.value.span.column <= len(text) + 1


@pytest.mark.parametrize("name", MODELS + ("nonstandard",))
def test_structure_round_trip(nat, name):
    sig, _ = nat
    m = parse_structure(read(f"{name}.model"), sig)
    assert parse_structure(print_structure(m), sig) == m
    assert structure_to_json(m) == json.loads(read(f"{name}.model"))


@pytest.mark.parametrize("patch, err", [
    ({"funcs": {"s": [1, 2]}}, TableIncomplete),
    ({"funcs": {"s": [1, 2, 7]}}, OutOfUniverse),
    ({"consts": {"0": 3}}, OutOfUniverse),
])
def test_structure_errors(nat, patch, err):
    sig, _ = nat
    data = json.loads(read("clamp.model"))
    data.update(patch)
    with pytest.raises(err):
        parse_structure(json.dumps(data), sig)


def test_structure_syntax_error(nat):
    with pytest.raises(FolidSyntaxError):
        parse_structure("{not json", nat[0])


def test_nat_refl_is_one_node(proofs):
    pg = proofs["nat_refl"]
    assert len(pg.nodes) == 1
    assert pg.nodes[pg.root].rule.name == "Axiom"


def test_even_odd_shape(proofs):
    pg = proofs["even_odd"]
    assert len(pg.nodes) == 12
    assert len(pg.buds()) == 1


@pytest.mark.parametrize("name", POSITIVE_PROOFS + NEGATIVE_PROOFS + ("bad_allr",))
def test_proof_round_trip(nat, name):
    sig, _ = nat
    pg = parse_proof(read(f"{name}.proof"), sig)
    again = parse_proof(print_proof(pg), sig)
    assert again.order == pg.order
    assert print_proof(again) == print_proof(pg)
    for nid in pg.order:
        a, b = pg.nodes[nid], again.nodes[nid]
        assert (a.sequent, a.rule, a.premises, a.companion) == (b.sequent, b.rule, b.premises, b.companion)


def test_bud_mismatch(nat):
    text = ("node n0: N(x) |- N(x) by Wk(seq=\"N(x) |- N(x)\") premises [n1];\n"
            "bud n1: N(y) |- N(y) companion n0;\n")
    with pytest.raises(BudSequentMismatch) as info:
        parse_proof(text, nat[0])
    assert info.value.span.line == 2


def test_dangling_premise(nat):
    with pytest.raises(DanglingPremise):
        parse_proof("node n0: N(x) |- N(x) by Wk(seq=\"N(x) |- N(x)\") premises [n9];", nat[0])


def test_unknown_rule(nat):
    with pytest.raises(UnknownRule):
        parse_proof("node n0: N(x) |- N(x) by Magic premises [];", nat[0])


def test_every_fixture_parses():
    sig, _ = parse_signature(read("nat.folid"))
    for path in sorted(FIXTURES.glob("*.proof")):
        try:
            parse_proof(path.read_text(), sig, path.name)
        except FolidError as e:  # pragma: no cover - reported with the file name
            pytest.fail(f"{path.name}: {e}")


def test_constant_printing(nat):
    sig, _ = nat
    assert str(parse_formula("N(s(0))", sig)) == "N(s(0))"
    assert parse_formula("0 = 0", sig).left == Const("0")
