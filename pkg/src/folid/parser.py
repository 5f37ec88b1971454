"""Readers and printers for the external formats.

``.folid``   signature declarations followed by production rules
``.model``   JSON finite structure
``.proof``   cyclic proof graph, one node per line

Formula syntax: ``~A``, ``A /\\ B``, ``A \\/ B``, ``A -> B``, ``forall x. A``,
``exists x. A``, ``t = u``, ``t != u``, ``P(t1, ...)``, ``false``.  Negation binds
tightest, then conjunction, disjunction, and right-associative implication;
quantifier bodies extend as far as possible.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Any

from .errors import (
    ArityMismatch,
    BudSequentMismatch,
    DanglingPremise,
    DuplicateSymbol,
    FolidError,
    FolidSyntaxError,
    OutOfUniverse,
    SourceSpan,
    TableIncomplete,
    UndeclaredSymbol,
    UnknownRule,
)
from .syntax import (
    NAME_CONST_RE,
    And,
    App,
    Atom,
    Const,
    Eq,
    Exists,
    Falsum,
    Forall,
    Formula,
    Imp,
    NameConst,
    Not,
    Or,
    ProductionRule,
    Sequent,
    Signature,
    Term,
    Var,
)

KEYWORDS = {"forall", "exists", "false"}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<string>"[^"\n]*")
  | (?P<op>\|-|->|=>|/\\|\\/|!=|:=|[~(),.=;:\[\]+*])
  | (?P<name>[A-Za-z0-9_][A-Za-z0-9_']*)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "op", "name", "string", "eof"
    text: str
    line: int
    col: int


def tokenize(text: str, file: str = "<input>", line: int = 1, col: int = 1) -> list[Token]:
    toks: list[Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise FolidSyntaxError(f"unexpected character {text[pos]!r}",
                                   SourceSpan(file, line, col, 1))
        kind = m.lastgroup
        s = m.group()
        if kind == "nl":
            line += 1
            col = 1
        else:
            if kind in ("op", "name", "string"):
                toks.append(Token(kind, s, line, col))
            col += len(s)
        pos = m.end()
    toks.append(Token("eof", "", line, col))
    return toks


class Parser:
    """Recursive-descent parser over a token list, resolving symbols against ``sig``."""

    def __init__(self, text: str, sig: Signature, file: str = "<input>",
                 line: int = 1, col: int = 1):
        self.sig = sig
        self.file = file
        self.toks = tokenize(text, file, line, col)
        self.pos = 0

    # -- token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.pos]

    def span(self, tok: Token | None = None) -> SourceSpan:
        t = tok or self.tok
        return SourceSpan(self.file, t.line, t.col, max(1, len(t.text)))

    def at(self, text: str) -> bool:
        return self.tok.kind in ("op", "name") and self.tok.text == text

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.pos += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        if not self.at(text):
            found = self.tok.text or "end of input"
            raise FolidSyntaxError(f"expected {text!r}, found {found!r}", self.span())
        t = self.tok
        self.pos += 1
        return t

    def expect_name(self, what: str = "name") -> Token:
        if self.tok.kind != "name":
            found = self.tok.text or "end of input"
            raise FolidSyntaxError(f"expected {what}, found {found!r}", self.span())
        t = self.tok
        self.pos += 1
        return t

    def expect_eof(self) -> None:
        if self.tok.kind != "eof":
            raise FolidSyntaxError(f"unexpected {self.tok.text!r}", self.span())

    # -- terms
    def term(self) -> Term:
        left = self.product()
        while self.at("+"):
            op = self.tok
            self.pos += 1
            self._check_infix(op)
            left = App("+", (left, self.product()))
        return left

    def product(self) -> Term:
        left = self.primary_term()
        while self.at("*"):
            op = self.tok
            self.pos += 1
            self._check_infix(op)
            left = App("*", (left, self.primary_term()))
        return left

    def _check_infix(self, op: Token) -> None:
        arity = self.sig.function_arity(op.text)
        if arity is None:
            raise UndeclaredSymbol(f"function {op.text!r} is not declared", self.span(op))
        if arity != 2:
            raise ArityMismatch(f"{op.text!r} has arity {arity}, used with 2", self.span(op))

    def primary_term(self) -> Term:
        if self.accept("("):
            t = self.term()
            self.expect(")")
            return t
        tok = self.expect_name("term")
        name = tok.text
        if self.at("("):
            arity = self.sig.function_arity(name)
            if arity is None:
                if self.sig.pred_arity(name) is not None:
                    raise FolidSyntaxError(f"predicate {name!r} used as a function", self.span(tok))
                raise UndeclaredSymbol(f"function {name!r} is not declared", self.span(tok))
            self.pos += 1
            args = [self.term()]
            while self.accept(","):
                args.append(self.term())
            self.expect(")")
            if len(args) != arity:
                raise ArityMismatch(f"{name} expects {arity} argument(s), got {len(args)}",
                                    self.span(tok))
            return App(name, tuple(args))
        m = NAME_CONST_RE.match(name)
        if m:
            return NameConst(int(m.group(1)))
        if self.sig.is_constant(name):
            return Const(name)
        if self.sig.function_arity(name) is not None:
            raise ArityMismatch(f"function {name} used without arguments", self.span(tok))
        if self.sig.pred_arity(name) is not None:
            raise FolidSyntaxError(f"predicate {name!r} used as a term", self.span(tok))
        if name in KEYWORDS:
            raise FolidSyntaxError(f"keyword {name!r} used as a term", self.span(tok))
        if not name[0].isalpha():
            raise UndeclaredSymbol(f"constant {name!r} is not declared", self.span(tok))
        return Var(name)

    # -- formulas
    def formula(self) -> Formula:
        left = self.disjunction()
        if self.accept("->"):
            return Imp(left, self.formula())
        return left

    def disjunction(self) -> Formula:
        left = self.conjunction()
        while self.accept("\\/"):
            left = Or(left, self.conjunction())
        return left

    def conjunction(self) -> Formula:
        left = self.unary()
        while self.accept("/\\"):
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        if self.accept("~"):
            return Not(self.unary())
        if self.at("forall") or self.at("exists"):
            q = self.tok.text
            self.pos += 1
            vtok = self.expect_name("bound variable")
            self._check_var(vtok)
            self.expect(".")
            body = self.formula()
            return Forall(vtok.text, body) if q == "forall" else Exists(vtok.text, body)
        return self.atomic()

    def _check_var(self, tok: Token) -> None:
        name = tok.text
        if name in self.sig.symbols() or name in KEYWORDS or NAME_CONST_RE.match(name) \
                or not name[0].isalpha():
            raise FolidSyntaxError(f"{name!r} cannot be used as a variable", self.span(tok))

    def atomic(self) -> Formula:
        if self.accept("false"):
            return Falsum()
        if self.at("("):
            save = self.pos
            try:
                return self.equation()
            except FolidError:
                self.pos = save
            self.expect("(")
            f = self.formula()
            self.expect(")")
            return f
        tok = self.tok
        if tok.kind == "name":
            arity = self.sig.pred_arity(tok.text)
            if arity is not None:
                self.pos += 1
                args: list[Term] = []
                if self.accept("("):
                    args.append(self.term())
                    while self.accept(","):
                        args.append(self.term())
                    self.expect(")")
                if len(args) != arity:
                    raise ArityMismatch(
                        f"{tok.text} expects {arity} argument(s), got {len(args)}",
                        self.span(tok))
                return Atom(tok.text, tuple(args), self.sig.is_inductive(tok.text))
        return self.equation()

    def equation(self) -> Formula:
        left = self.term()
        if self.accept("="):
            return Eq(left, self.term())
        if self.accept("!="):
            return Not(Eq(left, self.term()))
        raise FolidSyntaxError(f"expected '=' after term, found {self.tok.text!r}", self.span())

    def formula_list(self, stop: tuple[str, ...]) -> list[Formula]:
        out: list[Formula] = []
        if any(self.at(s) for s in stop) or self.tok.kind == "eof":
            return out
        out.append(self.formula())
        while self.accept(","):
            out.append(self.formula())
        return out

    def sequent(self, stop: tuple[str, ...] = ()) -> Sequent:
        left = self.formula_list(("|-",))
        self.expect("|-")
        right = self.formula_list(stop)
        return Sequent(tuple(left), tuple(right))


# ---------------------------------------------------------------------------
# formulas, terms and sequents from strings


def parse_term(text: str, sig: Signature, file: str = "<term>") -> Term:
    p = Parser(text, sig, file)
    t = p.term()
    p.expect_eof()
    return t


def parse_formula(text: str, sig: Signature, file: str = "<formula>") -> Formula:
    p = Parser(text, sig, file)
    f = p.formula()
    p.expect_eof()
    return f


def parse_sequent(text: str, sig: Signature, file: str = "<sequent>") -> Sequent:
    p = Parser(text, sig, file)
    s = p.sequent()
    p.expect_eof()
    return s


# ---------------------------------------------------------------------------
# signature + production rules


_DECL_KINDS = ("const", "func", "pred", "ind", "names")


def parse_signature(text: str, file: str = "<signature>") -> tuple[Signature, tuple[ProductionRule, ...]]:
    toks = tokenize(text, file)
    pos = 0

    def span(t: Token) -> SourceSpan:
        return SourceSpan(file, t.line, t.col, max(1, len(t.text)))

    def take(kind: str | None = None, text_: str | None = None, what: str = "") -> Token:
        nonlocal pos
        t = toks[pos]
        if (kind and t.kind != kind) or (text_ is not None and t.text != text_):
            raise FolidSyntaxError(f"expected {what or text_ or kind}, found {t.text or 'end of input'!r}",
                                   span(t))
        pos += 1
        return t

    take("name", "sig")
    consts: list[str] = []
    funcs: list[tuple[str, int]] = []
    preds: list[tuple[str, int]] = []
    inds: list[tuple[str, int]] = []
    budget = 0
    seen: dict[str, Token] = {}

    def declare(tok: Token) -> None:
        if tok.text in seen:
            raise DuplicateSymbol(f"symbol {tok.text!r} declared twice", span(tok))
        if NAME_CONST_RE.match(tok.text) or tok.text in KEYWORDS:
            raise DuplicateSymbol(f"{tok.text!r} is reserved", span(tok))
        seen[tok.text] = tok

    def arity_tok() -> int:
        t = take("name", what="arity")
        if not t.text.isdigit():
            raise FolidSyntaxError(f"expected arity, found {t.text!r}", span(t))
        return int(t.text)

    while toks[pos].kind == "name" and toks[pos].text in _DECL_KINDS:
        kind = toks[pos].text
        pos += 1
        if kind == "names":
            budget = arity_tok()
        else:
            t = toks[pos]
            if t.kind == "name" or (kind == "func" and t.text in ("+", "*")):
                pos += 1
            else:
                raise FolidSyntaxError(f"expected symbol name, found {t.text!r}", span(t))
            declare(t)
            if kind == "const":
                consts.append(t.text)
            else:
                k = arity_tok()
                if kind == "func":
                    if k < 1:
                        raise ArityMismatch("functions need arity >= 1", span(t))
                    funcs.append((t.text, k))
                elif kind == "pred":
                    preds.append((t.text, k))
                else:
                    inds.append((t.text, k))
        take("op", ";")

    sig = Signature(tuple(consts), tuple(funcs), tuple(preds), tuple(inds), budget)
    rules: list[ProductionRule] = []
    counts: dict[str, int] = {}
    rule_names: set[str] = set()
    if toks[pos].kind == "name" and toks[pos].text == "rules":
        pos += 1
        while toks[pos].kind == "name" and toks[pos].text == "rule":
            pos += 1
            label = take("name", what="rule name")
            if label.text in rule_names:
                raise DuplicateSymbol(f"rule {label.text!r} defined twice", span(label))
            rule_names.add(label.text)
            take("op", ":")
            # hand the remaining tokens to a formula parser positioned here
            p = Parser("", sig, file)
            p.toks = toks
            p.pos = pos
            premises: list[Atom] = []
            if not p.at("=>"):
                premises.append(_rule_atom(p))
                while p.accept(","):
                    premises.append(_rule_atom(p))
            p.expect("=>")
            head_tok = p.tok
            head = _rule_atom(p)
            if not head.inductive:
                raise FolidSyntaxError(f"rule head {head.pred} is not an inductive predicate",
                                       p.span(head_tok))
            p.expect(";")
            pos = p.pos
            counts[head.pred] = counts.get(head.pred, 0) + 1
            rules.append(ProductionRule(
                head.pred, head.args,
                tuple(a for a in premises if not a.inductive),
                tuple(a for a in premises if a.inductive),
                label.text, counts[head.pred]))
    if toks[pos].kind != "eof":
        raise FolidSyntaxError(f"unexpected {toks[pos].text!r}", span(toks[pos]))
    return sig, tuple(rules)


def _rule_atom(p: Parser) -> Atom:
    tok = p.tok
    if tok.kind != "name":
        raise FolidSyntaxError(f"expected predicate atom, found {tok.text!r}", p.span())
    if p.sig.pred_arity(tok.text) is None:
        raise UndeclaredSymbol(f"predicate {tok.text!r} is not declared", p.span(tok))
    f = p.atomic()
    assert isinstance(f, Atom)
    return f


def print_signature(sig: Signature, rules: tuple[ProductionRule, ...] = ()) -> str:
    lines = ["sig"]
    lines += [f"  const {c};" for c in sig.constants]
    lines += [f"  func {n} {k};" for n, k in sig.functions]
    lines += [f"  pred {n} {k};" for n, k in sig.ordinary_preds]
    lines += [f"  ind {n} {k};" for n, k in sig.inductive_preds]
    if sig.name_constant_budget:
        lines.append(f"  names {sig.name_constant_budget};")
    if rules:
        lines.append("rules")
        lines += [f"  {r}" for r in rules]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# finite structures


def _key_span(text: str, key: str, file: str) -> SourceSpan:
    idx = text.find(f'"{key}"')
    if idx < 0:
        return SourceSpan(file, 1, 1, 1)
    line = text.count("\n", 0, idx) + 1
    col = idx - (text.rfind("\n", 0, idx) + 1) + 1
    return SourceSpan(file, line, col, len(key) + 2)


def parse_structure(json_text: str, sig: Signature, file: str = "<model>"):
    from .semantics import FiniteStructure

    try:
        data = json.loads(json_text)
    except json.JSONDecodeError as e:
        raise FolidSyntaxError(e.msg, SourceSpan(file, e.lineno, e.colno, 1)) from None
    if not isinstance(data, dict) or not isinstance(data.get("universe"), int):
        raise FolidSyntaxError("model must be an object with an integer 'universe'",
                               _key_span(json_text, "universe", file))
    n = data["universe"]
    if n < 1:
        raise OutOfUniverse("universe must be non-empty", _key_span(json_text, "universe", file))

    def elem(v: Any, key: str) -> int:
        if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < n:
            raise OutOfUniverse(f"{v!r} is not an element of a universe of size {n}",
                                _key_span(json_text, key, file))
        return v

    consts_in = data.get("consts", {})
    consts = {}
    for c in sig.constants:
        if c not in consts_in:
            raise TableIncomplete(f"no value for constant {c}", _key_span(json_text, "consts", file))
        consts[c] = elem(consts_in[c], c)
    for c in consts_in:
        if c not in consts:
            raise UndeclaredSymbol(f"constant {c!r} is not declared", _key_span(json_text, c, file))

    funcs_in = data.get("funcs", {})
    funcs = {}
    for f, k in sig.functions:
        table = funcs_in.get(f)
        if not isinstance(table, list) or len(table) != n ** k:
            raise TableIncomplete(f"function {f} needs a table of {n ** k} entries",
                                  _key_span(json_text, f if f in funcs_in else "funcs", file))
        funcs[f] = tuple(elem(v, f) for v in table)
    for f in funcs_in:
        if f not in funcs:
            raise UndeclaredSymbol(f"function {f!r} is not declared", _key_span(json_text, f, file))

    def tuples(section: str, decls) -> dict[str, frozenset]:
        src = data.get(section, {})
        out = {}
        for name, k in decls:
            if name not in src:
                raise TableIncomplete(f"no table for predicate {name}",
                                      _key_span(json_text, section, file))
            rows = src[name]
            if not isinstance(rows, list):
                raise FolidSyntaxError(f"table for {name} must be a list",
                                       _key_span(json_text, name, file))
            acc = set()
            for row in rows:
                if not isinstance(row, list) or len(row) != k:
                    raise ArityMismatch(f"{name} rows need {k} entries",
                                        _key_span(json_text, name, file))
                acc.add(tuple(elem(v, name) for v in row))
            out[name] = frozenset(acc)
        for name in src:
            if name not in out:
                raise UndeclaredSymbol(f"predicate {name!r} is not declared in '{section}'",
                                       _key_span(json_text, name, file))
        return out

    preds = tuples("preds", sig.ordinary_preds)
    ind = tuples("ind", sig.inductive_preds)
    names = tuple(elem(v, "names") for v in data.get("names", []))
    if names and len(names) > sig.name_constant_budget:
        sig = sig.with_budget(len(names))
    return FiniteStructure(sig, n, consts, funcs, preds, ind, names)


def structure_to_json(m) -> dict:
    out: dict[str, Any] = {"universe": m.size}
    if m.consts:
        out["consts"] = dict(m.consts)
    if m.funcs:
        out["funcs"] = {f: list(t) for f, t in m.funcs.items()}
    if m.preds:
        out["preds"] = {p: [list(r) for r in sorted(rows)] for p, rows in m.preds.items()}
    out["ind"] = {p: [list(r) for r in sorted(rows)] for p, rows in m.ind.items()}
    if m.names:
        out["names"] = list(m.names)
    return out


def print_structure(m) -> str:
    return json.dumps(structure_to_json(m), sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# proof graphs

RULE_NAMES = ("Axiom", "Wk", "Cut", "Subst", "NegL", "NegR", "OrL", "OrR", "AndL", "AndR",
              "ImpL", "ImpR", "AllL", "AllR", "ExL", "ExR", "EqL", "EqR", "IndR", "Case")

# how each parameter key is read
_PARAM_KINDS = {
    "p": "formula", "cut": "formula", "seq": "sequent", "theta": "subst",
    "t": "term", "u": "term", "x": "var", "y": "var",
    "args": "terms", "fresh": "varlists", "keep": "bool",
}


def parse_proof(text: str, sig: Signature, file: str = "<proof>"):
    from .kernel import ProofGraph, ProofNode, RuleInstance

    p = Parser(text, sig, file)
    nodes: dict[str, ProofNode] = {}
    order: list[str] = []
    refs: list[tuple[str, Token]] = []
    while p.tok.kind != "eof":
        kw = p.expect_name("'node' or 'bud'")
        if kw.text not in ("node", "bud"):
            raise FolidSyntaxError(f"expected 'node' or 'bud', found {kw.text!r}", p.span(kw))
        id_tok = p.expect_name("node id")
        if id_tok.text in nodes:
            raise DuplicateSymbol(f"node {id_tok.text} defined twice", p.span(id_tok))
        p.expect(":")
        seq = p.sequent(stop=("by", "companion"))
        span = p.span(id_tok)
        if kw.text == "bud":
            p.expect("companion")
            comp = p.expect_name("companion id")
            p.expect(";")
            refs.append((comp.text, comp))
            nodes[id_tok.text] = ProofNode(id_tok.text, seq, None, (), comp.text, span)
        else:
            p.expect("by")
            inst = _rule_instance(p, RuleInstance)
            p.expect("premises")
            p.expect("[")
            prem: list[str] = []
            if not p.at("]"):
                t = p.expect_name("premise id")
                prem.append(t.text)
                refs.append((t.text, t))
                while p.accept(","):
                    t = p.expect_name("premise id")
                    prem.append(t.text)
                    refs.append((t.text, t))
            p.expect("]")
            p.expect(";")
            nodes[id_tok.text] = ProofNode(id_tok.text, seq, inst, tuple(prem), None, span)
        order.append(id_tok.text)
    if not order:
        raise FolidSyntaxError("proof has no nodes", p.span())
    for ref, tok in refs:
        if ref not in nodes:
            raise DanglingPremise(f"node {ref} is referenced but not defined", p.span(tok))
    for nid in order:
        node = nodes[nid]
        if node.companion is not None:
            comp = nodes[node.companion]
            if comp.sequent != node.sequent:
                raise BudSequentMismatch(
                    f"bud {nid} has sequent {node.sequent} but companion {comp.id} has {comp.sequent}",
                    node.span)
    return ProofGraph(nodes, order[0], tuple(order))


def _rule_instance(p: Parser, cls):
    tok = p.expect_name("rule name")
    name = tok.text
    if name not in RULE_NAMES:
        raise UnknownRule(f"unknown rule {name!r}", p.span(tok))
    pred = None
    index = None
    if name in ("IndR", "Case"):
        p.expect("(")
        ptok = p.expect_name("inductive predicate")
        if not p.sig.is_inductive(ptok.text):
            raise UnknownRule(f"{ptok.text!r} is not an inductive predicate", p.span(ptok))
        pred = ptok.text
        if name == "IndR":
            p.expect(",")
            itok = p.expect_name("rule index")
            if not itok.text.isdigit():
                raise FolidSyntaxError("rule index must be a number", p.span(itok))
            index = int(itok.text)
        p.expect(")")
    params: dict[str, Any] = {}
    if p.accept("("):
        if not p.at(")"):
            _param(p, params)
            while p.accept(","):
                _param(p, params)
        p.expect(")")
    return cls(name, params, pred, index)


def _param(p: Parser, params: dict[str, Any]) -> None:
    ktok = p.expect_name("parameter name")
    key = ktok.text
    kind = _PARAM_KINDS.get(key)
    if kind is None:
        raise FolidSyntaxError(f"unknown parameter {key!r}", p.span(ktok))
    if key in params:
        raise DuplicateSymbol(f"parameter {key!r} given twice", p.span(ktok))
    p.expect("=")
    params[key] = _typed_value(p, kind)


def _raw(p: Parser) -> tuple[str, Token]:
    tok = p.tok
    if tok.kind == "string":
        p.pos += 1
        return tok.text[1:-1], tok
    if tok.kind == "name":
        p.pos += 1
        return tok.text, tok
    raise FolidSyntaxError(f"expected a value, found {tok.text!r}", p.span())


def _sub(p: Parser, text: str, tok: Token) -> Parser:
    col = tok.col + (1 if tok.kind == "string" else 0)
    return Parser(text, p.sig, p.file, tok.line, col)


def _typed_value(p: Parser, kind: str):
    if kind == "terms":
        p.expect("[")
        out: list[Term] = []
        while not p.at("]"):
            text, tok = _raw(p)
            q = _sub(p, text, tok)
            out.append(q.term())
            q.expect_eof()
            if not p.accept(","):
                break
        p.expect("]")
        return tuple(out)
    if kind == "varlists":
        p.expect("[")
        lists: list[tuple[str, ...]] = []
        while not p.at("]"):
            p.expect("[")
            vs: list[str] = []
            while not p.at("]"):
                t = p.expect_name("variable")
                p._check_var(t)
                vs.append(t.text)
                if not p.accept(","):
                    break
            p.expect("]")
            lists.append(tuple(vs))
            if not p.accept(","):
                break
        p.expect("]")
        return tuple(lists)
    text, tok = _raw(p)
    if kind == "bool":
        if text not in ("true", "false", "1", "0"):
            raise FolidSyntaxError("expected true or false", p.span(tok))
        return text in ("true", "1")
    q = _sub(p, text, tok)
    if kind == "formula":
        if text.isdigit() and tok.kind == "name":
            return int(text)
        v = q.formula()
    elif kind == "sequent":
        v = q.sequent()
    elif kind == "term":
        v = q.term()
    elif kind == "var":
        t = q.expect_name("variable")
        q._check_var(t)
        v = t.text
    elif kind == "subst":
        theta: dict[str, Term] = {}
        while q.tok.kind != "eof":
            t = q.expect_name("variable")
            q._check_var(t)
            q.expect(":=")
            if t.text in theta:
                raise DuplicateSymbol(f"variable {t.text} substituted twice", q.span(t))
            theta[t.text] = q.term()
            if not q.accept(","):
                break
        v = theta
    else:  # pragma: no cover
        raise AssertionError(kind)
    q.expect_eof()
    return v


def _quote(x) -> str:
    return f'"{x}"'


def print_rule_instance(inst) -> str:
    head = inst.name
    if inst.name == "IndR":
        head += f"({inst.pred},{inst.rule_index})"
    elif inst.name == "Case":
        head += f"({inst.pred})"
    parts = []
    for key in sorted(inst.params):
        v = inst.params[key]
        kind = _PARAM_KINDS[key]
        if kind == "terms":
            parts.append(f"{key}=[{', '.join(_quote(t) for t in v)}]")
        elif kind == "varlists":
            parts.append(f"{key}=[{', '.join('[' + ', '.join(vs) + ']' for vs in v)}]")
        elif kind == "bool":
            parts.append(f"{key}={'true' if v else 'false'}")
        elif kind == "subst":
            parts.append(f"{key}={_quote(', '.join(f'{x}:={t}' for x, t in v.items()))}")
        elif kind == "var" or isinstance(v, int):
            parts.append(f"{key}={v}")
        else:
            parts.append(f"{key}={_quote(v)}")
    return head + (f"({', '.join(parts)})" if parts else "")


def print_proof(pg) -> str:
    lines = []
    for nid in pg.order:
        node = pg.nodes[nid]
        if node.companion is not None:
            lines.append(f"bud {nid}: {node.sequent} companion {node.companion};")
        else:
            prem = ", ".join(node.premises)
            lines.append(f"node {nid}: {node.sequent} by {print_rule_instance(node.rule)} "
                         f"premises [{prem}];")
    return "\n".join(lines) + "\n"
