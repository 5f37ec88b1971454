"""Goedel coding and the arithmetised inductive definitions.

Codes are natural numbers.  A node is coded as ``payload * 15 + tag``; compound
payloads use Cantor pairing, names are their UTF-8 bytes read as a big-endian
integer, and sequences are coded by ``<> = 0`` and ``<a, rest> = 1 + pi(a, <rest>)``.

The coded operator, W and the coded predicates work over a bounded universe
``T`` of closed terms.  Tuples are compared modulo the equality of the
ordinary oracle, so the coded stages stay in step with the term model even when
distinct terms denote the same element.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .corpus import closed_subformulas, generate_corpus
from .errors import FolidError, InvalidCode
from .semantics import FiniteStructure, eval_formula, eval_term, kleene_stages
from .syntax import (
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
    Signature,
    Term,
    Var,
    free_vars,
    print_term,
    rules_for,
    substitute,
)
from .termmodel import TermModel, TermUniverse

TAGS = ("var", "const", "nameconst", "app", "eq", "ordatom", "indatom",
        "neg", "and", "or", "imp", "all", "ex", "seq", "falsum")
_TAG = {name: i for i, name in enumerate(TAGS)}
_NAME = re.compile(r"[A-Za-z0-9_][A-Za-z0-9_']*\Z")


# ---------------------------------------------------------------------------
# numbers


def pair(a: int, b: int) -> int:
    return (a + b) * (a + b + 1) // 2 + b


def unpair(z: int) -> tuple[int, int]:
    if z < 0:
        raise InvalidCode(f"negative code {z}")
    w = (math.isqrt(8 * z + 1) - 1) // 2
    b = z - w * (w + 1) // 2
    return w - b, b


def seq_code(items: Iterable[int]) -> int:
    out = 0
    for a in reversed(list(items)):
        out = 1 + pair(a, out)
    return out


def seq_items(c: int) -> list[int]:
    out = []
    while c != 0:
        if c < 0:
            raise InvalidCode("negative sequence code")
        a, c = unpair(c - 1)
        out.append(a)
    return out


def seq_len(c: int) -> int:
    return len(seq_items(c))


def seq_get(c: int, i: int) -> int:
    """(c)_i, counting from 0."""
    items = seq_items(c)
    if not 0 <= i < len(items):
        raise InvalidCode(f"index {i} out of range for a sequence of length {len(items)}")
    return items[i]


def seq_member(a: int, c: int) -> bool:
    return a in seq_items(c)


def _name_code(s: str) -> int:
    return int.from_bytes(s.encode(), "big")


def _name_decode(n: int) -> str:
    try:
        s = n.to_bytes((n.bit_length() + 7) // 8, "big").decode()
    except UnicodeDecodeError:
        raise InvalidCode(f"{n} does not code a name") from None
    if not _NAME.match(s):
        raise InvalidCode(f"{s!r} is not a valid name")
    return s


def _tagged(tag: str, payload: int) -> int:
    return payload * len(TAGS) + _TAG[tag]


def _untag(c: int) -> tuple[str, int]:
    if not isinstance(c, int) or c < 0:
        raise InvalidCode(f"not a code: {c!r}")
    payload, tag = divmod(c, len(TAGS))
    return TAGS[tag], payload


# ---------------------------------------------------------------------------
# terms and formulas


def encode(e) -> int:
    if isinstance(e, Var):
        return _tagged("var", _name_code(e.name))
    if isinstance(e, Const):
        return _tagged("const", _name_code(e.name))
    if isinstance(e, NameConst):
        return _tagged("nameconst", e.index)
    if isinstance(e, App):
        return _tagged("app", pair(_name_code(e.fn), seq_code(encode(a) for a in e.args)))
    if isinstance(e, Eq):
        return _tagged("eq", pair(encode(e.left), encode(e.right)))
    if isinstance(e, Atom):
        tag = "indatom" if e.inductive else "ordatom"
        return _tagged(tag, pair(_name_code(e.pred), seq_code(encode(a) for a in e.args)))
    if isinstance(e, Falsum):
        return _tagged("falsum", 0)
    if isinstance(e, Not):
        return _tagged("neg", encode(e.body))
    if isinstance(e, (And, Or, Imp)):
        tag = {And: "and", Or: "or", Imp: "imp"}[type(e)]
        return _tagged(tag, pair(encode(e.left), encode(e.right)))
    if isinstance(e, (Forall, Exists)):
        tag = "all" if isinstance(e, Forall) else "ex"
        return _tagged(tag, pair(_name_code(e.var), encode(e.body)))
    if isinstance(e, tuple):
        return encode_tuple(e)
    raise TypeError(f"cannot encode {e!r}")


def encode_tuple(terms: Sequence[Term]) -> int:
    return _tagged("seq", seq_code(encode(t) for t in terms))


def head_tag(c: int) -> str:
    return _untag(c)[0]


def decode(c: int):
    tag, p = _untag(c)
    if tag == "var":
        return Var(_name_decode(p))
    if tag == "const":
        return Const(_name_decode(p))
    if tag == "nameconst":
        if p < 1:
            raise InvalidCode("name constants are numbered from 1")
        return NameConst(p)
    if tag == "app":
        fn, args = unpair(p)
        return App(_name_decode(fn), tuple(decode_term(a) for a in seq_items(args)))
    if tag == "eq":
        a, b = unpair(p)
        return Eq(decode_term(a), decode_term(b))
    if tag in ("ordatom", "indatom"):
        pred, args = unpair(p)
        return Atom(_name_decode(pred), tuple(decode_term(a) for a in seq_items(args)), tag == "indatom")
    if tag == "falsum":
        if p != 0:
            raise InvalidCode("falsum carries no payload")
        return Falsum()
    if tag == "neg":
        return Not(decode_formula(p))
    if tag in ("and", "or", "imp"):
        a, b = unpair(p)
        return {"and": And, "or": Or, "imp": Imp}[tag](decode_formula(a), decode_formula(b))
    if tag in ("all", "ex"):
        v, body = unpair(p)
        return (Forall if tag == "all" else Exists)(_name_decode(v), decode_formula(body))
    return tuple(decode_term(a) for a in seq_items(p))


def decode_term(c: int) -> Term:
    e = decode(c)
    if not isinstance(e, Term):
        raise InvalidCode(f"code {c} is a {head_tag(c)} node, expected a term")
    return e


def decode_formula(c: int) -> Formula:
    e = decode(c)
    if not isinstance(e, Formula):
        raise InvalidCode(f"code {c} is a {head_tag(c)} node, expected a formula")
    return e


def decode_tuple(c: int) -> tuple[Term, ...]:
    if head_tag(c) != "seq":
        raise InvalidCode(f"code {c} is a {head_tag(c)} node, expected a tuple")
    return decode(c)


# ---------------------------------------------------------------------------
# ordinary oracles


class OrdinaryOracle:
    """A 0/1 valuation of closed ordinary atoms together with an equality on closed terms.

    ``holds(atom)`` means the value 0.  ``key`` maps a closed term to a hashable
    class label; two terms are equal for the oracle iff their keys coincide.
    """

    def __init__(self, holds: Callable[[Atom], bool], key: Callable[[Term], Hashable] | None = None):
        self._holds = holds
        self._key = key or (lambda t: t)
        self._cache: dict[Term, Hashable] = {}

    def holds(self, atom: Atom) -> bool:
        return self._holds(atom)

    def value(self, code: int) -> int:
        """f applied to the code of a closed ordinary atom."""
        a = decode_formula(code)
        if not isinstance(a, Atom) or a.inductive:
            raise InvalidCode("the oracle is defined on ordinary atoms only")
        return 0 if self._holds(a) else 1

    def key(self, t: Term) -> Hashable:
        k = self._cache.get(t)
        if k is None:
            k = self._cache[t] = self._key(t)
        return k

    def same(self, t: Term, u: Term) -> bool:
        return self.key(t) == self.key(u)

    def negated(self) -> "OrdinaryOracle":
        return OrdinaryOracle(lambda a: not self._holds(a), self._key)

    @classmethod
    def syntactic(cls, true_atoms: Iterable[Atom] = ()) -> "OrdinaryOracle":
        table = frozenset(true_atoms)
        return cls(lambda a: a in table)

    @classmethod
    def from_structure(cls, m: FiniteStructure) -> "OrdinaryOracle":
        return cls(lambda a: eval_formula(a, m), lambda t: eval_term(t, m))

    @classmethod
    def from_term_model(cls, tm: TermModel) -> "OrdinaryOracle":
        return cls.from_structure(tm.as_structure())


def _premise_ok(q: Formula, f: OrdinaryOracle) -> bool:
    if isinstance(q, Eq):
        return f.same(q.left, q.right)
    return f.holds(q)


# ---------------------------------------------------------------------------
# the coded operator


class CodedSystem:
    """Production rules read through an oracle over a bounded term universe.

    Stages are kept as sets of key tuples; ``codes`` turns them into the code
    sets of the T-tuples that realise them.
    """

    def __init__(self, rules: Sequence[ProductionRule], f: OrdinaryOracle, universe: TermUniverse):
        self.sig: Signature = universe.sig
        self.rules = tuple(rules)
        self.f = f
        self.universe = universe
        self.names = self.sig.inductive_names
        self._by_key: list[dict[tuple, list[tuple[Term, ...]]]] = []
        for _, k in self.sig.inductive_preds:
            idx: dict[tuple, list[tuple[Term, ...]]] = {}
            for tup in universe.tuples(k):
                idx.setdefault(self.keys(tup), []).append(tup)
            self._by_key.append(idx)
        self._stages: list[tuple[frozenset, ...]] = [tuple(frozenset() for _ in self.names)]

    def keys(self, terms: Sequence[Term]) -> tuple:
        return tuple(self.f.key(t) for t in terms)

    def instances(self, rule: ProductionRule) -> Iterable[dict[str, Term]]:
        vs = rule.variables
        for vals in itertools.product(self.universe.terms, repeat=len(vs)):
            yield dict(zip(vs, vals))

    def fires(self, rule: ProductionRule, rho: Mapping[str, Term], xs: Sequence[frozenset]) -> bool:
        if not all(_premise_ok(substitute(q, rho), self.f) for q in rule.ordinary):
            return False
        for p in rule.inductive:
            j = self.names.index(p.pred)
            if self.keys([substitute(a, rho) for a in p.args]) not in xs[j]:
                return False
        return True

    def step(self, xs: Sequence[frozenset]) -> tuple[frozenset, ...]:
        out = [set() for _ in self.names]
        for rule in self.rules:
            i = self.names.index(rule.pred)
            for rho in self.instances(rule):
                if self.fires(rule, rho, xs):
                    out[i].add(self.keys([substitute(a, rho) for a in rule.args]))
        return tuple(frozenset(s) for s in out)

    def stage(self, k: int) -> tuple[frozenset, ...]:
        while len(self._stages) <= k:
            self._stages.append(self.step(self._stages[-1]))
        return self._stages[k]

    def fixpoint_stage(self) -> int:
        k = 0
        while self.stage(k + 1) != self.stage(k):
            k += 1
        return k

    def realise(self, i: int, keys: Iterable[tuple]) -> list[tuple[Term, ...]]:
        idx = self._by_key[i]
        return [t for key in keys for t in idx.get(key, ())]

    def codes(self, xs: Sequence[frozenset]) -> tuple[frozenset, ...]:
        return tuple(frozenset(encode_tuple(t) for t in self.realise(i, x)) for i, x in enumerate(xs))

    def keys_of_codes(self, xs: Sequence[Iterable[int]]) -> tuple[frozenset, ...]:
        if len(xs) != len(self.names):
            raise InvalidCode(f"expected {len(self.names)} components, got {len(xs)}")
        return tuple(frozenset(self.keys(decode_tuple(c)) for c in x) for x in xs)

    def index(self, pred: str | int) -> int:
        return pred if isinstance(pred, int) else self.names.index(pred)


def apply_phi_tilde(rules: Sequence[ProductionRule], f: OrdinaryOracle,
                    xs: Sequence[Iterable[int]], universe: TermUniverse) -> tuple[frozenset, ...]:
    """One step of the coded operator on code sets of T-tuples."""
    cs = CodedSystem(rules, f, universe)
    return cs.codes(cs.step(cs.keys_of_codes(xs)))


def phi_tilde_stages(rules: Sequence[ProductionRule], f: OrdinaryOracle,
                     universe: TermUniverse, k_max: int) -> list[tuple[frozenset, ...]]:
    cs = CodedSystem(rules, f, universe)
    return [cs.codes(cs.stage(k)) for k in range(k_max + 1)]


@dataclass(frozen=True)
class CodeMismatch:
    pred: str
    terms: tuple[str, ...]
    k: int
    in_model: bool
    in_coded: bool


def check_code_correspondence(tm: TermModel, f: OrdinaryOracle, k_max: int,
                              universe: TermUniverse, rules: Sequence[ProductionRule]) -> list[CodeMismatch]:
    """Compare [t] in phi^k over the term model with code(t) in the k-th coded stage."""
    m = tm.as_structure()
    model_stages = kleene_stages(m, rules, upto=k_max)
    cs = CodedSystem(rules, f, universe)
    out = []
    for k in range(k_max + 1):
        coded = cs.codes(cs.stage(k))
        for i, (p, arity) in enumerate(m.sig.inductive_preds):
            for tup in universe.tuples(arity):
                lhs = tuple(tm.class_of(t) for t in tup) in model_stages[k][i]
                rhs = encode_tuple(tup) in coded[i]
                if lhs != rhs:
                    out.append(CodeMismatch(p, tuple(print_term(t) for t in tup), k, lhs, rhs))
    return out


# ---------------------------------------------------------------------------
# W and the coded predicates


def stage_code(xs: Sequence[Iterable[int]]) -> int:
    """Code of an n-tuple of finite sets, each listed in increasing order."""
    return seq_code(seq_code(sorted(x)) for x in xs)


def stage_decode(c: int) -> tuple[list[int], ...]:
    return tuple(seq_items(x) for x in seq_items(c))


def eval_W(y: int, z: int, f: OrdinaryOracle, rules: Sequence[ProductionRule], universe: TermUniverse) -> bool:
    """Every member of every component of z is produced by one rule step from y."""
    cs = CodedSystem(rules, f, universe)
    return _w(cs, stage_decode(y), stage_decode(z))


def _w(cs: CodedSystem, y: Sequence[Iterable[int]], z: Sequence[Iterable[int]]) -> bool:
    produced = cs.step(cs.keys_of_codes(y))
    zk = cs.keys_of_codes(z)
    return all(x <= p for x, p in zip(zk, produced))


@dataclass(frozen=True)
class Witness:
    """A stage sequence z: ``stages[l]`` is an n-tuple of code sets."""

    stages: tuple[tuple[frozenset, ...], ...]

    def __len__(self) -> int:
        return len(self.stages)

    def stage_codes(self) -> list[int]:
        return [stage_code(s) for s in self.stages]

    @property
    def code(self) -> int:
        return seq_code(self.stage_codes())

    def to_json(self) -> list[list[list[str]]]:
        return [[sorted(", ".join(print_term(t) for t in decode_tuple(c)) for c in comp) for comp in s]
                for s in self.stages]


def search_P_tilde(pred: str | int, a: int, f: OrdinaryOracle, rules: Sequence[ProductionRule],
                   universe: TermUniverse, k_max: int | None = None,
                   system: CodedSystem | None = None) -> Witness | None:
    """Find the least k with a in the k-th coded stage and build a witness of length k+1.

    Stages are built backwards: the last holds only ``a``; each earlier stage
    holds one T-tuple per inductive premise of a rule instance producing an
    element of the next.  Returns None when ``a`` is not generated by stage
    ``k_max`` (by the fixpoint stage when ``k_max`` is None).
    """
    cs = system or CodedSystem(rules, f, universe)
    i = cs.index(pred)
    target = cs.keys(decode_tuple(a))
    limit = cs.fixpoint_stage() if k_max is None else k_max
    k = next((k for k in range(limit + 1) if target in cs.stage(k)[i]), None)
    if k is None:
        return None
    n = len(cs.names)
    stages: list[list[set]] = [[set() for _ in range(n)] for _ in range(k + 1)]
    stages[k][i].add(a)
    for level in range(k, 0, -1):
        prev = cs.stage(level - 1)
        for j in range(n):
            for c in sorted(stages[level][j]):
                for p, tup in _derivation(cs, j, decode_tuple(c), prev):
                    stages[level - 1][p].add(encode_tuple(tup))
    return Witness(tuple(tuple(frozenset(x) for x in s) for s in stages))


def _derivation(cs: CodedSystem, j: int, tup: Sequence[Term], prev: Sequence[frozenset]):
    """Premises (component, T-tuple) of the first rule instance producing ``tup`` from ``prev``."""
    goal = cs.keys(tup)
    for rule in rules_for(cs.rules, cs.names[j]):
        for rho in cs.instances(rule):
            if cs.keys([substitute(t, rho) for t in rule.args]) != goal or not cs.fires(rule, rho, prev):
                continue
            out = []
            for p in rule.inductive:
                jp = cs.names.index(p.pred)
                exact = tuple(substitute(t, rho) for t in p.args)
                options = cs.realise(jp, [cs.keys(exact)])
                out.append((jp, exact if exact in options else options[0]))
            return out
    raise FolidError("no rule instance produces a member of the stage")


def check_witness(w: Witness, pred: str | int, a: int, f: OrdinaryOracle,
                  rules: Sequence[ProductionRule], universe: TermUniverse) -> bool:
    """(z)_0 is all-empty, consecutive stages satisfy W, and a is in the last stage."""
    cs = CodedSystem(rules, f, universe)
    if not w.stages or any(w.stages[0]):
        return False
    codes = w.stage_codes()
    for y, z in zip(codes, codes[1:]):
        if not eval_W(y, z, f, rules, universe):
            return False
    return seq_member(a, seq_get(codes[-1], cs.index(pred)))


# ---------------------------------------------------------------------------
# truth assignments


class TruthAssignment:
    """A valuation f of closed formulas; 0 means true.

    With a term model the value of any formula not overridden is read off by
    evaluation; otherwise unlisted formulas get ``default``.
    """

    def __init__(self, sig: Signature, term_model: TermModel | None = None,
                 overrides: Mapping[Formula, int] | None = None, default: int = 1,
                 size_bound: int = 80):
        self.sig = sig
        self.term_model = term_model
        self.overrides = dict(overrides or {})
        self.default = default
        self.size_bound = size_bound
        self._structure = term_model.as_structure() if term_model is not None else None
        self._cache: dict[Formula, int] = {}

    @property
    def model_derived(self) -> bool:
        return self.term_model is not None and not self.overrides

    def __call__(self, b: Formula | int) -> int:
        if isinstance(b, int):
            b = decode_formula(b)
        if b in self.overrides:
            return self.overrides[b]
        v = self._cache.get(b)
        if v is None:
            if self._structure is None:
                v = self.default
            else:
                if free_vars(b):
                    raise FolidError(f"{b} is not closed")
                v = 0 if eval_formula(b, self._structure) else 1
            self._cache[b] = v
        return v

    def with_values(self, values: Mapping[Formula, int]) -> "TruthAssignment":
        return TruthAssignment(self.sig, self.term_model, {**self.overrides, **values},
                               self.default, self.size_bound)


def derive_truth_assignment(tm: TermModel, size_bound: int = 80) -> TruthAssignment:
    return TruthAssignment(tm.base.sig, tm, size_bound=size_bound)


def oracle_from_truth(f: TruthAssignment, universe: TermUniverse) -> OrdinaryOracle:
    """The ordinary oracle read off f; equality is the closure of f(t = u) = 0 on T."""
    if f.model_derived:
        return OrdinaryOracle.from_structure(f._structure)
    terms = universe.terms
    parent = list(range(len(terms)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a, b in itertools.combinations(range(len(terms)), 2):
        if f(Eq(terms[a], terms[b])) == 0:
            parent[find(a)] = find(b)
    label = {t: find(i) for i, t in enumerate(terms)}

    def key(t: Term) -> Hashable:
        if t in label:
            return label[t]
        for u in terms:
            if f(Eq(t, u)) == 0:
                return label[u]
        return t

    return OrdinaryOracle(lambda a: f(a) == 0, key)


@dataclass(frozen=True)
class ClauseViolation:
    clause: str
    formula: str
    detail: str


@dataclass
class ClauseReport:
    violations: list[ClauseViolation] = field(default_factory=list)
    bounded_pass: list[str] = field(default_factory=list)
    checked: int = 0

    def __bool__(self) -> bool:
        return bool(self.violations)

    def to_json(self) -> dict:
        return {"violations": [v.__dict__ for v in self.violations],
                "bounded_pass": self.bounded_pass, "checked": self.checked}


def default_corpus(sig: Signature, size_bound: int, names: int, count: int = 150, seed: int = 0) -> list[Formula]:
    return generate_corpus(sig, count, depth=3, seed=seed, names=min(names, 3),
                           term_depth=1, max_len=size_bound)


def check_I_clauses(f: TruthAssignment, rules: Sequence[ProductionRule], universe: TermUniverse,
                    size_bound: int = 80, corpus: Sequence[Formula] | None = None) -> ClauseReport:
    """Check each clause of I(f) on formulas within ``size_bound`` and terms of ``universe``."""
    sig = universe.sig
    report = ClauseReport()
    terms = universe.terms
    if corpus is None:
        corpus = default_corpus(sig, size_bound, universe.budget)
    formulas = [b for b in closed_subformulas(corpus) if len(str(b)) <= size_bound]
    for p, k in sig.inductive_preds:
        formulas += [Atom(p, tup, True) for tup in universe.tuples(k)]
    formulas = list(dict.fromkeys(formulas))
    cs = CodedSystem(rules, oracle_from_truth(f, universe), universe)
    quantified = False

    def bad(clause: str, b, detail: str) -> None:
        report.violations.append(ClauseViolation(clause, str(b), detail))

    for b in formulas:
        report.checked += 1
        v = f(b)
        if v not in (0, 1):
            bad("two-valued", b, f"f = {v}")
            continue
        if isinstance(b, Falsum) and v != 1:
            bad("falsum", b, "f = 0")
        elif isinstance(b, Not) and v != 1 - f(b.body):
            bad("negation", b, f"f = {v}, f(body) = {f(b.body)}")
        elif isinstance(b, And) and v != max(f(b.left), f(b.right)):
            bad("conjunction", b, f"f = {v}, parts {f(b.left)}, {f(b.right)}")
        elif isinstance(b, Or) and v != min(f(b.left), f(b.right)):
            bad("disjunction", b, f"f = {v}, parts {f(b.left)}, {f(b.right)}")
        elif isinstance(b, Imp) and v != min(1 - f(b.left), f(b.right)):
            bad("implication", b, f"f = {v}, parts {f(b.left)}, {f(b.right)}")
        elif isinstance(b, (Forall, Exists)):
            quantified = True
            vals = [f(substitute(b.body, {b.var: t})) for t in terms]
            want = all(x == 0 for x in vals) if isinstance(b, Forall) else any(x == 0 for x in vals)
            if (v == 0) != want:
                bad("forall" if isinstance(b, Forall) else "exists", b, f"f = {v} disagrees with instances over T")
        elif isinstance(b, Atom) and b.inductive:
            found = search_P_tilde(b.pred, encode_tuple(b.args), cs.f, rules, universe, system=cs) is not None
            if (v == 0) != found:
                bad("inductive", b, f"f = {v}, coded search {'succeeds' if found else 'fails'}")

    for t in terms:
        report.checked += 1
        if f(Eq(t, t)) != 0:
            bad("reflexivity", Eq(t, t), "f = 1")
    bodies = {b.body: b.var for b in formulas if isinstance(b, (Forall, Exists))}
    for body, x in bodies.items():
        for t, u in itertools.product(terms, repeat=2):
            e = Imp(And(Eq(t, u), substitute(body, {x: t})), substitute(body, {x: u}))
            if len(str(e)) > size_bound:
                continue
            report.checked += 1
            if f(e) != 0:
                bad("equality-substitution", e, "f = 1")
    if quantified and not f.model_derived:
        report.bounded_pass = [c for c in ("forall", "exists")
                               if not any(v.clause == c for v in report.violations)]
    return report


def term_model_from_truth(f: TruthAssignment, universe: TermUniverse) -> FiniteStructure:
    """Rebuild a structure from f: classes by f(t = u) = 0, tables by atom truth."""
    sig = universe.sig
    classes: list[list[Term]] = []
    for t in universe.terms:
        for cls in classes:
            if f(Eq(t, cls[0])) == 0:
                cls.append(t)
                break
        else:
            classes.append([t])

    def order(cls: list[Term]) -> tuple:
        names = [t.index for t in cls if isinstance(t, NameConst)]
        return (0, min(names)) if names else (1, universe.terms.index(cls[0]))

    classes.sort(key=order)
    reps = [min((t for t in c if isinstance(t, NameConst)), key=lambda t: t.index, default=c[0]) for c in classes]
    n = len(classes)

    def which(t: Term) -> int:
        for i, r in enumerate(reps):
            if f(Eq(t, r)) == 0:
                return i
        raise FolidError(f"{t} is equal to no class representative")

    consts = {c: which(Const(c)) for c in sig.constants}
    funcs = {fn: tuple(which(App(fn, tuple(reps[a] for a in args)))
                       for args in itertools.product(range(n), repeat=k))
             for fn, k in sig.functions}

    def table(p: str, k: int, ind: bool) -> frozenset:
        return frozenset(args for args in itertools.product(range(n), repeat=k)
                         if f(Atom(p, tuple(reps[a] for a in args), ind)) == 0)

    preds = {p: table(p, k, False) for p, k in sig.ordinary_preds}
    ind = {p: table(p, k, True) for p, k in sig.inductive_preds}
    names = tuple(which(NameConst(i)) for i in range(1, universe.budget + 1))
    return FiniteStructure(sig, n, consts, funcs, preds, ind, names)
