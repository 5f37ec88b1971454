"""Abstract syntax of FOL_ID: terms, formulas, sequents, signatures and production rules.

Formulas compare equal up to renaming of bound variables.  Sequents hold
deduplicated, canonically ordered tuples so that they behave as finite sets.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Union

from .errors import DuplicateSymbol, NoClosedTerm

NAME_CONST_RE = re.compile(r"c_([1-9][0-9]*)\Z")
INFIX_FUNCS = {"+": 1, "*": 2}


# ---------------------------------------------------------------------------
# terms


class Term:
    __slots__ = ()

    def __str__(self) -> str:
        return print_term(self)


@dataclass(frozen=True)
class Var(Term):
    name: str

    def __repr__(self) -> str:
        return f"Var({self.name!r})"


@dataclass(frozen=True)
class Const(Term):
    name: str

    def __repr__(self) -> str:
        return f"Const({self.name!r})"


@dataclass(frozen=True)
class NameConst(Term):
    """The name constant c_i of the extended signature; ``index`` is 1-based."""

    index: int

    def __repr__(self) -> str:
        return f"NameConst({self.index})"


@dataclass(frozen=True)
class App(Term):
    fn: str
    args: tuple[Term, ...]

    def __repr__(self) -> str:
        return f"App({self.fn!r}, {self.args!r})"


def print_term(t: Term, prec: int = 0) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Const):
        return t.name
    if isinstance(t, NameConst):
        return f"c_{t.index}"
    if isinstance(t, App):
        if t.fn in INFIX_FUNCS and len(t.args) == 2:
            p = INFIX_FUNCS[t.fn]
            text = f"{print_term(t.args[0], p)} {t.fn} {print_term(t.args[1], p + 1)}"
            return f"({text})" if prec > p else text
        return f"{t.fn}({', '.join(print_term(a) for a in t.args)})"
    raise TypeError(f"not a term: {t!r}")


def term_depth(t: Term) -> int:
    if isinstance(t, App):
        return 1 + max((term_depth(a) for a in t.args), default=0)
    return 0


# ---------------------------------------------------------------------------
# formulas


class Formula:
    """Base class.  Equality and hashing go through the alpha-invariant ``key``."""

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Formula):
            return NotImplemented
        return self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    @property
    def key(self) -> tuple:
        k = self.__dict__.get("_key")
        if k is None:
            k = _alpha_key(self, {}, 0)
            object.__setattr__(self, "_key", k)
        return k

    def __str__(self) -> str:
        return print_formula(self)

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {print_formula(self)}>"


@dataclass(frozen=True, eq=False, repr=False)
class Atom(Formula):
    pred: str
    args: tuple[Term, ...] = ()
    inductive: bool = False


@dataclass(frozen=True, eq=False, repr=False)
class Eq(Formula):
    left: Term
    right: Term


@dataclass(frozen=True, eq=False, repr=False)
class Falsum(Formula):
    pass


@dataclass(frozen=True, eq=False, repr=False)
class Not(Formula):
    body: Formula


@dataclass(frozen=True, eq=False, repr=False)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, eq=False, repr=False)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, eq=False, repr=False)
class Imp(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, eq=False, repr=False)
class Forall(Formula):
    var: str
    body: Formula


@dataclass(frozen=True, eq=False, repr=False)
class Exists(Formula):
    var: str
    body: Formula


BINARY = {And: "/\\", Or: "\\/", Imp: "->"}
Quantifier = (Forall, Exists)
Expr = Union[Term, Formula]


def _term_key(t: Term, env: Mapping[str, int], depth: int) -> tuple:
    if isinstance(t, Var):
        if t.name in env:
            return ("b", depth - env[t.name])
        return ("v", t.name)
    if isinstance(t, Const):
        return ("c", t.name)
    if isinstance(t, NameConst):
        return ("n", t.index)
    return ("f", t.fn) + tuple(_term_key(a, env, depth) for a in t.args)


def _alpha_key(f: Formula, env: dict[str, int], depth: int) -> tuple:
    if isinstance(f, Atom):
        return ("A", f.pred, f.inductive) + tuple(_term_key(a, env, depth) for a in f.args)
    if isinstance(f, Eq):
        return ("=", _term_key(f.left, env, depth), _term_key(f.right, env, depth))
    if isinstance(f, Falsum):
        return ("F",)
    if isinstance(f, Not):
        return ("~", _alpha_key(f.body, env, depth))
    if isinstance(f, (And, Or, Imp)):
        return (BINARY[type(f)], _alpha_key(f.left, env, depth), _alpha_key(f.right, env, depth))
    if isinstance(f, Quantifier):
        inner = dict(env)
        inner[f.var] = depth + 1
        return ("Q" if isinstance(f, Forall) else "E", _alpha_key(f.body, inner, depth + 1))
    raise TypeError(f"not a formula: {f!r}")


# precedence: quantifiers extend maximally, so they always get parentheses as operands
_PREC = {Imp: 1, Or: 2, And: 3}


def print_formula(f: Formula) -> str:
    return _pf(f)


def _operand(f: Formula, need: int) -> str:
    if isinstance(f, Quantifier):
        return f"({_pf(f)})"
    p = _PREC.get(type(f), 4)
    text = _pf(f)
    return f"({text})" if p < need else text


def _pf(f: Formula) -> str:
    if isinstance(f, Atom):
        if not f.args:
            return f.pred
        return f"{f.pred}({', '.join(print_term(a) for a in f.args)})"
    if isinstance(f, Eq):
        return f"{print_term(f.left)} = {print_term(f.right)}"
    if isinstance(f, Falsum):
        return "false"
    if isinstance(f, Not):
        if isinstance(f.body, Eq):
            return f"~({_pf(f.body)})"
        return "~" + _operand(f.body, 4)
    if isinstance(f, And):
        return f"{_operand(f.left, 3)} /\\ {_operand(f.right, 4)}"
    if isinstance(f, Or):
        return f"{_operand(f.left, 2)} \\/ {_operand(f.right, 3)}"
    if isinstance(f, Imp):
        right = _pf(f.right) if isinstance(f.right, Quantifier) else _operand(f.right, 1)
        return f"{_operand(f.left, 2)} -> {right}"
    if isinstance(f, Forall):
        return f"forall {f.var}. {_pf(f.body)}"
    if isinstance(f, Exists):
        return f"exists {f.var}. {_pf(f.body)}"
    raise TypeError(f"not a formula: {f!r}")


def canonical_print(f: Formula) -> str:
    """Print form with bound variables renamed by binding depth; used as the sort key."""
    return _pf(_canon(f, {}, 0))


def _canon(f: Formula, ren: dict[str, Term], depth: int) -> Formula:
    if isinstance(f, Quantifier):
        name = f"%{depth}"
        inner = dict(ren)
        inner[f.var] = Var(name)
        return type(f)(name, _canon(f.body, inner, depth + 1))
    if isinstance(f, (Atom, Eq)):
        return _subst_plain(f, ren)
    if isinstance(f, Falsum):
        return f
    if isinstance(f, Not):
        return Not(_canon(f.body, ren, depth))
    return type(f)(_canon(f.left, ren, depth), _canon(f.right, ren, depth))


def _subst_plain(f: Formula, ren: Mapping[str, Term]) -> Formula:
    if isinstance(f, Atom):
        return Atom(f.pred, tuple(substitute(a, ren) for a in f.args), f.inductive)
    assert isinstance(f, Eq)
    return Eq(substitute(f.left, ren), substitute(f.right, ren))


def formula_depth(f: Formula) -> int:
    if isinstance(f, (Atom, Eq, Falsum)):
        return 0
    if isinstance(f, Not):
        return 1 + formula_depth(f.body)
    if isinstance(f, Quantifier):
        return 1 + formula_depth(f.body)
    return 1 + max(formula_depth(f.left), formula_depth(f.right))


def formula_size(f: Formula) -> int:
    """Number of formula nodes (terms not counted)."""
    if isinstance(f, (Atom, Eq, Falsum)):
        return 1
    if isinstance(f, (Not, Forall, Exists)):
        return 1 + formula_size(f.body)
    return 1 + formula_size(f.left) + formula_size(f.right)


def subformulas(f: Formula) -> Iterator[Formula]:
    yield f
    if isinstance(f, (Not, Forall, Exists)):
        yield from subformulas(f.body)
    elif isinstance(f, (And, Or, Imp)):
        yield from subformulas(f.left)
        yield from subformulas(f.right)


def conj(parts: Iterable[Formula]) -> Formula:
    """Right-nested conjunction; the empty conjunction is ``~false``."""
    items = list(parts)
    if not items:
        return Not(Falsum())
    out = items[-1]
    for f in reversed(items[:-1]):
        out = And(f, out)
    return out


def disj(parts: Iterable[Formula]) -> Formula:
    """Right-nested disjunction; the empty disjunction is ``false``."""
    items = list(parts)
    if not items:
        return Falsum()
    out = items[-1]
    for f in reversed(items[:-1]):
        out = Or(f, out)
    return out


# ---------------------------------------------------------------------------
# free variables and substitution


def free_vars(e) -> frozenset[str]:
    """Free variables of a term, formula, sequent, or iterable of those."""
    if isinstance(e, Var):
        return frozenset((e.name,))
    if isinstance(e, (Const, NameConst)):
        return frozenset()
    if isinstance(e, App):
        return frozenset().union(*(free_vars(a) for a in e.args))
    if isinstance(e, Atom):
        return frozenset().union(*(free_vars(a) for a in e.args))
    if isinstance(e, Eq):
        return free_vars(e.left) | free_vars(e.right)
    if isinstance(e, Falsum):
        return frozenset()
    if isinstance(e, Not):
        return free_vars(e.body)
    if isinstance(e, (And, Or, Imp)):
        return free_vars(e.left) | free_vars(e.right)
    if isinstance(e, Quantifier):
        return free_vars(e.body) - {e.var}
    if isinstance(e, Sequent):
        return free_vars(e.antecedent) | free_vars(e.succedent)
    return frozenset().union(*(free_vars(x) for x in e))


def var_order(items: Iterable) -> tuple[str, ...]:
    """Variables of terms/atoms in order of first occurrence."""
    seen: dict[str, None] = {}

    def walk(t: Term) -> None:
        if isinstance(t, Var):
            seen.setdefault(t.name)
        elif isinstance(t, App):
            for a in t.args:
                walk(a)

    for it in items:
        if isinstance(it, Term):
            walk(it)
        elif isinstance(it, Atom):
            for a in it.args:
                walk(a)
        elif isinstance(it, Eq):
            walk(it.left)
            walk(it.right)
        else:
            raise TypeError(f"unexpected {it!r}")
    return tuple(seen)


def fresh_var(base: str, avoid: Iterable[str]) -> str:
    avoid = set(avoid)
    name = base
    while name in avoid:
        name += "'"
    return name


def substitute(e, theta: Mapping[str, Term]):
    """Simultaneous capture-avoiding substitution on a term, formula or sequent."""
    if not theta:
        return e
    if isinstance(e, Var):
        return theta.get(e.name, e)
    if isinstance(e, (Const, NameConst)):
        return e
    if isinstance(e, App):
        return App(e.fn, tuple(substitute(a, theta) for a in e.args))
    if isinstance(e, Atom):
        return Atom(e.pred, tuple(substitute(a, theta) for a in e.args), e.inductive)
    if isinstance(e, Eq):
        return Eq(substitute(e.left, theta), substitute(e.right, theta))
    if isinstance(e, Falsum):
        return e
    if isinstance(e, Not):
        return Not(substitute(e.body, theta))
    if isinstance(e, (And, Or, Imp)):
        return type(e)(substitute(e.left, theta), substitute(e.right, theta))
    if isinstance(e, Quantifier):
        body_fv = free_vars(e.body)
        inner = {x: t for x, t in theta.items() if x != e.var and x in body_fv}
        if not inner:
            return e
        incoming = frozenset().union(*(free_vars(t) for t in inner.values()))
        var = e.var
        if var in incoming:
            var = fresh_var(e.var, incoming | body_fv | set(inner))
            inner[e.var] = Var(var)
        return type(e)(var, substitute(e.body, inner))
    if isinstance(e, Sequent):
        return Sequent(
            tuple(substitute(f, theta) for f in e.antecedent),
            tuple(substitute(f, theta) for f in e.succedent),
        )
    raise TypeError(f"cannot substitute into {e!r}")


# ---------------------------------------------------------------------------
# sequents


def _normalize(fs: Iterable[Formula]) -> tuple[Formula, ...]:
    uniq: dict[Formula, None] = {}
    for f in fs:
        uniq.setdefault(f)
    return tuple(sorted(uniq, key=canonical_print))


@dataclass(frozen=True)
class Sequent:
    """Gamma |- Delta with both sides stored as canonical duplicate-free tuples."""

    antecedent: tuple[Formula, ...] = ()
    succedent: tuple[Formula, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "antecedent", _normalize(self.antecedent))
        object.__setattr__(self, "succedent", _normalize(self.succedent))

    def __str__(self) -> str:
        left = ", ".join(_seq_item(f) for f in self.antecedent)
        right = ", ".join(_seq_item(f) for f in self.succedent)
        return f"{left} |- {right}".strip()


def _seq_item(f: Formula) -> str:
    return print_formula(f)


def sequent_closure(s: Sequent, sig: "Signature | None" = None) -> Formula:
    """forall xs. (/\\ Gamma -> \\/ Delta), with the empty-side conventions below.

    An empty antecedent drops the implication.  An empty succedent becomes
    ``~(c = c)`` for the first constant of ``sig``.
    """
    if s.succedent:
        right = disj(s.succedent)
    else:
        c = _first_closed_term(sig)
        right = Not(Eq(c, c))
    body = Imp(conj(s.antecedent), right) if s.antecedent else right
    for x in sorted(free_vars(s), reverse=True):
        body = Forall(x, body)
    return body


def _first_closed_term(sig: "Signature | None") -> Term:
    if sig is not None and sig.constants:
        return Const(sig.constants[0])
    if sig is not None and sig.name_constant_budget > 0:
        return NameConst(1)
    raise NoClosedTerm("empty succedent needs a closed term but the signature has no constant")


# ---------------------------------------------------------------------------
# signatures and production rules


@dataclass(frozen=True)
class Signature:
    constants: tuple[str, ...] = ()
    functions: tuple[tuple[str, int], ...] = ()
    ordinary_preds: tuple[tuple[str, int], ...] = ()
    inductive_preds: tuple[tuple[str, int], ...] = ()
    name_constant_budget: int = 0

    def __post_init__(self) -> None:
        seen: set[str] = set()
        names = list(self.constants) + [n for n, _ in self.functions]
        names += [n for n, _ in self.ordinary_preds] + [n for n, _ in self.inductive_preds]
        for n in names:
            if n in seen:
                raise DuplicateSymbol(f"symbol {n!r} declared twice")
            if NAME_CONST_RE.match(n):
                raise DuplicateSymbol(f"{n!r} is reserved for name constants")
            seen.add(n)
        for n, k in self.functions:
            if k < 1:
                raise ValueError(f"function {n} must have arity >= 1")

    def function_arity(self, name: str) -> int | None:
        return dict(self.functions).get(name)

    def pred_arity(self, name: str) -> int | None:
        d = dict(self.ordinary_preds)
        d.update(self.inductive_preds)
        return d.get(name)

    def is_inductive(self, name: str) -> bool:
        return any(n == name for n, _ in self.inductive_preds)

    def is_ordinary(self, name: str) -> bool:
        return any(n == name for n, _ in self.ordinary_preds)

    def is_constant(self, name: str) -> bool:
        return name in self.constants

    @property
    def inductive_names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.inductive_preds)

    def inductive_index(self, name: str) -> int:
        return self.inductive_names.index(name)

    def symbols(self) -> set[str]:
        out = set(self.constants)
        out.update(n for n, _ in self.functions)
        out.update(n for n, _ in self.ordinary_preds)
        out.update(n for n, _ in self.inductive_preds)
        return out

    def with_budget(self, budget: int) -> "Signature":
        return Signature(self.constants, self.functions, self.ordinary_preds,
                         self.inductive_preds, budget)


@dataclass(frozen=True)
class ProductionRule:
    """``ordinary, inductive => pred(args)``; ``index`` is r, 1-based among rules of ``pred``."""

    pred: str
    args: tuple[Term, ...]
    ordinary: tuple[Atom, ...] = ()
    inductive: tuple[Atom, ...] = ()
    name: str = ""
    index: int = 1
    variables: tuple[str, ...] = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "variables",
            var_order(list(self.args) + list(self.ordinary) + list(self.inductive)))

    @property
    def head(self) -> Atom:
        return Atom(self.pred, self.args, True)

    @property
    def premises(self) -> tuple[Atom, ...]:
        return self.ordinary + self.inductive

    def __str__(self) -> str:
        prem = ", ".join(str(a) for a in self.premises)
        label = self.name or f"{self.pred}{self.index}"
        return f"rule {label}: {prem + ' ' if prem else ''}=> {self.head};"


def rules_for(rules: Iterable[ProductionRule], pred: str) -> list[ProductionRule]:
    return [r for r in rules if r.pred == pred]


def find_rule(rules: Iterable[ProductionRule], pred: str, index: int) -> ProductionRule | None:
    for r in rules:
        if r.pred == pred and r.index == index:
            return r
    return None
