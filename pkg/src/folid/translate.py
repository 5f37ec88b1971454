"""Peano arithmetic with an extra unary function F, relativised to the inductive predicate N."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .semantics import FiniteStructure, check_standard, eval_formula, eval_term
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
    Not,
    Or,
    ProductionRule,
    Sequent,
    Signature,
    Term,
    Var,
    free_vars,
)

ZERO = Const("0")


def s(t: Term) -> Term:
    return App("s", (t,))


def plus(a: Term, b: Term) -> Term:
    return App("+", (a, b))


def times(a: Term, b: Term) -> Term:
    return App("*", (a, b))


def N(t: Term) -> Atom:
    return Atom("N", (t,), True)


def builtin_pa_signature() -> tuple[Signature, tuple[ProductionRule, ...]]:
    sig = Signature(("0",), (("s", 1), ("F", 1), ("+", 2), ("*", 2)), (), (("N", 1),))
    x = Var("x")
    rules = (
        ProductionRule("N", (ZERO,), (), (), "z", 1),
        ProductionRule("N", (s(x),), (), (N(x),), "sc", 2),
    )
    return sig, rules


def peano_axioms() -> tuple[Formula, ...]:
    x, y = Var("x"), Var("y")
    return (
        Forall("x", Not(Eq(s(x), ZERO))),
        Forall("x", Forall("y", Imp(Eq(s(x), s(y)), Eq(x, y)))),
        Forall("x", Eq(plus(x, ZERO), x)),
        Forall("x", Forall("y", Eq(plus(x, s(y)), s(plus(x, y))))),
        Forall("x", Eq(times(x, ZERO), ZERO)),
        Forall("x", Forall("y", Eq(times(x, s(y)), plus(times(x, y), x)))),
    )


def f_axiom() -> Formula:
    """(F): N is closed under F."""
    x = Var("x")
    return Forall("x", Imp(N(x), N(App("F", (x,)))))


def relativize(a: Formula) -> Formula:
    if isinstance(a, (Eq, Atom, Falsum)):
        return a
    if isinstance(a, Not):
        return Not(relativize(a.body))
    if isinstance(a, (And, Or, Imp)):
        return type(a)(relativize(a.left), relativize(a.right))
    if isinstance(a, Forall):
        return Forall(a.var, Imp(N(Var(a.var)), relativize(a.body)))
    if isinstance(a, Exists):
        return Exists(a.var, And(N(Var(a.var)), relativize(a.body)))
    raise TypeError(f"not a formula: {a!r}")


def is_guarded(f: Formula) -> bool:
    """Every quantifier body starts with the N-guard on its own variable."""
    if isinstance(f, (Eq, Atom, Falsum)):
        return True
    if isinstance(f, Not):
        return is_guarded(f.body)
    if isinstance(f, (And, Or, Imp)):
        return is_guarded(f.left) and is_guarded(f.right)
    shape = Imp if isinstance(f, Forall) else And
    body = f.body
    return isinstance(body, shape) and body.left == N(Var(f.var)) and is_guarded(body.right)


def hardness_sequent(a: Formula) -> Sequent:
    """(PA1)^N, ..., (PA6)^N, (F), N(x1), ..., N(xn) |- A^N."""
    ant = [relativize(p) for p in peano_axioms()] + [f_axiom()]
    ant += [N(Var(x)) for x in sorted(free_vars(a))]
    return Sequent(tuple(ant), (relativize(a),))


# ---------------------------------------------------------------------------
# finite shadows


def pa_terms(sig: Signature, depth: int, variables: Sequence[str] = ()) -> list[Term]:
    """Terms over the signature and ``variables`` up to ``depth``."""
    levels: list[list[Term]] = [[Const(c) for c in sig.constants] + [Var(v) for v in variables]]
    for d in range(1, depth + 1):
        upto = [t for lvl in levels for t in lvl]
        new = []
        for fn, k in sig.functions:
            for args in itertools.product(upto, repeat=k):
                if any(t in levels[d - 1] for t in args):
                    new.append(App(fn, args))
        levels.append(new)
    return [t for lvl in levels for t in lvl]


@dataclass
class B1Report:
    preconditions: list[str] = field(default_factory=list)
    violations: list[tuple[str, dict]] = field(default_factory=list)
    checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.preconditions and not self.violations


def check_b1(m: FiniteStructure, rules: Sequence[ProductionRule], depth: int = 2,
             variables: Sequence[str] = ()) -> B1Report:
    """Every term value lies in [[N]], for assignments into [[N]].

    Preconditions are standardness, (PA2)^N-(PA6)^N and (F); (PA1)^N has no
    finite model and is left out.  Failed preconditions are reported.
    """
    report = B1Report()
    if not check_standard(m, rules):
        report.preconditions.append("standard")
    for i, ax in enumerate(peano_axioms()[1:], start=2):
        if not eval_formula(relativize(ax), m):
            report.preconditions.append(f"PA{i}")
    if not eval_formula(f_axiom(), m):
        report.preconditions.append("F")
    nat = sorted(u for (u,) in m.ind["N"])
    for t in pa_terms(m.sig, depth, variables):
        vs = sorted(free_vars(t))
        for vals in itertools.product(nat, repeat=len(vs)):
            rho = dict(zip(vs, vals))
            report.checked += 1
            if (eval_term(t, m, rho),) not in m.ind["N"]:
                report.violations.append((str(t), rho))
    return report


def eval_on_n(f: Formula, m: FiniteStructure, rho: Mapping[str, int] | None = None) -> bool:
    """Truth of ``f`` with every quantifier ranging over [[N]] only."""
    dom = sorted(u for (u,) in m.ind["N"])
    rho = dict(rho or {})

    def ev(g: Formula) -> bool:
        if isinstance(g, (Eq, Atom, Falsum)):
            return eval_formula(g, m, rho)
        if isinstance(g, Not):
            return not ev(g.body)
        if isinstance(g, And):
            return ev(g.left) and ev(g.right)
        if isinstance(g, Or):
            return ev(g.left) or ev(g.right)
        if isinstance(g, Imp):
            return (not ev(g.left)) or ev(g.right)
        saved = rho.get(g.var)
        results = []
        for u in dom:
            rho[g.var] = u
            results.append(ev(g.body))
        if saved is None:
            rho.pop(g.var, None)
        else:
            rho[g.var] = saved
        return all(results) if isinstance(g, Forall) else any(results)

    return ev(f)


def check_b2_finite(m: FiniteStructure, b: Formula, rho: Mapping[str, int] | None = None) -> tuple[bool, bool]:
    """(B with quantifiers over [[N]], B^N) in ``m``."""
    return eval_on_n(b, m, rho), eval_formula(relativize(b), m, rho)
