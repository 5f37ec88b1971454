"""Finite structures, Tarski evaluation, the production-rule operator and its least fixpoint."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import FolidError, UnboundVariable
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
    Sequent,
    Signature,
    Term,
    Var,
    conj,
    disj,
    fresh_var,
    free_vars,
    rules_for,
    substitute,
)

Tuple = tuple[int, ...]
PredFamily = tuple[frozenset, ...]


@dataclass(frozen=True)
class FiniteStructure:
    """Universe ``0..size-1``; function tables are row-major over U^arity."""

    sig: Signature
    size: int
    consts: Mapping[str, int] = field(default_factory=dict)
    funcs: Mapping[str, tuple[int, ...]] = field(default_factory=dict)
    preds: Mapping[str, frozenset] = field(default_factory=dict)
    ind: Mapping[str, frozenset] = field(default_factory=dict)
    names: tuple[int, ...] = ()

    def __hash__(self) -> int:
        return hash((self.size, tuple(sorted(self.consts.items())),
                     tuple(sorted(self.funcs.items())), self.names))

    @property
    def universe(self) -> range:
        return range(self.size)

    def apply(self, fn: str, args: Sequence[int]) -> int:
        idx = 0
        for a in args:
            idx = idx * self.size + a
        return self.funcs[fn][idx]

    def family(self) -> PredFamily:
        return tuple(frozenset(self.ind.get(p, frozenset())) for p in self.sig.inductive_names)

    def with_family(self, fam: PredFamily) -> "FiniteStructure":
        return replace(self, ind=dict(zip(self.sig.inductive_names, fam)))

    def is_name_extended(self) -> bool:
        return set(self.names) == set(self.universe)


def eval_term(t: Term, m: FiniteStructure, rho: Mapping[str, int] | None = None) -> int:
    rho = rho or {}
    if isinstance(t, Var):
        try:
            return rho[t.name]
        except KeyError:
            raise UnboundVariable(f"variable {t.name} has no value") from None
    if isinstance(t, Const):
        return m.consts[t.name]
    if isinstance(t, NameConst):
        if not 1 <= t.index <= len(m.names):
            raise FolidError(f"name constant c_{t.index} is not interpreted")
        return m.names[t.index - 1]
    if isinstance(t, App):
        return m.apply(t.fn, [eval_term(a, m, rho) for a in t.args])
    raise TypeError(f"not a term: {t!r}")


def eval_formula(f: Formula, m: FiniteStructure, rho: Mapping[str, int] | None = None) -> bool:
    return _ev(f, m, dict(rho or {}))


def _ev(f: Formula, m: FiniteStructure, rho: dict[str, int]) -> bool:
    if isinstance(f, Atom):
        tup = tuple(eval_term(a, m, rho) for a in f.args)
        table = m.ind if f.inductive else m.preds
        return tup in table[f.pred]
    if isinstance(f, Eq):
        return eval_term(f.left, m, rho) == eval_term(f.right, m, rho)
    if isinstance(f, Falsum):
        return False
    if isinstance(f, Not):
        return not _ev(f.body, m, rho)
    if isinstance(f, And):
        return _ev(f.left, m, rho) and _ev(f.right, m, rho)
    if isinstance(f, Or):
        return _ev(f.left, m, rho) or _ev(f.right, m, rho)
    if isinstance(f, Imp):
        return (not _ev(f.left, m, rho)) or _ev(f.right, m, rho)
    if isinstance(f, (Forall, Exists)):
        saved = rho.get(f.var, _MISSING)
        want_all = isinstance(f, Forall)
        result = want_all
        for u in m.universe:
            rho[f.var] = u
            if _ev(f.body, m, rho) != want_all:
                result = not want_all
                break
        if saved is _MISSING:
            del rho[f.var]
        else:
            rho[f.var] = saved
        return result
    raise TypeError(f"not a formula: {f!r}")


_MISSING = object()


def assignments(variables: Iterable[str], m: FiniteStructure) -> Iterator[dict[str, int]]:
    vs = sorted(variables)
    for vals in itertools.product(m.universe, repeat=len(vs)):
        yield dict(zip(vs, vals))


# ---------------------------------------------------------------------------
# the operator for production rules


def empty_family(sig: Signature) -> PredFamily:
    return tuple(frozenset() for _ in sig.inductive_preds)


def apply_phi(m: FiniteStructure, rules: Sequence[ProductionRule], xs: PredFamily) -> PredFamily:
    """One application of the operator, straight from its definition.

    Ordinary premises are read from ``m``; inductive premises from ``xs``.
    """
    names = m.sig.inductive_names
    out = [set() for _ in names]
    for rule in rules:
        i = names.index(rule.pred)
        for rho in assignments(rule.variables, m):
            if not all(_ev(q, m, rho) for q in rule.ordinary):
                continue
            if all(tuple(eval_term(a, m, rho) for a in p.args) in xs[names.index(p.pred)]
                   for p in rule.inductive):
                out[i].add(tuple(eval_term(a, m, rho) for a in rule.args))
    return tuple(frozenset(s) for s in out)


def kleene_stages(m: FiniteStructure, rules: Sequence[ProductionRule],
                  upto: int | None = None) -> list[PredFamily]:
    """phi^0(empty), phi^1(empty), ...

    Without ``upto`` the list stops at the first k with phi^(k+1) = phi^k, so
    ``len(result) - 1`` is the stage at which the fixpoint is reached.
    """
    stages = [empty_family(m.sig)]
    while True:
        if upto is not None and len(stages) > upto:
            return stages
        nxt = apply_phi(m, rules, stages[-1])
        if upto is None and nxt == stages[-1]:
            return stages
        stages.append(nxt)


@dataclass(frozen=True)
class GroundRule:
    head: tuple[int, Tuple]
    body: tuple[tuple[int, Tuple], ...]


def ground_rules(m: FiniteStructure, rules: Sequence[ProductionRule]) -> list[GroundRule]:
    """All instances of ``rules`` over ``m`` whose ordinary premises hold."""
    names = m.sig.inductive_names
    out: dict[GroundRule, None] = {}
    for rule in rules:
        i = names.index(rule.pred)
        for rho in assignments(rule.variables, m):
            if not all(_ev(q, m, rho) for q in rule.ordinary):
                continue
            body = tuple(sorted({(names.index(p.pred), tuple(eval_term(a, m, rho) for a in p.args))
                                 for p in rule.inductive}))
            out.setdefault(GroundRule((i, tuple(eval_term(a, m, rho) for a in rule.args)), body))
    return list(out)


def _seminaive_lfp(m: FiniteStructure, rules: Sequence[ProductionRule]) -> PredFamily:
    ground = ground_rules(m, rules)
    watching: dict[tuple[int, Tuple], list[GroundRule]] = {}
    for g in ground:
        for atom in g.body:
            watching.setdefault(atom, []).append(g)
    known: set[tuple[int, Tuple]] = set()
    delta = {g.head for g in ground if not g.body}
    while delta:
        known |= delta
        fresh: set[tuple[int, Tuple]] = set()
        for atom in delta:
            for g in watching.get(atom, ()):
                if g.head not in known and all(b in known for b in g.body):
                    fresh.add(g.head)
        delta = fresh
    out = [set() for _ in m.sig.inductive_preds]
    for i, tup in known:
        out[i].add(tup)
    return tuple(frozenset(s) for s in out)


def compute_lfp(m: FiniteStructure, rules: Sequence[ProductionRule],
                method: str = "seminaive") -> PredFamily:
    if method == "naive":
        return kleene_stages(m, rules)[-1]
    if method == "seminaive":
        return _seminaive_lfp(m, rules)
    raise ValueError(f"unknown method {method!r}")


def check_standard(m: FiniteStructure, rules: Sequence[ProductionRule]) -> bool:
    return m.family() == compute_lfp(m, rules)


def standardize(m: FiniteStructure, rules: Sequence[ProductionRule]) -> FiniteStructure:
    """``m`` with its inductive tables replaced by the least fixpoint."""
    return m.with_family(compute_lfp(m, rules))


def stage_bound(m: FiniteStructure) -> int:
    """1 + sum_i n^(k_i): no Kleene chain can be longer."""
    return 1 + sum(m.size ** k for _, k in m.sig.inductive_preds)


# ---------------------------------------------------------------------------
# k-fold unfolding


def arg_vars(arity: int) -> tuple[str, ...]:
    if arity == 1:
        return ("x",)
    return tuple(f"x{i}" for i in range(1, arity + 1))


def unfold_formula(sig: Signature, rules: Sequence[ProductionRule], pred: str, k: int) -> Formula:
    """P^(k)(xs) with argument variables ``arg_vars(arity)``; no simplification."""
    if k < 0:
        raise ValueError("k must be >= 0")
    return _unfold(sig, tuple(rules), pred, k)


@lru_cache(maxsize=None)
def _unfold(sig: Signature, rules: tuple[ProductionRule, ...], pred: str, k: int) -> Formula:
    if k == 0:
        return Falsum()
    xs = arg_vars(sig.pred_arity(pred))
    disjuncts = []
    for rule in rules_for(rules, pred):
        ren: dict[str, Term] = {}
        taken = set(xs)
        for y in rule.variables:
            fresh = fresh_var(y, taken)
            taken.add(fresh)
            ren[y] = Var(fresh)
        parts: list[Formula] = [Eq(Var(x), substitute(t, ren)) for x, t in zip(xs, rule.args)]
        parts += [substitute(q, ren) for q in rule.ordinary]
        for p in rule.inductive:
            inner = _unfold(sig, rules, p.pred, k - 1)
            inner_xs = arg_vars(len(p.args))
            parts.append(substitute(inner, {x: substitute(a, ren) for x, a in zip(inner_xs, p.args)}))
        body = conj(parts)
        for y in reversed(rule.variables):
            body = Exists(ren[y].name, body)
        disjuncts.append(body)
    return disj(disjuncts)


@dataclass(frozen=True)
class UnfoldViolation:
    pred: str
    args: Tuple
    k: int
    in_stage: bool
    formula_true: bool


def check_unfold_equivalence(m: FiniteStructure, rules: Sequence[ProductionRule],
                             k_max: int) -> list[UnfoldViolation]:
    """Compare phi^k(empty) membership against truth of P^(k) for every k <= k_max."""
    stages = kleene_stages(m, rules, upto=k_max)
    out = []
    for i, (p, arity) in enumerate(m.sig.inductive_preds):
        xs = arg_vars(arity)
        for k in range(k_max + 1):
            f = unfold_formula(m.sig, rules, p, k)
            for tup in itertools.product(m.universe, repeat=arity):
                lhs = tup in stages[k][i]
                rhs = eval_formula(f, m, dict(zip(xs, tup)))
                if lhs != rhs:
                    out.append(UnfoldViolation(p, tup, k, lhs, rhs))
    return out


def standard_by_unfolding(m: FiniteStructure, rules: Sequence[ProductionRule],
                          bound: int | None = None) -> bool:
    """Standardness read through unfoldings: P(u) iff P^(k)(u) for some k <= bound."""
    bound = stage_bound(m) if bound is None else bound
    for p, arity in m.sig.inductive_preds:
        xs = arg_vars(arity)
        forms = [unfold_formula(m.sig, rules, p, k) for k in range(bound + 1)]
        for tup in itertools.product(m.universe, repeat=arity):
            rho = dict(zip(xs, tup))
            some_k = any(eval_formula(f, m, rho) for f in forms)
            if some_k != (tup in m.ind[p]):
                return False
    return True


# ---------------------------------------------------------------------------
# sequents


def sequent_valid(s: Sequent, m: FiniteStructure) -> bool:
    return sequent_counterexample(s, m) is None


def sequent_counterexample(s: Sequent, m: FiniteStructure) -> dict[str, int] | None:
    for rho in assignments(free_vars(s), m):
        if all(_ev(f, m, rho) for f in s.antecedent) and not any(_ev(f, m, rho) for f in s.succedent):
            return rho
    return None
