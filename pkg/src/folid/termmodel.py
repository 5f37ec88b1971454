"""Name extension and term models over the closed terms of the extended signature.

A term model is represented by the classes of a depth-bounded enumeration of
closed terms.  This is exact once the base structure is name-extended: every
class already contains a name constant at depth 0, and deeper terms only fall
into existing classes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .errors import BudgetTooSmall, FolidError, NotNameExtended, OpenFormula
from .semantics import FiniteStructure, check_standard, eval_formula, eval_term
from .syntax import App, Const, Formula, NameConst, ProductionRule, Signature, Term, free_vars

DEFAULT_DEPTH = 2


def name_extend(m: FiniteStructure, budget: int | None = None) -> FiniteStructure:
    """M_c: c_i names element i-1 for i <= n; surplus names all denote element 0."""
    b = m.sig.name_constant_budget if budget is None else budget
    if b < m.size:
        raise BudgetTooSmall(f"{m.size} elements need at least {m.size} name constants, have {b}")
    names = tuple(i if i < m.size else 0 for i in range(b))
    return FiniteStructure(m.sig.with_budget(b), m.size, m.consts, m.funcs, m.preds, m.ind, names)


def check_name_standard(m: FiniteStructure, rules: Sequence[ProductionRule],
                        budget: int | None = None) -> bool:
    if not check_standard(m, rules):
        raise FolidError("precondition violated: the base structure is not standard")
    b = max(m.size, m.sig.name_constant_budget) if budget is None else budget
    return check_standard(name_extend(m, b), rules)


@dataclass(frozen=True)
class TermUniverse:
    """Closed terms of the signature extended by c_1..c_budget, up to ``depth``."""

    sig: Signature
    depth: int = DEFAULT_DEPTH
    budget: int | None = None
    terms: tuple[Term, ...] = field(init=False)

    def __post_init__(self) -> None:
        b = self.sig.name_constant_budget if self.budget is None else self.budget
        object.__setattr__(self, "budget", b)
        object.__setattr__(self, "terms", tuple(enumerate_terms(self.sig, self.depth, b)))

    def tuples(self, arity: int):
        return itertools.product(self.terms, repeat=arity)

    def __contains__(self, t: Term) -> bool:
        return t in self._index

    @property
    def _index(self) -> frozenset:
        idx = self.__dict__.get("_idx")
        if idx is None:
            idx = frozenset(self.terms)
            object.__setattr__(self, "_idx", idx)
        return idx


def enumerate_terms(sig: Signature, depth: int, budget: int) -> list[Term]:
    """Deterministic: by depth, then by function declaration order and argument order."""
    levels: list[list[Term]] = [[Const(c) for c in sig.constants] + [NameConst(i) for i in range(1, budget + 1)]]
    for d in range(1, depth + 1):
        upto = [t for lvl in levels for t in lvl]
        new: list[Term] = []
        for fn, k in sig.functions:
            for args in itertools.product(upto, repeat=k):
                if any(t in levels[d - 1] for t in args):
                    new.append(App(fn, args))
        levels.append(new)
    return [t for lvl in levels for t in lvl]


@dataclass(frozen=True)
class TermModel:
    """Equivalence classes of enumerated closed terms under equality in ``base``.

    ``classes`` is ordered by representative; the representative of a class is
    its least-index name constant.
    """

    base: FiniteStructure
    universe: TermUniverse
    classes: tuple[tuple[Term, ...], ...]
    values: tuple[int, ...]  # element of ``base`` denoted by each class

    @property
    def representatives(self) -> tuple[Term, ...]:
        out = []
        for cls in self.classes:
            names = [t for t in cls if isinstance(t, NameConst)]
            out.append(min(names, key=lambda c: c.index) if names else cls[0])
        return tuple(out)

    def class_of(self, t: Term) -> int:
        return self.values.index(eval_term(t, self.base))

    def as_structure(self) -> FiniteStructure:
        """The term model as a finite structure whose elements are class indices."""
        m = self.base
        where = {v: i for i, v in enumerate(self.values)}
        n = len(self.classes)
        consts = {c: where[m.consts[c]] for c in m.sig.constants}
        funcs = {}
        for fn, k in m.sig.functions:
            funcs[fn] = tuple(where[m.apply(fn, [self.values[a] for a in args])]
                              for args in itertools.product(range(n), repeat=k))

        def induced(table: frozenset) -> frozenset:
            return frozenset(tuple(where[v] for v in row) for row in table
                             if all(v in where for v in row))

        preds = {p: induced(rows) for p, rows in m.preds.items()}
        ind = {p: induced(rows) for p, rows in m.ind.items()}
        names = tuple(where[v] for v in m.names)
        return FiniteStructure(m.sig, n, consts, funcs, preds, ind, names)


def build_term_model(m: FiniteStructure, depth: int = DEFAULT_DEPTH) -> TermModel:
    if not m.is_name_extended():
        raise NotNameExtended("term models are built over name-extended structures")
    universe = TermUniverse(m.sig, depth, len(m.names))
    by_value: dict[int, list[Term]] = {}
    for t in universe.terms:
        by_value.setdefault(eval_term(t, m), []).append(t)

    def rep_index(v: int) -> int:
        return min(t.index for t in by_value[v] if isinstance(t, NameConst))

    order = sorted(by_value, key=rep_index)
    return TermModel(m, universe, tuple(tuple(by_value[v]) for v in order), tuple(order))


def check_termmodel_name_extended(tm: TermModel) -> bool:
    return all(any(isinstance(t, NameConst) for t in cls) for cls in tm.classes)


def check_termmodel_standard(tm: TermModel, rules: Sequence[ProductionRule]) -> bool:
    return check_standard(tm.as_structure(), rules)


def check_well_defined(tm: TermModel) -> bool:
    """t ~ u implies f(t) ~ f(u) for every unary function and enumerated t, u."""
    m = tm.base
    for fn, k in m.sig.functions:
        if k != 1:
            continue
        for cls in tm.classes:
            images = {eval_term(App(fn, (t,)), m) for t in cls}
            if len(images) > 1:
                return False
    return True


def term_model_of(m: FiniteStructure, depth: int = DEFAULT_DEPTH) -> TermModel:
    """M_T when ``m`` is name-extended, otherwise M_cT with a budget of |U| names."""
    if not m.is_name_extended():
        m = name_extend(m, max(m.size, m.sig.name_constant_budget))
    return build_term_model(m, depth)


def check_truth_transfer(m: FiniteStructure, a: Formula, depth: int = DEFAULT_DEPTH) -> tuple[bool, bool]:
    """(M |= A, M_T |= A), using M_cT when ``m`` is not name-extended."""
    if free_vars(a):
        raise OpenFormula(f"{a} has free variables {sorted(free_vars(a))}")
    tm = term_model_of(m, depth)
    return eval_formula(a, m), eval_formula(a, tm.as_structure())
