"""Seeded generators for closed formulas, used by tests and by the truth-clause checker."""

from __future__ import annotations

import random
from typing import Iterable, Sequence

from .syntax import (
    And,
    App,
    Atom,
    Const,
    Eq,
    Exists,
    Forall,
    Formula,
    Imp,
    NameConst,
    Not,
    Or,
    Signature,
    Term,
    Var,
    formula_depth,
    free_vars,
    subformulas,
)

_CONNECTIVES = ("atom", "not", "and", "or", "imp", "forall", "exists")


def random_term(rng: random.Random, sig: Signature, scope: Sequence[str], names: int, depth: int) -> Term:
    leaves: list[Term] = [Const(c) for c in sig.constants]
    leaves += [NameConst(i) for i in range(1, names + 1)]
    leaves += [Var(v) for v in scope]
    if depth > 0 and sig.functions and (not leaves or rng.random() < 0.4):
        fn, k = rng.choice(sig.functions)
        return App(fn, tuple(random_term(rng, sig, scope, names, depth - 1) for _ in range(k)))
    if not leaves:
        raise ValueError("signature has no closed terms")
    return rng.choice(leaves)


def random_formula(rng: random.Random, sig: Signature, depth: int, scope: tuple[str, ...] = (),
                   variables: Sequence[str] = ("x", "y"), names: int = 0, term_depth: int = 2) -> Formula:
    kind = "atom" if depth == 0 else rng.choice(_CONNECTIVES)
    if kind == "atom":
        preds = [(p, k, False) for p, k in sig.ordinary_preds] + [(p, k, True) for p, k in sig.inductive_preds]
        if not preds or rng.random() < 0.35:
            return Eq(random_term(rng, sig, scope, names, term_depth), random_term(rng, sig, scope, names, term_depth))
        p, k, ind = rng.choice(preds)
        return Atom(p, tuple(random_term(rng, sig, scope, names, term_depth) for _ in range(k)), ind)
    sub = lambda sc=scope: random_formula(rng, sig, depth - 1, sc, variables, names, term_depth)  # noqa: E731
    if kind == "not":
        return Not(sub())
    if kind in ("forall", "exists"):
        v = rng.choice(list(variables))
        body = sub(tuple(dict.fromkeys(scope + (v,))))
        return Forall(v, body) if kind == "forall" else Exists(v, body)
    cls = {"and": And, "or": Or, "imp": Imp}[kind]
    return cls(sub(), sub())


def generate_corpus(sig: Signature, count: int, depth: int = 3, seed: int = 0,
                    names: int = 0, term_depth: int = 2, max_len: int | None = None,
                    variables: Sequence[str] = ("x", "y")) -> list[Formula]:
    """``count`` distinct closed formulas of depth at most ``depth``, in generation order."""
    rng = random.Random(seed)
    seen: dict[Formula, None] = {}
    attempts = 0
    while len(seen) < count:
        attempts += 1
        if attempts > 200 * count:
            raise ValueError(f"could only generate {len(seen)} distinct formulas")
        f = random_formula(rng, sig, rng.randint(0, depth), (), variables, names, term_depth)
        if free_vars(f) or formula_depth(f) > depth:
            continue
        if max_len is not None and len(str(f)) > max_len:
            continue
        seen.setdefault(f)
    return list(seen)


def closed_subformulas(formulas: Iterable[Formula]) -> list[Formula]:
    out: dict[Formula, None] = {}
    for f in formulas:
        for g in subformulas(f):
            if not free_vars(g):
                out.setdefault(g)
    return list(out)
