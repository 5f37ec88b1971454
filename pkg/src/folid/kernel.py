"""Rule instances, cyclic proof graphs and local rule checking.

A proof graph is a finite tree of rule nodes whose leaves may be buds; each
bud points back to a companion carrying the same sequent.  Sequents are sets,
so contraction is implicit and ``Wk`` is the only thinning rule.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Mapping, Sequence

import networkx as nx

from .errors import (
    BadParameters,
    FolidError,
    FreshnessViolation,
    NoSuchProductionRule,
    SourceSpan,
)
from .syntax import (
    And,
    Atom,
    Eq,
    Exists,
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
    find_rule,
    free_vars,
    rules_for,
    substitute,
)

LEFT_RULES = {"NegL": Not, "OrL": Or, "AndL": And, "ImpL": Imp, "AllL": Forall, "ExL": Exists}
RIGHT_RULES = {"NegR": Not, "OrR": Or, "AndR": And, "ImpR": Imp, "AllR": Forall, "ExR": Exists}


@dataclass(frozen=True)
class RuleInstance:
    """A rule name with its parameters.

    ``pred``/``rule_index`` name the inductive predicate of ``IndR``/``Case``
    and the production rule of ``IndR``.  ``params`` keys: ``p`` principal
    formula (or its index on the relevant side), ``cut``, ``seq`` (premise or
    template sequent), ``theta``, ``t``, ``u``, ``x``, ``y``, ``args``,
    ``fresh`` and ``keep`` (keep the principal formula in the premises).
    """

    name: str
    params: Mapping[str, Any] = field(default_factory=dict)
    pred: str | None = None
    rule_index: int | None = None

    def get(self, key: str, default: Any = None) -> Any:
        return self.params.get(key, default)

    def need(self, key: str) -> Any:
        if key not in self.params:
            raise BadParameters(f"{self.name} needs parameter {key!r}")
        return self.params[key]


@dataclass(frozen=True)
class ProofNode:
    id: str
    sequent: Sequent
    rule: RuleInstance | None  # None for buds
    premises: tuple[str, ...] = ()
    companion: str | None = None
    span: SourceSpan | None = None

    @property
    def is_bud(self) -> bool:
        return self.companion is not None


@dataclass(frozen=True)
class ProofGraph:
    nodes: Mapping[str, ProofNode]
    root: str
    order: tuple[str, ...]

    def __hash__(self) -> int:
        return hash((self.root, self.order))

    def __eq__(self, other: object) -> bool:
        return self is other

    def successors(self, nid: str) -> tuple[str, ...]:
        node = self.nodes[nid]
        return (node.companion,) if node.is_bud else node.premises

    def companions(self) -> list[str]:
        return list(dict.fromkeys(n.companion for n in map(self.nodes.get, self.order) if n.is_bud))

    def buds(self) -> list[str]:
        return [nid for nid in self.order if self.nodes[nid].is_bud]

    def parent_map(self) -> dict[str, str]:
        out = {}
        for nid in self.order:
            for c in self.nodes[nid].premises:
                out.setdefault(c, nid)
        return out

    def tree_path(self, target: str) -> list[str]:
        """Node ids from the root down to ``target`` along premise edges."""
        parents = self.parent_map()
        path = [target]
        while path[-1] != self.root:
            if path[-1] not in parents:
                raise FolidError(f"{target} is not reachable from the root")
            path.append(parents[path[-1]])
        return path[::-1]

    def is_acyclic(self) -> bool:
        return not self.buds()


# ---------------------------------------------------------------------------
# predicate dependency


@lru_cache(maxsize=None)
def _dependency_sccs(sig: Signature, rules: tuple[ProductionRule, ...]) -> dict[str, frozenset]:
    g = nx.DiGraph()
    g.add_nodes_from(sig.inductive_names)
    for r in rules:
        for p in r.inductive:
            g.add_edge(r.pred, p.pred)
    out = {}
    for comp in nx.strongly_connected_components(g):
        for p in comp:
            out[p] = frozenset(comp)
    return out


def mutually_dependent(sig: Signature, rules: Sequence[ProductionRule], pred: str) -> tuple[str, ...]:
    """The strongly connected component of ``pred``, in signature order."""
    comp = _dependency_sccs(sig, tuple(rules))[pred]
    return tuple(p for p in sig.inductive_names if p in comp)


def case_rules(sig: Signature, rules: Sequence[ProductionRule], pred: str) -> list[ProductionRule]:
    """Production rules giving the case distinctions of ``Case pred``, in premise order."""
    return [r for q in mutually_dependent(sig, rules, pred) for r in rules_for(rules, q)]


# ---------------------------------------------------------------------------
# premises of a rule instance


def _principal(conc: Sequent, inst: RuleInstance, side: str, shape=None) -> Formula:
    forms = conc.antecedent if side == "left" else conc.succedent
    p = inst.need("p")
    if isinstance(p, int):
        if not 0 <= p < len(forms):
            raise BadParameters(f"{inst.name}: index {p} out of range")
        p = forms[p]
    if p not in forms:
        where = "antecedent" if side == "left" else "succedent"
        raise BadParameters(f"{inst.name}: principal formula {p} is not in the {where}")
    if shape is not None and not isinstance(p, shape):
        raise BadParameters(f"{inst.name}: principal formula {p} has the wrong shape")
    return p


def _without(forms: Sequence[Formula], p: Formula, inst: RuleInstance) -> tuple[Formula, ...]:
    if inst.get("keep", False):
        return tuple(forms)
    return tuple(f for f in forms if f != p)


def _eigen(conc: Sequent, inst: RuleInstance, q: Forall | Exists) -> Formula:
    y = inst.get("x", q.var)
    if y in free_vars(conc):
        raise FreshnessViolation(f"{inst.name}: eigenvariable {y} occurs free in the conclusion")
    return q.body if y == q.var else substitute(q.body, {q.var: Var(y)})


def expected_premises(conc: Sequent, inst: RuleInstance, sig: Signature,
                      rules: Sequence[ProductionRule]) -> list[Sequent]:
    """The premises the rule template produces from ``conc``."""
    G, D = conc.antecedent, conc.succedent
    name = inst.name
    if name == "Axiom":
        if not set(G) & set(D):
            raise BadParameters("Axiom: antecedent and succedent share no formula")
        return []
    if name == "EqR":
        if not any(isinstance(f, Eq) and f.left == f.right for f in D):
            raise BadParameters("EqR: no formula t = t in the succedent")
        return []
    if name == "Wk":
        s = inst.need("seq")
        if not (set(s.antecedent) <= set(G) and set(s.succedent) <= set(D)):
            raise BadParameters("Wk: premise is not contained in the conclusion")
        return [s]
    if name == "Cut":
        f = inst.need("cut")
        return [Sequent(G, D + (f,)), Sequent(G + (f,), D)]
    if name == "Subst":
        s, theta = inst.need("seq"), inst.need("theta")
        if substitute(s, theta) != conc:
            raise BadParameters("Subst: conclusion is not the premise under theta")
        return [s]
    if name in LEFT_RULES:
        p = _principal(conc, inst, "left", LEFT_RULES[name])
        g = _without(G, p, inst)
        if name == "NegL":
            return [Sequent(g, D + (p.body,))]
        if name == "OrL":
            return [Sequent(g + (p.left,), D), Sequent(g + (p.right,), D)]
        if name == "AndL":
            return [Sequent(g + (p.left, p.right), D)]
        if name == "ImpL":
            return [Sequent(g, D + (p.left,)), Sequent(g + (p.right,), D)]
        if name == "AllL":
            return [Sequent(g + (substitute(p.body, {p.var: inst.need("t")}),), D)]
        return [Sequent(g + (_eigen(conc, inst, p),), D)]
    if name in RIGHT_RULES:
        p = _principal(conc, inst, "right", RIGHT_RULES[name])
        d = _without(D, p, inst)
        if name == "NegR":
            return [Sequent(G + (p.body,), d)]
        if name == "OrR":
            return [Sequent(G, d + (p.left, p.right))]
        if name == "AndR":
            return [Sequent(G, d + (p.left,)), Sequent(G, d + (p.right,))]
        if name == "ImpR":
            return [Sequent(G + (p.left,), d + (p.right,))]
        if name == "ExR":
            return [Sequent(G, d + (substitute(p.body, {p.var: inst.need("t")}),))]
        return [Sequent(G, d + (_eigen(conc, inst, p),))]
    if name == "EqL":
        return [_eql_premise(conc, inst)]
    if name == "IndR":
        return _indr_premises(conc, inst, sig, rules)
    if name == "Case":
        return [s for s, _ in case_premises(conc, inst, sig, rules)]
    raise BadParameters(f"unknown rule {name}")


def eql_substitutions(inst: RuleInstance) -> tuple[Sequent, dict[str, Term], dict[str, Term], Eq]:
    tmpl = inst.need("seq")
    x, y, t, u = inst.need("x"), inst.need("y"), inst.need("t"), inst.need("u")
    if x == y:
        raise BadParameters("EqL: x and y must differ")
    return tmpl, {x: t, y: u}, {x: u, y: t}, Eq(t, u)


def _eql_premise(conc: Sequent, inst: RuleInstance) -> Sequent:
    tmpl, fwd, back, eq = eql_substitutions(inst)
    inst_conc = substitute(tmpl, fwd)
    if Sequent(inst_conc.antecedent + (eq,), inst_conc.succedent) != conc:
        raise BadParameters("EqL: conclusion does not match the template under [x:=t, y:=u]")
    return substitute(tmpl, back)


def _production(sig: Signature, rules: Sequence[ProductionRule], pred: str, index: int) -> ProductionRule:
    r = find_rule(rules, pred, index)
    if r is None:
        raise NoSuchProductionRule(f"{pred} has no production rule number {index}")
    return r


def _indr_premises(conc: Sequent, inst: RuleInstance, sig: Signature,
                   rules: Sequence[ProductionRule]) -> list[Sequent]:
    r = _production(sig, rules, inst.pred, inst.rule_index)
    args = tuple(inst.get("args", ()))
    if len(args) != len(r.variables):
        raise BadParameters(f"IndR: rule {r.name} has {len(r.variables)} variables, got {len(args)} terms")
    theta = dict(zip(r.variables, args))
    head = substitute(r.head, theta)
    if head not in conc.succedent:
        raise BadParameters(f"IndR: {head} is not in the succedent")
    d = _without(conc.succedent, head, inst)
    return [Sequent(conc.antecedent, d + (substitute(q, theta),)) for q in r.premises]


def case_premises(conc: Sequent, inst: RuleInstance, sig: Signature,
                  rules: Sequence[ProductionRule]) -> list[tuple[Sequent, tuple[Atom, ...]]]:
    """Each case distinction with its case-descendants."""
    p = _principal(conc, inst, "left", Atom)
    if p.pred != inst.pred:
        raise BadParameters(f"Case({inst.pred}): principal formula is {p}")
    cases = case_rules(sig, rules, inst.pred)
    fresh = tuple(inst.get("fresh", ()))
    if len(fresh) != len(cases):
        raise BadParameters(f"Case({inst.pred}) has {len(cases)} case distinctions, got {len(fresh)} fresh lists")
    taken = free_vars(conc)
    g = _without(conc.antecedent, p, inst)
    out = []
    for r, ys in zip(cases, fresh):
        if len(ys) != len(r.variables) or len(set(ys)) != len(ys):
            raise BadParameters(f"Case: rule {r.name} needs {len(r.variables)} distinct fresh variables")
        clash = [y for y in ys if y in taken]
        if clash:
            raise FreshnessViolation(f"Case: {', '.join(clash)} occurs free in the conclusion")
        if len(r.args) != len(p.args):
            raise BadParameters(f"Case: rule {r.name} concludes {r.pred} of a different arity")
        theta = {x: Var(y) for x, y in zip(r.variables, ys)}
        eqs = tuple(Eq(a, substitute(t, theta)) for a, t in zip(p.args, r.args))
        ords = tuple(substitute(q, theta) for q in r.ordinary)
        desc = tuple(substitute(q, theta) for q in r.inductive)
        out.append((Sequent(g + eqs + ords + desc, conc.succedent), desc))
    return out


# ---------------------------------------------------------------------------
# whole graphs


@dataclass(frozen=True)
class LocalViolation:
    node: str
    rule: str
    violation: str
    detail: str

    def to_json(self) -> dict:
        return {"node": self.node, "rule": self.rule, "violation": self.violation, "detail": self.detail}


def check_local(pg: ProofGraph, sig: Signature, rules: Sequence[ProductionRule]) -> list[LocalViolation]:
    """Empty iff ``pg`` is a pre-proof: every rule node matches its template and buds match companions."""
    out: list[LocalViolation] = []
    used: dict[str, str] = {}
    for nid in pg.order:
        node = pg.nodes[nid]
        if node.is_bud:
            comp = pg.nodes.get(node.companion)
            if comp is None:
                out.append(LocalViolation(nid, "bud", "DanglingPremise", f"no node {node.companion}"))
            elif comp.is_bud:
                out.append(LocalViolation(nid, "bud", "BadCompanion", f"{comp.id} is itself a bud"))
            elif comp.sequent != node.sequent:
                out.append(LocalViolation(nid, "bud", "BudSequentMismatch", f"companion {comp.id} differs"))
            continue
        for c in node.premises:
            if c not in pg.nodes:
                out.append(LocalViolation(nid, node.rule.name, "DanglingPremise", f"no node {c}"))
            elif c == pg.root or c in used:
                out.append(LocalViolation(nid, node.rule.name, "SharedNode",
                                          f"{c} is already a premise of {used.get(c, 'nothing: it is the root')}"))
            else:
                used[c] = nid
        try:
            want = expected_premises(node.sequent, node.rule, sig, rules)
        except FolidError as e:
            out.append(LocalViolation(nid, node.rule.name, type(e).__name__, e.message))
            continue
        have = [pg.nodes[c].sequent for c in node.premises if c in pg.nodes]
        if want != have:
            out.append(LocalViolation(nid, node.rule.name, "PremiseMismatch",
                                      "expected [" + "; ".join(map(str, want)) + "]"))
    reach = {pg.root}
    todo = [pg.root]
    while todo:
        for c in pg.successors(todo.pop()):
            if c in pg.nodes and c not in reach:
                reach.add(c)
                todo.append(c)
    for nid in pg.order:
        if nid not in reach:
            out.append(LocalViolation(nid, "-", "Unreachable", "not connected to the root"))
    return sorted(out, key=lambda v: (pg.order.index(v.node), v.violation))


@dataclass(frozen=True)
class TreeNode:
    id: str
    sequent: Sequent
    children: tuple["TreeNode", ...] = ()

    def size(self) -> int:
        return 1 + sum(c.size() for c in self.children)


def unfold_tree(pg: ProofGraph, depth: int) -> TreeNode:
    """Replace buds by their companion subtrees up to ``depth`` times along each branch.

    At depth 0 the finite tree is returned with buds left as leaves.
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")

    def go(nid: str, budget: int) -> TreeNode:
        node = pg.nodes[nid]
        if node.is_bud:
            if budget == 0:
                return TreeNode(nid, node.sequent)
            return go(node.companion, budget - 1)
        return TreeNode(nid, node.sequent, tuple(go(c, budget) for c in node.premises))

    return go(pg.root, depth)
