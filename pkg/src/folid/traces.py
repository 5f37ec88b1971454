"""Trace relations and the global trace condition for cyclic proof graphs.

Trace positions are indices of inductive atoms in a node's canonical
antecedent.  The condition is decided size-change style: relations are
composed along segments (from the root or a companion, down the tree to a bud,
then across to its companion) and closed under composition.  The proof passes
iff every idempotent relation from a companion to itself has a progressing
pair ``(p, p)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .kernel import ProofGraph, case_premises, eql_substitutions
from .syntax import Atom, Formula, ProductionRule, Signature, substitute

Relation = frozenset  # of (i, j, progress)


def positions(formulas: Sequence[Formula]) -> list[int]:
    return [i for i, f in enumerate(formulas) if isinstance(f, Atom) and f.inductive]


def _identity(src: Sequence[Formula], dst: Sequence[Formula]) -> set:
    index = {f: j for j, f in enumerate(dst)}
    return {(i, index[src[i]], False) for i in positions(src) if src[i] in index}


def edge_relation(pg: ProofGraph, parent: str, child: str, sig: Signature,
                  rules: Sequence[ProductionRule]) -> Relation:
    """Trace pairs licensed on the edge ``parent -> child``."""
    node = pg.nodes[parent]
    src = node.sequent.antecedent
    dst = pg.nodes[child].sequent.antecedent
    if node.is_bud:
        return frozenset(_identity(src, dst))
    inst = node.rule
    if inst.name == "Subst":
        theta = inst.params["theta"]
        pairs = set()
        for j in positions(dst):
            image = substitute(dst[j], theta)
            pairs.update((i, j, False) for i in positions(src) if src[i] == image)
        return frozenset(pairs)
    if inst.name == "EqL":
        tmpl, fwd, back, _ = eql_substitutions(inst)
        pairs = set()
        for f in tmpl.antecedent:
            if isinstance(f, Atom) and f.inductive:
                a, b = substitute(f, fwd), substitute(f, back)
                if a in src and b in dst:
                    pairs.add((src.index(a), dst.index(b), False))
        return frozenset(pairs)
    pairs = _identity(src, dst)
    if inst.name == "Case":
        k = node.premises.index(child)
        principal = inst.params["p"]
        if isinstance(principal, int):
            principal = src[principal]
        _, desc = case_premises(node.sequent, inst, sig, rules)[k]
        i = src.index(principal)
        pairs.update((i, dst.index(d), True) for d in desc)
    return frozenset(pairs)


def compose(r: Relation, s: Relation) -> Relation:
    """Relational composition; a pair progresses if some connecting path does."""
    best: dict[tuple[int, int], bool] = {}
    by_src: dict[int, list[tuple[int, bool]]] = {}
    for j, k, p in s:
        by_src.setdefault(j, []).append((k, p))
    for i, j, p in r:
        for k, q in by_src.get(j, ()):
            best[(i, k)] = best.get((i, k), False) or p or q
    return frozenset((i, k, p) for (i, k), p in best.items())


def has_progressing_loop(r: Relation) -> bool:
    return any(i == j and p for i, j, p in r)


@dataclass(frozen=True)
class Segment:
    """A walk from ``source`` down the tree to a bud and across to its companion."""

    source: str
    target: str
    nodes: tuple[str, ...]  # source ... bud
    relation: Relation


def path_relation(pg: ProofGraph, walk: Sequence[str], sig: Signature,
                  rules: Sequence[ProductionRule]) -> Relation:
    """Composite relation along consecutive nodes of ``walk``."""
    src = pg.nodes[walk[0]].sequent.antecedent
    rel = frozenset((i, i, False) for i in positions(src))
    for a, b in zip(walk, walk[1:]):
        rel = compose(rel, edge_relation(pg, a, b, sig, rules))
    return rel


def segments(pg: ProofGraph, sig: Signature, rules: Sequence[ProductionRule]) -> list[Segment]:
    out = []
    for start in [pg.root] + [c for c in pg.companions() if c != pg.root]:
        stack = [(start,)]
        while stack:
            walk = stack.pop()
            node = pg.nodes[walk[-1]]
            if node.is_bud:
                full = walk + (node.companion,)
                out.append(Segment(start, node.companion, walk, path_relation(pg, full, sig, rules)))
                continue
            for c in reversed(node.premises):
                stack.append(walk + (c,))
    return out


@dataclass(frozen=True)
class Lasso:
    stem: tuple[str, ...]
    cycle: tuple[str, ...]

    def to_json(self) -> dict:
        return {"stem": list(self.stem), "cycle": list(self.cycle)}


@dataclass
class Verdict:
    passed: bool
    lasso: Lasso | None = None
    traces: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"verdict": "PASS" if self.passed else "FAIL",
                "lasso": self.lasso.to_json() if self.lasso else None,
                "traces": self.traces}


def closure(segs: Sequence[Segment]) -> dict[tuple[str, str, Relation], tuple[int, ...]]:
    """All composite relations between segment endpoints, each with one witnessing segment word."""
    found: dict[tuple[str, str, Relation], tuple[int, ...]] = {}
    frontier = []
    for k, s in enumerate(segs):
        key = (s.source, s.target, s.relation)
        if key not in found:
            found[key] = (k,)
            frontier.append(key)
    while frontier:
        nxt = []
        for (a, b, r) in frontier:
            for k, s in enumerate(segs):
                if s.source != b:
                    continue
                key = (a, s.target, compose(r, s.relation))
                if key not in found:
                    found[key] = found[(a, b, r)] + (k,)
                    nxt.append(key)
        frontier = nxt
    return found


def check_gtc(pg: ProofGraph, sig: Signature, rules: Sequence[ProductionRule]) -> Verdict:
    segs = segments(pg, sig, rules)
    comps = set(pg.companions())
    cl = closure(segs)
    for (a, b, r), word in sorted(cl.items(), key=lambda kv: (len(kv[1]), kv[1])):
        if a != b or a not in comps or compose(r, r) != r or has_progressing_loop(r):
            continue
        cycle: list[str] = []
        for k in word:
            cycle.extend(segs[k].nodes)
        stem = tuple(pg.tree_path(a)[:-1])
        lasso = Lasso(stem, tuple(cycle))
        return Verdict(False, lasso, describe_relation(pg, a, r))
    return Verdict(True)


def describe_relation(pg: ProofGraph, nid: str, r: Relation) -> list[str]:
    ant = pg.nodes[nid].sequent.antecedent
    return [f"{ant[i]} -> {ant[j]}{' (progress)' if p else ''}" for i, j, p in sorted(r)]


# ---------------------------------------------------------------------------
# path oracle


def lasso_edges(pg: ProofGraph, lasso: Lasso) -> list[tuple[str, str]]:
    if not lasso.cycle:
        raise ValueError("lasso has an empty cycle")
    cyc = list(lasso.cycle)
    out = []
    for a, b in zip(cyc, cyc[1:] + cyc[:1]):
        if b not in pg.successors(a):
            raise ValueError(f"{a} -> {b} is not an edge of the proof graph")
        out.append((a, b))
    return out


def lasso_has_progressing_trace(pg: ProofGraph, lasso: Lasso, sig: Signature,
                                rules: Sequence[ProductionRule]) -> bool:
    """Brute force: is there an infinitely progressing trace along stem . cycle^omega?

    Steps through the period edge by edge for up to P repetitions, P the
    number of trace positions at the cycle start, tracking (start, current,
    progressed) triples.  A progressing trace exists iff some position returns
    to itself after m <= P periods with a progress point on the way.
    """
    edges = lasso_edges(pg, lasso)
    rels = [edge_relation(pg, a, b, sig, rules) for a, b in edges]
    start = positions(pg.nodes[lasso.cycle[0]].sequent.antecedent)
    states = {(p, p, False) for p in start}
    for _ in range(len(start)):
        for rel in rels:
            nxt = set()
            for s, cur, prog in states:
                for i, j, p in rel:
                    if i == cur:
                        nxt.add((s, j, prog or p))
            states = nxt
        if any(s == cur and prog for s, cur, prog in states):
            return True
    return False


def enumerate_lassos(pg: ProofGraph, sig: Signature, rules: Sequence[ProductionRule],
                     max_stem: int = 5, max_period: int = 3) -> list[tuple[Lasso, tuple[int, ...]]]:
    """Ultimately periodic paths as segment words: stem of at most ``max_stem``
    segments from the root, period of at most ``max_period`` segments."""
    segs = segments(pg, sig, rules)
    from_node: dict[str, list[int]] = {}
    for k, s in enumerate(segs):
        from_node.setdefault(s.source, []).append(k)
    stems: list[tuple[int, ...]] = [()]
    frontier: list[tuple[int, ...]] = [()]
    for _ in range(max_stem):
        nxt = []
        for w in frontier:
            at = segs[w[-1]].target if w else pg.root
            for k in from_node.get(at, ()):
                nxt.append(w + (k,))
        stems += nxt
        frontier = nxt
    out = []
    seen = set()
    for stem in stems:
        at = segs[stem[-1]].target if stem else pg.root
        words = [(k,) for k in from_node.get(at, ())]
        for _ in range(max_period):
            for w in words:
                if segs[w[-1]].target == at and (at, w) not in seen:
                    seen.add((at, w))
                    stem_nodes = tuple(n for k in stem for n in segs[k].nodes)
                    cyc = tuple(n for k in w for n in segs[k].nodes)
                    out.append((Lasso(stem_nodes, cyc), w))
            words = [w + (k,) for w in words for k in from_node.get(segs[w[-1]].target, ())]
    return out


def closure_path_verdict(segs: Sequence[Segment], word: Sequence[int]) -> bool:
    """Verdict of the closure criterion restricted to the path word^omega."""
    r = segs[word[0]].relation
    for k in word[1:]:
        r = compose(r, segs[k].relation)
    power = r
    while compose(power, power) != power:
        power = compose(power, r)
    return has_progressing_loop(power)


# ---------------------------------------------------------------------------
# explanations


def explain_trace(pg: ProofGraph, lasso: Lasso, sig: Signature, rules: Sequence[ProductionRule]) -> str:
    """Human-readable walk along a lasso with the trace pairs of every edge."""
    if not lasso.cycle:
        raise ValueError("cannot explain a lasso without a cycle")
    edges = lasso_edges(pg, lasso)
    lines = [f"stem: {' '.join(lasso.stem) if lasso.stem else '(empty)'}",
             f"cycle: {' '.join(lasso.cycle)}"]
    for nid in lasso.stem:
        lines.append(f"  {nid}: {pg.nodes[nid].sequent}")
    lines.append("cycle steps:")
    for a, b in edges:
        node = pg.nodes[a]
        how = "bud" if node.is_bud else node.rule.name
        lines.append(f"  {a}: {node.sequent}   [{how}] -> {b}")
        src = node.sequent.antecedent
        dst = pg.nodes[b].sequent.antecedent
        rel = edge_relation(pg, a, b, sig, rules)
        if not rel:
            lines.append("      no trace pairs")
        for i, j, p in sorted(rel):
            lines.append(f"      {src[i]} -> {dst[j]}{'  progress' if p else ''}")
    start = lasso.cycle[0]
    ant = pg.nodes[start].sequent.antecedent
    lines.append("traces from the cycle start:")
    if not positions(ant):
        lines.append(f"  {start} has no inductive atoms in its antecedent")
    for p in positions(ant):
        lines.append("  " + _fate(pg, edges, p, sig, rules))
    verdict = lasso_has_progressing_trace(pg, lasso, sig, rules)
    lines.append("result: " + ("an infinitely progressing trace exists" if verdict
                               else "no infinitely progressing trace follows this path"))
    return "\n".join(lines) + "\n"


def _fate(pg: ProofGraph, edges, p: int, sig: Signature, rules: Sequence[ProductionRule]) -> str:
    ant = pg.nodes[edges[0][0]].sequent.antecedent
    states = {(p, False)}
    for a, b in edges:
        rel = edge_relation(pg, a, b, sig, rules)
        states = {(j, prog or q) for cur, prog in states for i, j, q in rel if i == cur}
        if not states:
            return f"{ant[p]} dies on the edge {a} -> {b}"
    ends = sorted(states)
    text = ", ".join(f"{ant[j]}{' with progress' if prog else ' without progress'}" for j, prog in ends)
    return f"{ant[p]} returns as {text}"
