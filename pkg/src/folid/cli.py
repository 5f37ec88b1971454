"""Command-line interface.

Exit codes: 0 success or PASS, 1 FAIL or a violated property, 2 usage or input error.
Results go to stdout, diagnostics to stderr.  ``FOLID_COLOR=0`` disables styling.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Any, Sequence

from . import coding, kernel, semantics, termmodel, traces, translate
from .errors import FolidError
from .parser import (
    parse_formula,
    parse_proof,
    parse_signature,
    parse_structure,
    parse_term,
    print_signature,
    structure_to_json,
)
from .syntax import Atom, free_vars, subformulas


class _Out:
    def __init__(self, as_json: bool):
        self.as_json = as_json
        self.color = os.environ.get("FOLID_COLOR", "1") != "0" and sys.stdout.isatty()

    def verdict(self, ok: bool) -> str:
        word = "PASS" if ok else "FAIL"
        if not self.color:
            return word
        return f"\033[{'32' if ok else '31'}m{word}\033[0m"

    def emit(self, data: Any, text: str) -> None:
        if self.as_json:
            print(json.dumps(data, sort_keys=True, indent=2))
        else:
            print(text, end="" if text.endswith("\n") else "\n")


def _read(path: str) -> str:
    return Path(path).read_text()


def _load_sig(args):
    return parse_signature(_read(args.sig), args.sig)


def _load_model(args, sig):
    return parse_structure(_read(args.model), sig, args.model)


def _fmt_set(rows) -> str:
    items = sorted(rows)
    return "{" + ", ".join(str(r[0]) if len(r) == 1 else "(" + ",".join(map(str, r)) + ")" for r in items) + "}"


# ---------------------------------------------------------------------------
# subcommands


def cmd_check_proof(args, out: _Out) -> int:
    sig, rules = _load_sig(args)
    results = []
    failed = False
    for path in args.proof:
        pg = parse_proof(_read(path), sig, path)
        local = kernel.check_local(pg, sig, rules)
        verdict = traces.check_gtc(pg, sig, rules) if not local else None
        ok = not local and verdict.passed
        failed |= not ok
        results.append((path, local, verdict, ok))
    data = [{"file": p, "local": [v.to_json() for v in loc],
             "gtc": v.to_json() if v else None, "verdict": "PASS" if ok else "FAIL"}
            for p, loc, v, ok in results]
    lines = []
    for p, loc, v, ok in results:
        lines.append(f"{p}: {out.verdict(ok)}")
        for viol in loc:
            lines.append(f"  node {viol.node} ({viol.rule}): {viol.violation}: {viol.detail}")
        if v is not None and not v.passed:
            lines.append(f"  no progressing trace on stem [{' '.join(v.lasso.stem)}] "
                         f"cycle [{' '.join(v.lasso.cycle)}]")
    out.emit({"results": data, "verdict": "FAIL" if failed else "PASS"}, "\n".join(lines))
    return 1 if failed else 0


def cmd_lfp(args, out: _Out) -> int:
    sig, rules = _load_sig(args)
    m = _load_model(args, sig)
    fam = semantics.compute_lfp(m, rules, args.method)
    stages = len(semantics.kleene_stages(m, rules)) - 1
    data = {"lfp": {p: sorted(list(r) for r in fam[i]) for i, p in enumerate(sig.inductive_names)},
            "stages": stages}
    text = "\n".join(f"{p} = {_fmt_set(fam[i])}" for i, p in enumerate(sig.inductive_names))
    out.emit(data, text + f"\nfixpoint reached at stage {stages}")
    return 0


def cmd_standard_check(args, out: _Out) -> int:
    sig, rules = _load_sig(args)
    m = _load_model(args, sig)
    std = semantics.check_standard(m, rules)
    by_unfolding = semantics.standard_by_unfolding(m, rules)
    data = {"standard": std, "standard_by_unfolding": by_unfolding}
    if std and m.is_name_extended():
        data["term_model_standard"] = termmodel.check_termmodel_standard(
            termmodel.build_term_model(m, args.depth), rules)
    text = "\n".join(f"{k.replace('_', ' ')}: {'yes' if v else 'no'}" for k, v in data.items())
    out.emit(data, text)
    return 0 if all(data.values()) else 1


def _assignment(spec: str | None) -> dict[str, int]:
    rho = {}
    for part in filter(None, (spec or "").split(",")):
        name, _, val = part.partition("=")
        rho[name.strip()] = int(val)
    return rho


def cmd_eval(args, out: _Out) -> int:
    sig, rules = _load_sig(args)
    m = _load_model(args, sig)
    f = parse_formula(args.formula, m.sig)
    value = semantics.eval_formula(f, m, _assignment(args.assign))
    out.emit({"formula": str(f), "value": value}, "true" if value else "false")
    return 0


def cmd_unfold(args, out: _Out) -> int:
    sig, rules = _load_sig(args)
    if not sig.is_inductive(args.pred):
        raise FolidError(f"{args.pred} is not an inductive predicate")
    f = semantics.unfold_formula(sig, rules, args.pred, args.k)
    xs = semantics.arg_vars(sig.pred_arity(args.pred))
    out.emit({"pred": args.pred, "k": args.k, "variables": list(xs), "formula": str(f)}, str(f))
    return 0


def cmd_termmodel(args, out: _Out) -> int:
    sig, rules = _load_sig(args)
    m = _load_model(args, sig)
    if not m.is_name_extended():
        m = termmodel.name_extend(m, max(args.budget, m.size))
    tm = termmodel.build_term_model(m, args.depth)
    reps = tm.representatives
    data = {"classes": [{"representative": str(r), "terms": [str(t) for t in c]}
                        for r, c in zip(reps, tm.classes)],
            "model": structure_to_json(tm.as_structure()),
            "standard": termmodel.check_termmodel_standard(tm, rules)}
    lines = [f"[{r}] = {{{', '.join(map(str, c))}}}" for r, c in zip(reps, tm.classes)]
    lines.append(f"standard: {'yes' if data['standard'] else 'no'}")
    out.emit(data, "\n".join(lines))
    return 0


def cmd_code(args, out: _Out) -> int:
    sig, _ = _load_sig(args)
    sig = sig.with_budget(max(sig.name_constant_budget, args.budget))
    if args.decode is not None:
        e = coding.decode(int(args.decode))
        text = ", ".join(map(str, e)) if isinstance(e, tuple) else str(e)
        out.emit({"code": args.decode, "tag": coding.head_tag(int(args.decode)), "decoded": text}, text)
        return 0
    e = parse_term(args.term, sig) if args.term else parse_formula(args.formula, sig)
    c = coding.encode(e)
    out.emit({"expr": str(e), "tag": coding.head_tag(c), "code": str(c)}, str(c))
    return 0


def cmd_approx_truth(args, out: _Out) -> int:
    sig, rules = _load_sig(args)
    m = _load_model(args, sig)
    if not m.is_name_extended():
        m = termmodel.name_extend(m, max(args.budget, m.size))
    tm = termmodel.build_term_model(m, args.depth)
    universe = termmodel.TermUniverse(m.sig, args.depth, len(m.names))
    f = coding.derive_truth_assignment(tm, args.size_bound)
    data: dict[str, Any] = {}
    lines = []
    if args.formula:
        a = parse_formula(args.formula, m.sig)
        if free_vars(a):
            raise FolidError(f"{a} is not closed")
        data["formula"] = str(a)
        data["f"] = f(a)
        lines.append(f"f({a}) = {f(a)}")
        if isinstance(a, Atom) and a.inductive:
            w = coding.search_P_tilde(a.pred, coding.encode_tuple(a.args),
                                      coding.oracle_from_truth(f, universe), rules, universe)
            data["witness"] = w.to_json() if w else None
            lines.append("witness: " + (json.dumps(w.to_json()) if w else "not found"))
    report = coding.check_I_clauses(f, rules, universe, args.size_bound)
    data["report"] = report.to_json()
    lines.append(f"I(f) clauses: {report.checked} checked, {len(report.violations)} refuted")
    for v in report.violations:
        lines.append(f"  {v.clause}: {v.formula}: {v.detail}")
    out.emit(data, "\n".join(lines))
    return 1 if report.violations else 0


def cmd_translate_pa(args, out: _Out) -> int:
    sig, rules = translate.builtin_pa_signature()
    a = parse_formula(args.formula, sig)
    if any(isinstance(g, Atom) and g.pred == "N" for g in subformulas(a)):
        raise FolidError("the input must be a formula of arithmetic without N")
    seq = translate.hardness_sequent(a)
    data = {"signature": print_signature(sig, rules), "relativized": str(translate.relativize(a)),
            "sequent": str(seq)}
    text = print_signature(sig, rules) + "\n# hardness sequent\n" + str(seq)
    out.emit(data, text)
    return 0


def cmd_explain_trace(args, out: _Out) -> int:
    sig, rules = _load_sig(args)
    pg = parse_proof(_read(args.proof), sig, args.proof)
    local = kernel.check_local(pg, sig, rules)
    if local:
        for v in local:
            print(f"node {v.node} ({v.rule}): {v.violation}: {v.detail}", file=sys.stderr)
        return 1
    if args.cycle:
        lasso = traces.Lasso(tuple(args.stem.split()) if args.stem else (), tuple(args.cycle.split()))
    else:
        verdict = traces.check_gtc(pg, sig, rules)
        if verdict.passed:
            out.emit({"verdict": "PASS", "explanation": None}, "PASS: every infinite path has a progressing trace")
            return 0
        lasso = verdict.lasso
    text = traces.explain_trace(pg, lasso, sig, rules)
    good = traces.lasso_has_progressing_trace(pg, lasso, sig, rules)
    out.emit({"lasso": lasso.to_json(), "progressing": good, "explanation": text}, text)
    return 0 if good else 1


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="folid", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name: str, fn, help_: str, sig: bool = True, model: bool = False):
        p = sub.add_parser(name, help=help_)
        if sig:
            p.add_argument("--sig", required=True, help=".folid signature file")
        if model:
            p.add_argument("--model", required=True, help=".model JSON structure")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--depth", "-d", type=_nat, default=2, help="term depth (default 2)")
        p.add_argument("--budget", "-B", type=_nat, default=8, help="name-constant budget (default 8)")
        p.set_defaults(fn=fn)
        return p

    p = add("check-proof", cmd_check_proof, "local rule check and global trace condition")
    p.add_argument("proof", nargs="+")
    p = add("lfp", cmd_lfp, "least fixpoint of the production rules", model=True)
    p.add_argument("--method", choices=("seminaive", "naive"), default="seminaive")
    add("standard-check", cmd_standard_check, "is the model standard", model=True)
    p = add("eval", cmd_eval, "evaluate a formula", model=True)
    p.add_argument("--formula", required=True)
    p.add_argument("--assign", help="variable assignment, e.g. x=1,y=0")
    p = add("unfold", cmd_unfold, "k-fold unfolding of an inductive predicate")
    p.add_argument("--pred", required=True)
    p.add_argument("--k", type=_nat, default=4)
    add("termmodel", cmd_termmodel, "term model of a name-extended structure", model=True)
    p = add("code", cmd_code, "Goedel code of a term or formula, or decode a code")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--term")
    g.add_argument("--formula")
    g.add_argument("--decode")
    p = add("approx-truth", cmd_approx_truth, "truth assignment from the term model and its I(f) check",
            model=True)
    p.add_argument("--formula")
    p.add_argument("--size-bound", type=_nat, default=80)
    p = add("translate-pa", cmd_translate_pa, "relativised arithmetic and the hardness sequent", sig=False)
    p.add_argument("--formula", required=True)
    p = add("explain-trace", cmd_explain_trace, "explain a counterexample lasso")
    p.add_argument("proof")
    p.add_argument("--stem", help="space-separated node ids")
    p.add_argument("--cycle", help="space-separated node ids")
    return ap


def _nat(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    out = _Out(args.json)
    try:
        return args.fn(args, out)
    except FolidError as e:
        print(str(e), file=sys.stderr)
        return 2
    except (OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
