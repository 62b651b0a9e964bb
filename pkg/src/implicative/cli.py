"""Command-line front end: ``implicative <command> [options]``.

Every result carries the query that produced it, so a saved report can be
re-run with ``check --replay`` and compared verdict by verdict.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import sys
import tempfile
import time

from . import analysis as an
from . import cat, tripos
from .analysis import Bounds, ClassificationResult
from .core import (BudgetExceeded, check_implicative_axioms, check_separator, lemma_equalitycwj,
                   lemma_existentialcwj, prop_equalitygen, prop_existentialgen)
from .workspace import ParseError, ValidationError, Workspace, load_workspace, load_zoo

EXIT_OK, EXIT_FAILS, EXIT_UNKNOWN, EXIT_ERROR = 0, 1, 2, 3
FAILING = {"FAILS", "FAIL"}

LAWS = ("adjunction", "bcc", "frobenius", "functoriality", "fiber-product")
OBJECT_PROPERTIES = ("assembly", "partitioned-assembly", "trackable", "strongly-trackable",
                     "projective", "Mod∧", "Mod×", "R∧", "R×")
ELEMENT_CLASSES = ("supercompact", "indecomposable")
SUITES = ("list", "axioms", "elements", "profiles", "implication-dag", "tripos", "theorems")


# -- queries ---------------------------------------------------------------------------

def _values(A, names) -> tuple:
    return tuple(A.lattice.index(v) for v in names)


def _names(A, vals) -> list:
    return [A.name_of(v) for v in vals]


def _cls(res: ClassificationResult) -> dict:
    return res.to_json()


def _check(rep) -> dict:
    d = {"verdict": "PASS" if rep.passed else "FAIL"}
    if not rep.passed:
        d["failed"] = rep.failed_axiom
        if rep.witness is not None:
            d["witness"] = rep.witness
    if rep.notes:
        d["detail"] = rep.notes
    return d


def _bool(b: bool, detail: str = "") -> dict:
    d = {"verdict": "PASS" if b else "FAIL"}
    if detail:
        d["detail"] = detail
    return d


def run_query(ws: Workspace, q: dict, bounds: Bounds, seed: int) -> dict:
    """Execute one query and return its verdict record."""
    op = q["op"]
    A = ws.algebra(q["algebra"]) if "algebra" in q else None
    if op == "axioms":
        return _check(check_implicative_axioms(A.structure))
    if op == "separator":
        rep = check_separator(A)
        d = _check(rep)
        d["degenerate"] = A.is_degenerate
        return d
    if op == "propositions":
        cwj = an.is_compatible_with_joins(A)
        res = {"existentialgen": prop_existentialgen(A), "equalitygen": prop_equalitygen(A),
               "existentialcwj": lemma_existentialcwj(A), "equalitycwj": lemma_equalitycwj(A)}
        ok = res["existentialgen"] and res["equalitygen"] and \
            (not cwj or (res["existentialcwj"] and res["equalitycwj"]))
        return dict(_bool(ok), results=res, compatible_with_joins=cwj)
    if op == "element":
        a = A.lattice.index(q["element"])
        if q["class"] == "supercompact":
            w = an.supercompact_witness(A, a)
            wit = None if w is None else {"kind": "supercompact", "element": a, "value_set": w}
        else:
            w = an.indecomposable_witness(A, a)
            wit = None if w is None else {"kind": "indecomposable", "element": a, "family": w}
        return {"verdict": "HOLDS"} if wit is None else {"verdict": "FAILS", "witness": wit}
    if op == "family":
        vals = _values(A, q["values"])
        c = q["class"]
        if c in an.MODEST_KINDS:
            return _cls(an.classify_modest(A, vals, c, bounds))
        if c == "all":
            res = an.classify_all(A, vals, bounds)
            verdicts = {k: v.verdict.value for k, v in res.items()}
            agg = _aggregate([{"verdict": v} for v in verdicts.values()])
            return {"verdict": {0: "HOLDS", 1: "FAILS", 2: "UNKNOWN"}[agg], "classes": verdicts}
        return _cls(_family(A, vals, c, bounds))
    if op == "profile":
        prof = an.profile(A, bounds)
        return dict(_bool(True), profile=prof.to_json())
    if op == "dag":
        return _dag(A, bounds, q.get("max_I", 2))
    if op == "law":
        return _law(A, q["law"], seed)
    if op == "predicate":
        phi = tripos.predicate(len(q["values"]), _values(A, q["values"]))
        return _cls(tripos.classify_predicate(A, phi, q["class"], bounds))
    if op == "object":
        obj = cat.make_object(_values(A, q["values"]))
        p = q["property"]
        if p == "assembly":
            return _cls(cat.is_assembly(A, obj, bounds))
        if p == "partitioned-assembly":
            return _cls(cat.is_partitioned_assembly(A, obj, bounds))
        if p == "trackable":
            return _cls(cat.is_trackable_object(A, obj, bounds))
        if p == "strongly-trackable":
            return _cls(cat.is_strongly_trackable_object(A, obj, bounds))
        if p == "projective":
            return _cls(cat.is_regular_projective(A, obj, None, bounds))
        return _cls(cat.modest_membership(A, obj, p, bounds))
    if op == "modest-preorder":
        return _check(cat.check_modest_preorder(A, None, bounds))
    if op == "theorem":
        rep = cat.verify_theorem(A, q["theorem"], None, bounds)
        d = _bool(rep.passed, rep.notes)
        d["legs"] = rep.legs
        return d
    if op == "pasm-probe":
        return _check(cat.pasm_chain_probe(q.get("n", 3), q.get("max_carrier", 2)))
    raise ValueError(f"unknown query op {op!r}")


def _family(A, vals, c, bounds) -> ClassificationResult:
    if c == "SK":
        return an.classify_SK(A, vals, bounds)
    if c == "fSK":
        return an.classify_fSK(A, vals, None, bounds)
    if c == "wfSK":
        return an.classify_wfSK(A, vals, None, bounds)
    if c == "cSK":
        return an.from_bool(an.classify_cSK(A, vals))
    if c == "cInd":
        return an.from_bool(an.classify_cInd(A, vals))
    if c in an.UNIFORM_KINDS:
        return an.classify_uniform(A, vals, c, bounds)
    raise ValueError(f"unknown family class {c!r}")


def _law(A, law: str, seed: int) -> dict:
    if law == "adjunction":
        return _check(tripos.check_adjunctions(A, seed=seed))
    if law == "bcc":
        return _check(tripos.check_bcc_grid(A, seed=seed))
    if law == "frobenius":
        return _check(tripos.check_frobenius_grid(A, seed=seed))
    if law == "functoriality":
        return _check(tripos.check_functoriality(A, seed=seed))
    if law == "fiber-product":
        return _check(tripos.check_fiber_product(A, 1, seed=seed))
    raise ValueError(f"unknown law {law!r}")


def _dag(A, bounds: Bounds, max_I: int) -> dict:
    prof = an.profile(A, bounds)
    samples = []
    for m in range(max_I + 1):
        for vals in itertools.product(range(A.n), repeat=m):
            samples.append((vals, an.classify_all(A, vals, bounds)))
    rep = an.verify_implication_dag(A, samples, prof)
    d = _bool(rep.passed, f"{rep.samples} families, {rep.decided} fully decided")
    d["diagrams"] = rep.diagrams
    if rep.violations:
        d["violations"] = rep.violations
    return d


# -- reports ------------------------------------------------------------------------------

def _aggregate(results) -> int:
    verdicts = [r["verdict"] for r in results]
    if any(v in FAILING for v in verdicts):
        return EXIT_FAILS
    if any(v == "UNKNOWN" for v in verdicts):
        return EXIT_UNKNOWN
    return EXIT_OK


def _entry(ws, q, bounds, seed) -> tuple:
    t = time.perf_counter()
    try:
        res = run_query(ws, q, bounds, seed)
    except BudgetExceeded as e:
        res = {"verdict": "UNKNOWN", "detail": str(e)}
    return dict(query=q, **res), time.perf_counter() - t


def _report(args, ws, queries, bounds) -> tuple:
    results, timings = [], []
    for q in queries:
        r, dt = _entry(ws, q, bounds, args.seed)
        results.append(r)
        timings.append(dt)
    rep = {"command": args.command, "argv": _echo(args), "workspace": ws.path or "zoo",
           "bounds": bounds.to_json(), "seed": args.seed, "results": results}
    return rep, timings


def _echo(args) -> list:
    skip = {"out", "func"}
    return sorted(f"{k}={v}" for k, v in vars(args).items() if k not in skip and v is not None)


def _write_atomic(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".report-")
    with os.fdopen(fd, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)


def dumps(rep: dict) -> str:
    return json.dumps(rep, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _print_human(rep: dict, timings: list) -> None:
    print(f"{rep['command']}  bounds={rep['bounds']}  seed={rep['seed']}")
    for r, dt in zip(rep["results"], timings):
        q = {k: v for k, v in r["query"].items() if k != "op"}
        desc = " ".join(f"{k}={v}" for k, v in q.items())
        extra = r.get("shortcut") or r.get("failed") or r.get("detail") or ""
        print(f"  [{r['verdict']:>7}] {r['query']['op']} {desc}  ({dt:.2f}s)"
              + (f"  {extra}" if extra else ""))
    print(f"exit {_aggregate(rep['results'])}")


def _emit(args, rep, timings) -> int:
    if args.out:
        _write_atomic(args.out, dumps(rep))
    _print_human(rep, timings)
    return _aggregate(rep["results"])


# -- commands ---------------------------------------------------------------------------

def _algebras(ws, args) -> list:
    return [args.algebra] if getattr(args, "algebra", None) else list(ws.algebras)


def cmd_check(args, ws, bounds) -> int:
    if args.replay:
        return _replay(args, ws, bounds)
    queries = []
    for name in _algebras(ws, args):
        queries += [{"op": "axioms", "algebra": name}, {"op": "separator", "algebra": name},
                    {"op": "propositions", "algebra": name}]
    return _emit(args, *_report(args, ws, queries, bounds))


def _replay(args, ws, bounds) -> int:
    with open(args.replay, encoding="utf-8") as fh:
        old = json.load(fh)
    bounds = Bounds(**{k: v for k, v in old.get("bounds", {}).items() if v is not None})
    seed = old.get("seed", args.seed)
    out = []
    for r in old.get("results", []):
        q = r["query"]
        new, _ = _entry(ws, q, bounds, seed)
        same = new["verdict"] == r["verdict"]
        wit = r.get("witness")
        if same and isinstance(wit, dict) and r["verdict"] in FAILING:
            try:
                same = an.replay_witness(ws.algebra(q["algebra"]), wit)
            except ValueError:
                same = new.get("witness") == wit
        out.append({"query": q, "verdict": "PASS" if same else "FAIL",
                    "recorded": r["verdict"], "replayed": new["verdict"]})
    rep = {"command": "check", "argv": _echo(args), "workspace": ws.path or "zoo",
           "bounds": bounds.to_json(), "seed": seed, "results": out}
    return _emit(args, rep, [0.0] * len(out))


def cmd_classify(args, ws, bounds) -> int:
    A = ws.algebra(args.algebra)
    if args.element is not None:
        cls = args.cls or "supercompact"
        queries = [{"op": "element", "algebra": args.algebra, "element": args.element,
                    "class": c} for c in (ELEMENT_CLASSES if cls == "all" else [cls])]
    else:
        if args.family:
            alg, vals = ws.families[args.family]
            if alg != args.algebra:
                raise ValidationError("family belongs to another algebra", args.family)
            names = _names(A, vals)
        else:
            names = _split(args.values)
        queries = [{"op": "family", "algebra": args.algebra, "values": names,
                    "class": args.cls or "all"}]
    return _emit(args, *_report(args, ws, queries, bounds))


def cmd_tripos(args, ws, bounds) -> int:
    if args.values is not None:
        queries = [{"op": "predicate", "algebra": args.algebra, "values": _split(args.values),
                    "class": c} for c in (tripos.PREDICATE_CLASSES if args.cls in (None, "all")
                                          else [args.cls])]
    else:
        laws = LAWS if args.law in (None, "all") else [args.law]
        queries = [{"op": "law", "algebra": name, "law": law}
                   for name in _algebras(ws, args) for law in laws]
    return _emit(args, *_report(args, ws, queries, bounds))


def cmd_cat(args, ws, bounds) -> int:
    if args.check == "modest-preorder":
        queries = [{"op": "modest-preorder", "algebra": name} for name in _algebras(ws, args)]
    elif args.check == "pasm-probe":
        queries = [{"op": "pasm-probe", "n": 3, "max_carrier": 2}]
    else:
        props = OBJECT_PROPERTIES if args.property in (None, "all") else [args.property]
        queries = [{"op": "object", "algebra": args.algebra, "values": _split(args.values),
                    "property": p} for p in props]
    return _emit(args, *_report(args, ws, queries, bounds))


def cmd_verify(args, ws, bounds) -> int:
    ths = cat.THEOREMS if args.theorem in (None, "all") else [args.theorem]
    queries = [{"op": "theorem", "algebra": name, "theorem": t}
               for name in _algebras(ws, args) for t in ths]
    return _emit(args, *_report(args, ws, queries, bounds))


def cmd_zoo(args, ws, bounds) -> int:
    names = _algebras(ws, args)
    suite = args.suite
    if suite == "list":
        for name in names:
            A = ws.algebras[name]
            print(f"{name:6} {A.provenance.get('kind', '?'):14} |A|={A.n:<3} "
                  f"degenerate={A.is_degenerate}")
        return EXIT_OK
    if suite == "axioms":
        queries = [{"op": op, "algebra": n} for n in names for op in ("axioms", "separator")]
    elif suite == "elements":
        queries = [{"op": "element", "algebra": n, "element": ws.algebras[n].name_of(a), "class": c}
                   for n in names for a in range(ws.algebras[n].n) for c in ELEMENT_CLASSES]
    elif suite == "profiles":
        queries = [{"op": "profile", "algebra": n} for n in names]
    elif suite == "implication-dag":
        queries = [{"op": "dag", "algebra": n, "max_I": 2} for n in names]
    elif suite == "tripos":
        queries = [{"op": "law", "algebra": n, "law": law} for n in names for law in LAWS]
    elif suite == "theorems":
        queries = [{"op": "theorem", "algebra": n, "theorem": t} for n in names for t in cat.THEOREMS]
    else:
        raise ValueError(f"unknown suite {suite!r}")
    return _emit(args, *_report(args, ws, queries, bounds))


def _split(text) -> list:
    if text is None:
        raise ValidationError("--values is required")
    return [t.strip() for t in text.split(",") if t.strip()] if text else []


# -- parser ----------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--workspace", help="JSON workspace (default: the built-in zoo)")
    common.add_argument("--out", help="write the JSON report here")
    common.add_argument("--bounds", help="search bounds, e.g. K=3,J=4,I=2")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled checks")

    p = argparse.ArgumentParser(prog="implicative",
                                description="Supercompactness and assemblies in finite implicative algebras.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[common], help="axioms, separator and propositions")
    c.add_argument("--algebra")
    c.add_argument("--replay", help="re-run every query of a saved report")
    c.set_defaults(func=cmd_check)

    c = sub.add_parser("classify", parents=[common], help="classify an element or a family")
    c.add_argument("--algebra", required=True)
    c.add_argument("--element")
    c.add_argument("--family", help="named family from the workspace")
    c.add_argument("--values", help="comma-separated element names")
    c.add_argument("--class", dest="cls",
                   choices=ELEMENT_CLASSES + an.FAMILY_CLASSES + an.MODEST_KINDS + ("all",))
    c.set_defaults(func=cmd_classify)

    c = sub.add_parser("tripos", parents=[common], help="tripos laws or predicate classes")
    c.add_argument("--algebra")
    c.add_argument("--law", choices=LAWS + ("all",))
    c.add_argument("--values", help="predicate values on 0..n-1")
    c.add_argument("--class", dest="cls", choices=tripos.PREDICATE_CLASSES + ("all",))
    c.set_defaults(func=cmd_tripos)

    c = sub.add_parser("cat", parents=[common], help="object properties in the categories")
    c.add_argument("--algebra")
    c.add_argument("--values", help="object predicate, comma-separated")
    c.add_argument("--property", choices=OBJECT_PROPERTIES + ("all",))
    c.add_argument("--check", choices=("modest-preorder", "pasm-probe"))
    c.set_defaults(func=cmd_cat)

    c = sub.add_parser("verify", parents=[common], help="theorem suite")
    c.add_argument("--algebra")
    c.add_argument("--theorem", choices=cat.THEOREMS + ("all",))
    c.set_defaults(func=cmd_verify)

    c = sub.add_parser("zoo", parents=[common], help="suites over every algebra")
    c.add_argument("--algebra")
    c.add_argument("--suite", choices=SUITES, default="list")
    c.set_defaults(func=cmd_zoo)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        ws = load_workspace(args.workspace) if args.workspace else load_zoo()
        bounds = Bounds.parse(args.bounds)
        if args.bounds is None:
            bounds = ws.bounds
        return args.func(args, ws, bounds)
    except (ParseError, ValidationError, ValueError, KeyError, OSError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
