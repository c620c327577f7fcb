"""The ``sg`` command line tool.

Every subcommand prints JSON with ``"schema": 1`` on standard output, except
``gen`` which prints a diagram.  Exit status is 0 on success, 1 on a domain
error and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import random
import sys
import time
from pathlib import Path

from .diagram import (Diagram, DiagramError, HandcuffDiagram, P4Diagram, parse, serialize,
                      underlying_graph, validate)
from .drawing import DrawingError
from .graphcore import (GraphFormatError, MinorBudgetExceeded, complete_graph, has_minor,
                        parse_graph, petersen_family, petersen_graph, serialize_graph)
from .invariants import SkeinBudgetExceeded, a2, conway, linking_number, n_invariant, xi

SCHEMA = 1
DOMAIN_ERRORS = (DiagramError, DrawingError, GraphFormatError, MinorBudgetExceeded,
                 SkeinBudgetExceeded, OSError, KeyError)


class _Usage(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _diagram(path: str) -> Diagram:
    return parse(_read(path))


def _budget(args) -> int | None:
    return getattr(args, "budget", None)


# ---------------------------------------------------------------- commands

def cmd_parse(args):
    d = _diagram(args.file)
    return {"crossings": len(d.crossings), "vertices": len(d.vertices), "edges": d.edges,
            "roles": dict(d.roles), "sgd": serialize(d)}


def cmd_validate(args):
    d = _diagram(args.file)
    problems = validate(d)
    return {"valid": not problems, "problems": problems}, (0 if not problems else 1)


def _two_components(d: Diagram, a, b):
    if a and b:
        return a, b
    role = d.role
    if "loop1" in role and "loop2" in role:
        return role["loop1"], role["loop2"]
    if len(d.edges) == 2:
        return tuple(d.edges)
    raise _Usage("pass --a and --b to name the two components")


def cmd_lk(args):
    d = _diagram(args.file)
    a, b = _two_components(d, args.a, args.b)
    return {"invariant": "lk", "components": [a, b], "value": linking_number(d, a, b)}


def cmd_conway(args):
    p = conway(_diagram(args.file), max_degree=args.max_degree, budget=_budget(args))
    return {"invariant": "conway", "value": list(p.coeffs), "text": str(p)}


def cmd_a2(args):
    return {"invariant": "a2", "value": a2(_diagram(args.file), method=args.method, budget=_budget(args))}


def cmd_dsum(args):
    from .surgery import d_sum

    rec = d_sum(HandcuffDiagram.from_diagram(_diagram(args.file)), twist=args.twist)
    return {"sgd": serialize(rec.knot),
            "record": {"twist": rec.twist, "half_twist": rec.half_twist,
                       "crossings": len(rec.knot.crossings),
                       "origin": {str(k): v for k, v in rec.origin}}}


def cmd_nhandcuff(args):
    inv = n_invariant(HandcuffDiagram.from_diagram(_diagram(args.file)), twist=args.twist,
                      budget=_budget(args))
    return {"invariant": "n", "value": inv.n_value, **inv.to_json()}


def cmd_xi(args):
    return {"invariant": "xi", "value": xi(P4Diagram.from_diagram(_diagram(args.file)), budget=_budget(args))}


def cmd_gen(args):
    from .surgery import gen_frs, gen_hrs

    f = gen_frs(args.r, args.s) if args.family == "frs" else gen_hrs(args.r, args.s)
    sys.stdout.write(serialize(f.diagram))
    return None


def _invariant_row(d: Diagram) -> dict:
    row = {"crossings": len(d.crossings)}
    role = d.role
    g = underlying_graph(d)
    if "loop1" in role:
        h = HandcuffDiagram.from_diagram(d)
        row["lk"] = linking_number(d, h.loop1, h.loop2)
        row["n"] = n_invariant(h).n_value
    elif "e1" in role:
        row["xi"] = xi(P4Diagram.from_diagram(d))
    elif not d.vertices and len(d.edges) == 1:
        row["a2"] = a2(d)
    elif not d.vertices and len(d.edges) == 2:
        row["lk"] = linking_number(d, *d.edges)
    row["components"] = len(g.vertices)
    return row


def cmd_moves(args):
    from .moves import random_moves

    kinds = {"r1": ("r1+", "r1-"), "r2": ("r2+", "r2-"), "r3": ("r3",), "delta": ("delta",)}
    chosen = tuple(k for name in (args.kind or ["r1", "r2", "r3"]) for k in kinds[name])
    d = _diagram(args.file)
    rng = random.Random(args.seed)
    before = _invariant_row(d)
    after_d, used = random_moves(d, args.random, rng, kinds=chosen, max_crossings=args.max_crossings)
    after = _invariant_row(after_d)
    table = [{"key": k, "before": before.get(k), "after": after.get(k)} for k in before]
    return {"kinds": list(chosen), "applied": [s.kind for s in used], "table": table,
            "sgd": serialize(after_d)}


def cmd_petersen_family(args):
    fam = petersen_family()
    out = []
    for g in fam:
        out.append({"name": g.name, "vertices": len(g.vertices), "edges": len(g.edges)})
        if args.emit_dir:
            Path(args.emit_dir).mkdir(parents=True, exist_ok=True)
            (Path(args.emit_dir) / f"{g.name}.graph").write_text(serialize_graph(g), encoding="utf-8")
    return {"classes": len(fam), "members": out}


def _target(name: str):
    named = {"petersen": petersen_graph, "k6": lambda: complete_graph(6)}
    if name.lower() in named:
        return named[name.lower()]()
    for g in petersen_family():
        if g.name.lower() == name.lower():
            return g
    return parse_graph(_read(name))


def cmd_minor(args):
    g = parse_graph(_read(args.graph))
    h = _target(args.target)
    res = has_minor(g, h, budget=_budget(args))
    model = None if res.model is None else {k: sorted(v) for k, v in res.model.items()}
    return {"graph": g.name, "target": h.name, "found": res.found, "model": model, "nodes": res.nodes}


def cmd_conway_gordon(args):
    from .theorems import conway_gordon_parity

    res = conway_gordon_parity(_diagram(args.file))
    w = res["witness"]
    return {"parity": res["parity"], "sum": res["sum"],
            "pairs": [{"a": list(a.edges), "b": list(b.edges), "lk": v} for a, b, v in res["pairs"]],
            "witness": None if w is None else {"a": list(w[0].edges), "b": list(w[1].edges), "lk": w[2]}}


def cmd_certify_main(args):
    from .theorems import DiagnosticFailure, certify_theorem_main, verify_certificate

    d = _diagram(args.file)
    cert = certify_theorem_main(d, pair_budget=args.pair_budget)
    out = {"certificate": cert.to_json()}
    if isinstance(cert, DiagnosticFailure):
        return out, 1
    ok, why = verify_certificate(d, cert)
    out["verified"] = ok
    out["verification"] = why
    return out, (0 if ok else 1)


def cmd_suite(args):
    from .suite import CHECKS, run_suite

    numbers = args.check or [c[0] for c in CHECKS]
    scale = 1.0 if args.all else args.scale
    results = run_suite(numbers, seed=args.seed, scale=scale, jobs=args.jobs)
    for r in results:
        print(r.line, file=sys.stderr)
    failures = sum(not r.ok for r in results)
    out = {"seed": args.seed, "scale": scale, "failures": failures,
           "checks": [r.to_json() for r in results]}
    return out, (0 if failures == 0 else 1)


# ---------------------------------------------------------------- plumbing

def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sg", description="Spatial graph diagram tool")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--csv", action="store_true", help="emit tabular output as CSV")
    p.add_argument("--report", help="write a run report (hashes, timing, seed) to this file")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, file=True, budget=False):
        q = sub.add_parser(name)
        if file:
            q.add_argument("file", help=".sgd file or - for standard input")
        if budget:
            q.add_argument("--budget", type=int, default=None)
        q.set_defaults(fn=fn)
        return q

    add("parse", cmd_parse)
    add("validate", cmd_validate)
    q = add("lk", cmd_lk)
    q.add_argument("--a")
    q.add_argument("--b")
    q = add("conway", cmd_conway, budget=True)
    q.add_argument("--max-degree", type=int, default=None)
    q = add("a2", cmd_a2, budget=True)
    q.add_argument("--method", choices=["skein", "gauss"], default="skein")
    q = add("dsum", cmd_dsum)
    q.add_argument("--twist", type=int, default=0)
    q = add("nhandcuff", cmd_nhandcuff, budget=True)
    q.add_argument("--twist", type=int, default=0)
    add("xi", cmd_xi, budget=True)
    q = add("gen", cmd_gen, file=False)
    q.add_argument("family", choices=["frs", "hrs"])
    q.add_argument("--r", type=int, required=True)
    q.add_argument("--s", type=int, required=True)
    q = add("moves", cmd_moves)
    q.add_argument("--kind", action="append", choices=["r1", "r2", "r3", "delta"])
    q.add_argument("--random", type=int, default=10, metavar="N")
    q.add_argument("--max-crossings", type=int, default=None)
    q.add_argument("--seed", type=int, default=None, dest="local_seed")
    q = add("petersen-family", cmd_petersen_family, file=False)
    q.add_argument("--emit-dir")
    q = add("minor", cmd_minor, file=False, budget=True)
    q.add_argument("--graph", required=True)
    q.add_argument("--target", default="petersen")
    add("conway-gordon", cmd_conway_gordon)
    q = add("certify-main", cmd_certify_main)
    q.add_argument("--pair-budget", type=int, default=64)
    q = add("suite", cmd_suite, file=False)
    q.add_argument("--all", action="store_true", help="run the full acceptance battery")
    q.add_argument("--check", type=int, action="append", help="run only this check (repeatable)")
    q.add_argument("--scale", type=float, default=0.1, help="battery size when --all is absent")
    q.add_argument("--seed", type=int, default=None, dest="local_seed")
    return p


def _csv(payload: dict) -> str | None:
    rows = payload.get("table") or payload.get("checks") or payload.get("pairs")
    if not rows:
        return None
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in row.items()})
    return buf.getvalue()


def _sha(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "local_seed", None) is not None:
        args.seed = args.local_seed
    t0 = time.perf_counter()
    code = 0
    try:
        res = args.fn(args)
    except _Usage as exc:
        print(f"sg: {exc}", file=sys.stderr)
        return 2
    except DOMAIN_ERRORS as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        print(json.dumps({"schema": SCHEMA, "command": args.command, "error": str(msg)}))
        print(f"sg {args.command}: {msg}", file=sys.stderr)
        return 1
    text = ""
    if res is not None:
        if isinstance(res, tuple):
            res, code = res
        payload = {"schema": SCHEMA, "command": args.command, **res}
        text = (_csv(payload) if args.csv else None) or json.dumps(payload, sort_keys=False) + "\n"
        sys.stdout.write(text)
    if args.report:
        inputs = {}
        path = getattr(args, "file", None) or getattr(args, "graph", None)
        if path and path != "-" and os.path.exists(path):
            inputs[path] = _sha(Path(path).read_text(encoding="utf-8"))
        report = {"schema": SCHEMA, "command": argv, "inputs": inputs, "outputs": _sha(text),
                  "timing": round(time.perf_counter() - t0, 4), "seed": args.seed}
        Path(args.report).write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")
    return code


if __name__ == "__main__":
    sys.exit(main())
