"""Batch and operational entry point.

Subcommands: kb (inspect/export), conjecture (one-shot generation), sketch
(one-shot proof sketch), verify (re-check a conjectures/sketch JSON file
against a KB), bench (enumeration throughput), serve (HTTP API).

Exit codes: 0 success, 1 domain error, 2 usage error.  Every flag has a
CFORGE_-prefixed environment variable equivalent.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from pathlib import Path
from typing import Optional

from .dalmatian import (
    BOUND_MODES,
    Budget,
    CONDITION_MODES,
    conjecture_from_json,
    conjecture_to_json,
    default_signature_for,
    generate_bound_conjectures,
    generate_condition_conjectures,
    render_conjecture,
    verify_conjecture,
)
from .domains import make_catalog_kb, make_integer_kb
from .enumeration import default_graph_signature, enumerate_expressions
from .errors import CforgeError
from .kb import KnowledgeBase
from .sketch import SketchConfig, generate_sketch, render_sketch, sketch_from_json, sketch_to_json
from .service import export_kb_json, line_claim_value


def _env(name: str, default=None):
    return os.environ.get(f"CFORGE_{name}", default)


def _parse_timeout(text: str) -> Optional[float]:
    s = text.strip().lower()
    if s in ("none", "0", "off"):
        return None
    if s.endswith("ms"):
        return float(s[:-2]) / 1000.0
    if s.endswith("s"):
        return float(s[:-1])
    return float(s)


def load_kb(spec: str) -> KnowledgeBase:
    """--kb accepts 'catalog', 'integers', or a path to a KB JSON file."""
    if spec == "catalog":
        return make_catalog_kb()
    if spec == "integers":
        return make_integer_kb()
    with open(spec) as fh:
        return KnowledgeBase.from_json(json.load(fh))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cforge",
        description="Conjecturing and proof-sketching over knowledge bases "
                    "of mathematical objects.",
    )
    parser.add_argument("--seed", type=int, default=_env("SEED"),
                        help="seed for any randomized behavior")
    parser.add_argument("--json", action="store_true", default=False,
                        help="machine-readable JSON output")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        # accepted after the subcommand too; SUPPRESS keeps the top-level
        # value when the flag is absent here
        p.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
        p.add_argument("--seed", type=int, default=argparse.SUPPRESS)

    def add_kb_flag(p):
        add_common(p)
        p.add_argument("--kb", default=_env("KB", "catalog"),
                       help="knowledge base: 'catalog', 'integers', or a JSON file")

    p_kb = sub.add_parser("kb", help="inspect or export a knowledge base")
    add_kb_flag(p_kb)
    p_kb.add_argument("--out", help="write KB JSON to this path (default: stdout)")
    p_kb.add_argument("action", choices=["show", "export"])

    p_conj = sub.add_parser("conjecture", help="generate conjectures")
    add_kb_flag(p_conj)
    p_conj.add_argument("--target", required=True)
    p_conj.add_argument("--mode", default="necessary",
                        choices=BOUND_MODES + CONDITION_MODES)
    p_conj.add_argument("--max-complexity", type=int,
                        default=int(_env("MAX_COMPLEXITY", 7)))
    p_conj.add_argument("--timeout", default=_env("TIMEOUT", "5s"))
    p_conj.add_argument("--out", help="write conjecture JSON to this path")

    p_sketch = sub.add_parser("sketch", help="generate a proof sketch")
    add_kb_flag(p_sketch)
    p_sketch.add_argument("--hypothesis", required=True)
    p_sketch.add_argument("--conclusion", required=True)
    p_sketch.add_argument("--max-complexity", type=int, default=1,
                          help="complexity budget per chain step (atomic default)")
    p_sketch.add_argument("--max-lines", type=int, default=8)
    p_sketch.add_argument("--timeout", default=_env("TIMEOUT", "5s"),
                          help="time budget per proof line")
    p_sketch.add_argument("--out", help="write sketch JSON to this path")

    p_verify = sub.add_parser(
        "verify", help="re-check a conjectures or sketch JSON file against a KB")
    add_kb_flag(p_verify)
    p_verify.add_argument("file", help="JSON produced by conjecture/sketch --out")

    p_bench = sub.add_parser("bench", help="performance benchmarks")
    add_common(p_bench)
    p_bench.add_argument("what", choices=["enumerate"])
    p_bench.add_argument("--max-complexity", type=int,
                         default=int(_env("MAX_COMPLEXITY", 7)))

    p_serve = sub.add_parser("serve", help="run the HTTP session service")
    add_common(p_serve)
    p_serve.add_argument("--listen", default=_env("LISTEN", "127.0.0.1:8091"))
    p_serve.add_argument("--data-dir", default=_env("DATA_DIR", "cforge-data"))

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.seed is not None:
        random.seed(int(args.seed))
    try:
        return _dispatch(args)
    except CforgeError as exc:
        print(f"error ({exc.code}): {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _dispatch(args) -> int:
    if args.command == "kb":
        return _cmd_kb(args)
    if args.command == "conjecture":
        return _cmd_conjecture(args)
    if args.command == "sketch":
        return _cmd_sketch(args)
    if args.command == "verify":
        return _cmd_verify(args)
    if args.command == "bench":
        return _cmd_bench(args)
    if args.command == "serve":
        return _cmd_serve(args)
    raise AssertionError(f"unhandled command {args.command}")


def _cmd_kb(args) -> int:
    kb = load_kb(args.kb)
    if args.action == "export":
        text = export_kb_json(kb)
        if args.out:
            Path(args.out).write_text(text)
        else:
            print(text, end="")
        return 0
    doc = {
        "domain": kb.domain,
        "objects": len(kb.objects),
        "concepts": sorted(kb.concepts),
        "theorems": len(kb.theorems),
    }
    if args.json:
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        print(f"domain: {doc['domain']}")
        print(f"objects: {doc['objects']}")
        print(f"theorems: {doc['theorems']}")
        print(f"concepts: {', '.join(doc['concepts'])}")
    return 0


def _cmd_conjecture(args) -> int:
    kb = load_kb(args.kb)
    budget = Budget(max_complexity=args.max_complexity,
                    timeout=_parse_timeout(args.timeout))
    sig = default_signature_for(kb, args.target, args.mode)
    if args.mode in BOUND_MODES:
        store = generate_bound_conjectures(kb, args.target, args.mode, sig, budget)
    else:
        store = generate_condition_conjectures(kb, args.target, args.mode, sig, budget)
    doc = {
        "kb": args.kb,
        "target": args.target,
        "mode": args.mode,
        "candidates_seen": store.candidates_seen,
        "timed_out": store.timed_out,
        "conjectures": [conjecture_to_json(c) for c in store.conjectures],
    }
    if args.out:
        Path(args.out).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    if args.json:
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        for c in store.conjectures:
            print(render_conjecture(c))
        print(f"-- {len(store.conjectures)} conjecture(s) from "
              f"{store.candidates_seen} candidates"
              + (" (timed out)" if store.timed_out else ""))
    return 0


def _cmd_sketch(args) -> int:
    kb = load_kb(args.kb)
    config = SketchConfig(timeout=_parse_timeout(args.timeout) or 3600.0,
                          max_lines=args.max_lines,
                          max_complexity=args.max_complexity)
    sketch = generate_sketch(kb, args.hypothesis, args.conclusion, config=config)
    doc = sketch_to_json(sketch)
    if args.out:
        Path(args.out).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    if args.json:
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        print(render_sketch(sketch, kb.domain))
    return 0


def _cmd_verify(args) -> int:
    kb = load_kb(args.kb)
    with open(args.file) as fh:
        doc = json.load(fh)
    failures = 0
    checked = 0
    atom_kinds = {n: e.kind for n, e in kb.concepts.items()}
    if "conjectures" in doc:
        for cd in doc["conjectures"]:
            conj = conjecture_from_json(cd, atom_kinds)
            result = verify_conjecture(kb, conj)
            checked += 1
            if not result.ok:
                failures += 1
                for w in result.witnesses:
                    print(f"FAIL {render_conjecture(conj)}  witness: {w.display()}")
    elif "lines" in doc:
        sketch = sketch_from_json(doc)
        for line in sketch.lines:
            checked += 1
            for obj in kb.objects:
                if line_claim_value(kb, line, obj) is False:
                    failures += 1
                    ants = " & ".join(line.antecedents)
                    print(f"FAIL {ants} -> {line.consequent}  witness: {obj.display()}")
                    break
    else:
        print("error: file has neither 'conjectures' nor 'lines'", file=sys.stderr)
        return 1
    summary = {"checked": checked, "failures": failures}
    if args.json:
        print(json.dumps(summary, sort_keys=True))
    else:
        print(f"checked {checked}, failures {failures}")
    return 0 if failures == 0 else 1


def _cmd_bench(args) -> int:
    sig = default_graph_signature()
    count = [0]

    def sink(batch):
        count[0] += batch.count

    t0 = time.perf_counter()
    total = enumerate_expressions(sig, args.max_complexity, sink)
    dt = time.perf_counter() - t0
    doc = {
        "benchmark": "enumerate",
        "atoms": len(sig.atoms),
        "max_complexity": args.max_complexity,
        "canonical_expressions": total,
        "seconds": round(dt, 3),
        "per_second": int(total / dt) if dt > 0 else None,
    }
    if args.json:
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        print(f"enumerated {total:,} canonical expressions at "
              f"max-complexity {args.max_complexity} in {dt:.2f}s "
              f"({doc['per_second']:,}/s)")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    host, _, port = args.listen.rpartition(":")
    app = create_app(data_dir=args.data_dir)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port))
    return 0


if __name__ == "__main__":
    sys.exit(main())
