"""Command-line driver.

Workflow mirrors the analysis loop: check the spec, prove what can be
proved at a small scope, model-check for deadlocks, examine the offending
state, fix, replay.  Exit status: 0 clean, 1 findings (deadlock, invariant
violation, failed obligation, refinement failure), 2 usage or input error.

Spec and scope arguments take either a file path or `corpus:<id>` for the
bundled readers/writers corpus (`corpus:desk` names the bundled scope).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import corpus as corpus_pkg
from .animator import random_animate, reduced_view
from .composer import compose
from .errors import MinibeeError
from .explorer import (
    DEADLOCKED,
    ExploreLimits,
    INVARIANT_VIOLATED,
    LIVE,
    OPEN,
    constraint_based_check,
    coverage_report,
    explore,
    find_deadlocks,
)
from .parser import parse_system
from .po import discharge_all
from .printer import render_system
from .refiner import check_refinement
from .syntax import AbstractSystem
from .values import Scope, render_binding, value_to_json

CLEAN, FINDINGS, USAGE = 0, 1, 2


def _load_spec(arg: str) -> AbstractSystem:
    if arg.startswith("corpus:"):
        return corpus_pkg.load_entry(arg.split(":", 1)[1]).system
    return parse_system(Path(arg).read_text(encoding="utf-8"))


def _load_scope(arg: str) -> Scope:
    if arg == "corpus:desk":
        return corpus_pkg.desk_scope()
    data = json.loads(Path(arg).read_text(encoding="utf-8"))
    return corpus_pkg.scope_from_json(data)


def _limits(args) -> ExploreLimits:
    return ExploreLimits(max_nodes=args.max_nodes, max_depth=args.max_depth)


def _state_json(state) -> dict:
    return {
        "rendered": state.canonical(),
        "variables": {n: value_to_json(v) for n, v in state.as_dict().items()},
    }


def cmd_check(args) -> int:
    for spec in args.specs:
        system = _load_spec(spec)
        print(f"{spec}: ok ({system.name}: {len(system.variables)} variable(s), "
              f"{len(system.events)} event(s))")
    return CLEAN


def cmd_compose(args) -> int:
    composed = compose(_load_spec(args.left), _load_spec(args.right), name=args.name)
    text = render_system(composed)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        print(f"wrote {args.output} ({composed.name})")
    else:
        sys.stdout.write(text)
    return CLEAN


def cmd_explore(args) -> int:
    system = _load_spec(args.spec)
    scope = _load_scope(args.scope)
    graph = explore(system, scope, _limits(args))
    report = coverage_report(graph)
    deadlocks = find_deadlocks(graph)
    if args.format == "dot":
        sys.stdout.write(graph.to_dot())
    elif args.format == "json":
        payload = {
            "system": system.name,
            "nodes": [
                {
                    "id": info.uid,
                    "class": info.classification,
                    "state": state.canonical(),
                }
                for state, info in graph.nodes.items()
            ],
            "transitions": [
                {
                    "src": graph.uid_of(t.src),
                    "event": t.event,
                    "binding": render_binding(t.binding),
                    "dst": graph.uid_of(t.dst),
                }
                for t in graph.transitions
            ],
            "coverage": {
                "classes": report.class_counts,
                "total": report.total,
                "events": report.event_counts,
                "uncovered": report.uncovered,
            },
            "deadlocks": [
                {
                    "state": d.state.canonical(),
                    "reasons": [r.render() for r in d.reasons],
                }
                for d in deadlocks
            ],
            "wd_findings": [
                {"state": f.state.canonical(), "event": f.event, "message": f.message}
                for f in graph.wd_findings
            ],
        }
        print(json.dumps(payload, indent=2))
    else:
        sys.stdout.write(report.render())
        for d in deadlocks:
            print(d.render())
        for f in graph.wd_findings:
            print(f"well-definedness: {f.event} at {f.state.canonical()}: {f.message}")
        if args.dump:
            sys.stdout.write(graph.dump())
    defect = (
        report.class_counts[DEADLOCKED] > 0
        or report.class_counts[INVARIANT_VIOLATED] > 0
        or bool(graph.wd_findings)
    )
    return FINDINGS if defect else CLEAN


def cmd_animate(args) -> int:
    system = _load_spec(args.spec)
    scope = _load_scope(args.scope)
    log = random_animate(system, scope, args.steps, args.seed)
    counts = log.event_counts(system)
    if args.format == "dot":
        sys.stdout.write(
            reduced_view(system, scope, log.visited, log.edges(system, scope))
        )
    elif args.format == "json":
        payload = {
            "seed": log.seed,
            "terminated_reason": log.terminated_reason,
            "steps": [
                {"event": e, "binding": render_binding(b), "state": s.canonical()}
                for e, b, s in log.steps
            ],
            "visited": [s.canonical() for s in log.visited],
            "event_counts": counts,
        }
        print(json.dumps(payload, indent=2))
    else:
        for line in log.render_lines():
            print(line)
        print(f"visited states      :{len(log.visited)}")
        print(f"terminated          :{log.terminated_reason}")
        print("COVERED_OPERATIONS")
        for name, k in counts.items():
            if k > 0:
                print(f"{name.ljust(20)}:{k}")
        print("UNCOVERED_OPERATIONS")
        for name, k in counts.items():
            if k == 0:
                print(name)
    return FINDINGS if log.terminated_reason == "deadlock" else CLEAN


def cmd_po(args) -> int:
    system = _load_spec(args.spec)
    scope = _load_scope(args.scope)
    results = discharge_all(system, scope, args.ceiling)
    failed = any(res.status == "fail" for _, res in results)
    if args.format == "json":
        payload = [
            {
                "kind": po.kind,
                "event": po.event,
                "formula": po.render(),
                "status": res.status,
                "states_examined": res.states_examined,
                "witness": None
                if res.witness is None
                else {
                    "state": res.witness[0].canonical(),
                    "binding": render_binding(res.witness[1])
                    if res.witness[1]
                    else None,
                },
            }
            for po, res in results
        ]
        print(json.dumps(payload, indent=2))
    else:
        for po, res in results:
            print(res.render(po))
    return FINDINGS if failed else CLEAN


def cmd_refine(args) -> int:
    abstract = _load_spec(args.abstract)
    refined = _load_spec(args.refined)
    scope = _load_scope(args.scope)
    report = check_refinement(abstract, refined, scope, _limits(args))
    if args.format == "json":
        payload = {
            "verdict": report.verdict,
            "hidden": report.hidden,
            "product_states": report.product_states,
            "divergence_warning": report.divergence_warning,
            "counterexample": None
            if report.counterexample is None
            else [
                {"event": e, "binding": render_binding(b)}
                for e, b in report.counterexample
            ],
        }
        print(json.dumps(payload, indent=2))
    else:
        sys.stdout.write(report.render())
    return CLEAN if report.verdict == "pass" else FINDINGS


def cmd_cbc(args) -> int:
    system = _load_spec(args.spec)
    scope = _load_scope(args.scope)
    result = constraint_based_check(system, scope, args.event, args.ceiling)
    sys.stdout.write(result.render())
    return FINDINGS if result.found else CLEAN


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port, log_level="warning")
    return CLEAN


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="minibee",
        description="analysis workbench for guarded-event abstract systems",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="parse and validate spec files")
    p.add_argument("specs", nargs="+")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("compose", help="parallel-compose two systems")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("-o", "--output")
    p.add_argument("--name")
    p.set_defaults(func=cmd_compose)

    def add_scope(p):
        p.add_argument("--scope", required=True, help="scope file or corpus:desk")

    def add_limits(p):
        p.add_argument("--max-nodes", type=int, default=None)
        p.add_argument("--max-depth", type=int, default=None)

    p = sub.add_parser("explore", help="exhaustive model check with coverage")
    p.add_argument("spec")
    add_scope(p)
    add_limits(p)
    p.add_argument("--format", choices=["text", "json", "dot"], default="text")
    p.add_argument("--dump", action="store_true", help="append the graph dump")
    p.set_defaults(func=cmd_explore)

    p = sub.add_parser("animate", help="seeded random animation")
    p.add_argument("spec")
    add_scope(p)
    p.add_argument("--steps", type=int, default=40)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=["text", "json", "dot"], default="text")
    p.set_defaults(func=cmd_animate)

    p = sub.add_parser("po", help="generate and discharge proof obligations")
    p.add_argument("spec")
    add_scope(p)
    p.add_argument("--ceiling", type=int, default=200_000)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_po)

    p = sub.add_parser("refine", help="trace refinement check")
    p.add_argument("abstract")
    p.add_argument("refined")
    add_scope(p)
    add_limits(p)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_refine)

    p = sub.add_parser("cbc", help="constraint-based invariant check of one event")
    p.add_argument("spec")
    add_scope(p)
    p.add_argument("--event", required=True)
    p.add_argument("--ceiling", type=int, default=200_000)
    p.set_defaults(func=cmd_cbc)

    p = sub.add_parser("serve", help="run the HTTP session service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8711)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (MinibeeError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
