"""Command-line interface.

Subcommands:
  abstract   sample the policy and save the abstraction
  plan       print the summarized plan of a saved abstraction
  check      check a query against a saved abstraction; explains on a miss
  explain    full pipeline: check, guided rollout, re-check, explain
  serve      run the HTTP API
  report     answer a query and write CSVs + figures to a directory

Exit codes: 0 success / feasible, 1 infeasible (check and explain),
2 usage or runtime error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from . import abstraction
from .checker import check_feasible
from .errors import MarxError
from .explainer import explain as run_explain
from .naming import event_atom
from .querylang import parse_query, render_query, to_pctl, validate
from .service.core import (CONFIG_ENV_VAR, Workspace, config_from_env,
                           load_run_config)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="marx",
        description="Feasibility checking and contrastive explanation of "
                    "temporal task queries against sampled multi-agent "
                    "policies.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config(p):
        p.add_argument("--config", type=Path, default=None,
                       help=f"run config JSON (default ${CONFIG_ENV_VAR})")

    def add_format(p):
        p.add_argument("--format", choices=("text", "structured"),
                       default="text", help="output style")

    def add_rollout_flags(p):
        p.add_argument("--rollout-num", type=int, default=None)
        p.add_argument("--depth-limit", type=int, default=None)
        p.add_argument("--seed", type=int, default=None)

    QUERY_HELP = ('query text: task ":" agents, items joined by "->", '
                  'e.g. "fire:r2,r3 -> victim:r1,r3"')

    p = sub.add_parser("abstract", help="build and save the abstraction")
    add_config(p)
    add_format(p)
    p.add_argument("--out", type=Path, default=None,
                   help="output path (default: config mmdpCachePath)")
    p.add_argument("--episodes", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)

    p = sub.add_parser("plan", help="print the summarized plan")
    p.add_argument("--mmdp", type=Path, required=True)
    add_format(p)

    p = sub.add_parser("check", help="check a query against an abstraction")
    p.add_argument("--mmdp", type=Path, required=True)
    p.add_argument("--query", required=True, help=QUERY_HELP)
    p.add_argument("--qm-var-cap", type=int, default=None)
    add_format(p)

    p = sub.add_parser("explain", help="full pipeline with guided rollout")
    add_config(p)
    p.add_argument("--query", required=True, help=QUERY_HELP)
    add_rollout_flags(p)
    add_format(p)

    p = sub.add_parser("serve", help="run the HTTP API")
    add_config(p)
    p.add_argument("--host", default=None)
    p.add_argument("--port", type=int, default=None)

    p = sub.add_parser("report", help="write CSVs and figures for a query")
    add_config(p)
    p.add_argument("--query", required=True, help=QUERY_HELP)
    p.add_argument("--out-dir", type=Path, required=True)
    add_rollout_flags(p)
    add_format(p)

    return parser


def _load_config(args) -> "RunConfig":
    config = (load_run_config(args.config) if args.config
              else config_from_env())
    overrides = {}
    for attr, key in (("rollout_num", "rollout_num"),
                      ("depth_limit", "depth_limit"), ("seed", "seed"),
                      ("episodes", "episodes"), ("host", "host"),
                      ("port", "port")):
        if getattr(args, attr, None) is not None:
            overrides[key] = getattr(args, attr)
    return replace(config, **overrides) if overrides else config


def _parse_and_validate(text: str, scope):
    query = parse_query(text, scope)
    violations = validate(query, scope)
    if violations:
        raise MarxError("invalid query: "
                        + "; ".join(v.message for v in violations))
    return query


def _print_witness(witness, mmdp) -> None:
    for edge in witness:
        events = ", ".join(
            event_atom(ev.task, ev.coalition, mmdp.naming)
            for ev in sorted(edge.events, key=lambda e: e.task))
        print(f"  s{edge.src} -> s{edge.dst}  [{events}]")


def _plan_table(plan, num_agents: int) -> str:
    header = ["agent"] + [str(i + 1) for i in range(len(plan.columns))]
    rows = []
    for agent in range(1, num_agents + 1):
        row = [f"r{agent}"]
        for column in plan.columns:
            cell = "-"
            for ev in column:
                if agent in ev.coalition:
                    cell = ev.task
            row.append(cell)
        rows.append(row)
    widths = [max(len(r[c]) for r in [header] + rows)
              for c in range(len(header))]
    lines = [" | ".join(h.ljust(w) for h, w in zip(header, widths))]
    lines.append("-+-".join("-" * w for w in widths))
    lines.extend(" | ".join(c.ljust(w) for c, w in zip(row, widths))
                 for row in rows)
    return "\n".join(lines)


def cmd_abstract(args) -> int:
    config = _load_config(args)
    out = args.out or config.mmdp_cache_path
    if out is None:
        raise MarxError("no output path: give --out or set mmdpCachePath")
    workspace = Workspace.from_config(replace(config, mmdp_cache_path=None),
                                      rebuild=True)
    abstraction.save(workspace.mmdp, out)
    stats = {"numStates": len(workspace.mmdp.states),
             "numTransitions": workspace.mmdp.num_transitions(),
             "path": str(out)}
    if args.format == "structured":
        print(json.dumps(stats))
    else:
        print(f"saved abstraction to {out} "
              f"({stats['numStates']} states, "
              f"{stats['numTransitions']} transitions)")
    return 0


def cmd_plan(args) -> int:
    mmdp = abstraction.load(args.mmdp)
    plan = abstraction.summarize_plan(mmdp)
    if args.format == "structured":
        print(json.dumps(plan.to_dict()))
    else:
        print(_plan_table(plan, mmdp.num_agents))
    return 0


def cmd_check(args) -> int:
    mmdp = abstraction.load(args.mmdp)
    query = _parse_and_validate(args.query, mmdp)
    result = check_feasible(mmdp, query)
    if result.feasible:
        if args.format == "structured":
            print(json.dumps({
                "verdict": "feasible",
                "formula": to_pctl(query, mmdp.naming.agent_noun),
                "witness": [e.to_dict() for e in result.witness]}))
        else:
            print("FEASIBLE")
            _print_witness(result.witness, mmdp)
        return 0
    report = run_explain(mmdp, query, var_cap=args.qm_var_cap)
    if args.format == "structured":
        print(json.dumps({
            "verdict": "infeasible",
            "formula": to_pctl(query, mmdp.naming.agent_noun),
            "report": report.to_dict()}))
    else:
        print("INFEASIBLE")
        for sentence in report.sentences():
            print(f"  {sentence}")
        print(f"  repaired query: {render_query(report.final_query)}")
    return 1


def _run_pipeline(args):
    config = _load_config(args)
    workspace = Workspace.from_config(config)
    query = _parse_and_validate(args.query, workspace.mmdp)
    answer = workspace.answer(query)
    return workspace, query, answer


def _print_answer(answer, mmdp, fmt: str) -> int:
    if fmt == "structured":
        print(json.dumps(answer.to_dict()))
    elif answer.feasible:
        print("FEASIBLE")
        _print_witness(answer.witness, mmdp)
    else:
        print("INFEASIBLE")
        for sentence in answer.report.sentences():
            print(f"  {sentence}")
        print(f"  repaired query: {render_query(answer.report.final_query)}")
    return 0 if answer.feasible else 1


def cmd_explain(args) -> int:
    workspace, _query, answer = _run_pipeline(args)
    return _print_answer(answer, workspace.mmdp, args.format)


def cmd_serve(args) -> int:
    import uvicorn

    from .service.http import create_app

    config = _load_config(args)
    workspace = Workspace.from_config(config)
    app = create_app(workspace)
    uvicorn.run(app, host=config.host, port=config.port, log_level="warning")
    return 0


def cmd_report(args) -> int:
    from .report import write_report

    workspace, query, answer = _run_pipeline(args)
    written = write_report(workspace.mmdp, answer, query, args.out_dir)
    if args.format == "structured":
        print(json.dumps({"verdict": "feasible" if answer.feasible
                          else "infeasible",
                          "files": [str(p) for p in written]}))
    else:
        print("FEASIBLE" if answer.feasible else "INFEASIBLE")
        for path in written:
            print(f"  wrote {path}")
    return 0 if answer.feasible else 1


_COMMANDS = {
    "abstract": cmd_abstract,
    "plan": cmd_plan,
    "check": cmd_check,
    "explain": cmd_explain,
    "serve": cmd_serve,
    "report": cmd_report,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return _COMMANDS[args.command](args)
    except MarxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
