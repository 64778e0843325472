"""Render a query answer to files: CSV summaries plus figures.

Writes into an output directory:
  summary.csv        key/value rows: verdict, sizes, phase timings
  explanations.csv   one row per clause (infeasible answers only)
  mmdp.png           layered drawing of the abstraction graph
  plan.png           agents x order grid of the summarized plan, if one exists
  timings.png        phase timing bars
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .abstraction import Mmdp, Plan, summarize_plan
from .errors import NoCompletePath
from .querylang import render_query
from .service.core import QueryAnswer


def _layered_positions(mmdp: Mmdp) -> dict[int, tuple[float, float]]:
    """x = number of completed (agent, task) bits, y spreads ties."""
    layers: dict[int, list[int]] = {}
    for sid, state in mmdp.states.items():
        depth = bin(state.progress.mask).count("1")
        layers.setdefault(depth, []).append(sid)
    pos = {}
    for depth, sids in layers.items():
        for row, sid in enumerate(sorted(sids)):
            pos[sid] = (float(depth), row - (len(sids) - 1) / 2.0)
    return pos


def draw_mmdp(mmdp: Mmdp, path: Path, witness=None) -> None:
    pos = _layered_positions(mmdp)
    witness_edges = {(e.src, e.dst) for e in witness or []}
    fig, ax = plt.subplots(figsize=(9, 6))
    for src, counts in ((s, mmdp.successors(s)) for s in mmdp.states):
        total = sum(counts.values()) or 1
        for dst, count in counts.items():
            if dst == src:
                continue
            x0, y0 = pos[src]
            x1, y1 = pos[dst]
            hot = (src, dst) in witness_edges
            ax.annotate(
                "", xy=(x1, y1), xytext=(x0, y0),
                arrowprops=dict(arrowstyle="-|>",
                                color="crimson" if hot else "gray",
                                lw=2.0 if hot else 0.8,
                                alpha=min(1.0, 0.25 + count / total)))
    for sid, (x, y) in pos.items():
        ax.plot(x, y, "o", color="steelblue", markersize=14, zorder=3)
        ax.annotate(str(sid), (x, y), ha="center", va="center",
                    color="white", fontsize=8, zorder=4)
        ax.annotate(mmdp.states[sid].progress.bitstring(), (x, y - 0.28),
                    ha="center", va="top", fontsize=6, color="dimgray")
    ax.set_title(f"abstraction: {len(mmdp.states)} states, "
                 f"{mmdp.num_transitions()} transitions")
    ax.set_xlabel("completed (agent, task) bits")
    ax.set_yticks([])
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def draw_plan(plan: Plan, num_agents: int, path: Path) -> None:
    cols = len(plan.columns)
    fig, ax = plt.subplots(figsize=(1.6 + 1.4 * max(cols, 1),
                                    1.0 + 0.5 * num_agents))
    ax.set_xlim(0, max(cols, 1))
    ax.set_ylim(0, num_agents)
    for c, column in enumerate(plan.columns):
        for ev in column:
            for agent in ev.coalition:
                ax.add_patch(plt.Rectangle((c, num_agents - agent), 1, 1,
                                           color="lightsteelblue", ec="white"))
                ax.text(c + 0.5, num_agents - agent + 0.5, ev.task,
                        ha="center", va="center", fontsize=9)
    for agent in range(1, num_agents + 1):
        ax.text(-0.1, num_agents - agent + 0.5, f"r{agent}",
                ha="right", va="center", fontsize=9)
    ax.set_xticks([c + 0.5 for c in range(cols)])
    ax.set_xticklabels([str(c + 1) for c in range(cols)])
    ax.set_yticks([])
    ax.set_title("summarized plan (columns = completion order)")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def draw_timings(answer: QueryAnswer, path: Path) -> None:
    timings = answer.timings.to_dict()
    labels = list(timings)
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.bar(labels, [timings[k] for k in labels], color="steelblue")
    ax.set_ylabel("milliseconds")
    ax.set_title("phase timings")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def write_report(mmdp: Mmdp, answer: QueryAnswer, query,
                 out_dir: str | Path) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    summary = out / "summary.csv"
    with open(summary, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["metric", "value"])
        writer.writerow(["query", render_query(query)])
        writer.writerow(["verdict",
                         "feasible" if answer.feasible else "infeasible"])
        writer.writerow(["numStates", answer.num_states])
        writer.writerow(["numTransitions", answer.num_transitions])
        for key, value in answer.timings.to_dict().items():
            writer.writerow([key, value])
        if answer.report is not None:
            writer.writerow(["finalQuery",
                             render_query(answer.report.final_query)])
            writer.writerow(["failures", len(answer.report.failures)])
    written.append(summary)

    if answer.report is not None:
        clauses = out / "explanations.csv"
        with open(clauses, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["failureIndex", "task", "coalition",
                             "kind", "text"])
            for entry in answer.report.failures:
                for clause in entry.to_dict(mmdp.naming)["clauses"]:
                    writer.writerow([
                        entry.index, entry.item.task,
                        " ".join(f"r{i}" for i in sorted(entry.item.coalition)),
                        clause["kind"], clause["text"]])
        written.append(clauses)

    mmdp_png = out / "mmdp.png"
    draw_mmdp(mmdp, mmdp_png, witness=answer.witness)
    written.append(mmdp_png)

    try:
        plan = summarize_plan(mmdp)
    except NoCompletePath:
        plan = None
    if plan is not None:
        plan_png = out / "plan.png"
        draw_plan(plan, mmdp.num_agents, plan_png)
        written.append(plan_png)

    timings_png = out / "timings.png"
    draw_timings(answer, timings_png)
    written.append(timings_png)
    return written
