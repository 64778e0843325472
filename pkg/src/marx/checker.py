"""Feasibility checking of temporal queries over the abstraction.

The only formula shape is "some positive-probability path realizes the
query items in order", so checking reduces to reachability in the product
of the abstraction's support graph with a small conformance monitor. The
monitor level j counts how many leading query items have been matched;
BOTTOM (None) means the path has irrecoverably violated the query, because
tasks complete at most once along a path.
"""

from __future__ import annotations

from dataclasses import dataclass
from collections import deque

from .abstraction import Mmdp
from .envsim.core import CompletionEvent, JointAction
from .querylang import TemporalQuery

BOTTOM = None  # monitor value once the query is violated

MonitorIndex = int | None


def monitor_step(j: MonitorIndex, events: frozenset[CompletionEvent],
                 query: TemporalQuery) -> MonitorIndex:
    """Greedy monitor advance over one step's completion events.

    First consume as many consecutive pending items as the events allow
    (several items may be satisfied simultaneously); then, if any event
    still touches a pending item's task, the query is violated: either a
    later item's task completed early, or the next item's task completed
    with the wrong coalition. Events on unqueried tasks are neutral.
    """
    if j is BOTTOM:
        return BOTTOM
    items = query.items
    while j < len(items) and CompletionEvent(items[j].task, items[j].coalition) in events:
        j += 1
    pending = {items[m].task for m in range(j, len(items))}
    for ev in events:
        if ev.task in pending:
            return BOTTOM
    return j


def _monitor_successors(j: int, events: frozenset[CompletionEvent],
                        query: TemporalQuery) -> set[MonitorIndex]:
    """All monitor values a nondeterministic run may take: any prefix of
    the greedy advance, each followed by the violation check."""
    items = query.items
    k_max = 0
    while (j + k_max < len(items)
           and CompletionEvent(items[j + k_max].task,
                               items[j + k_max].coalition) in events):
        k_max += 1
    out: set[MonitorIndex] = set()
    for k in range(k_max + 1):
        level = j + k
        violated = False
        for ev in events:
            for m in range(level, len(items)):
                if items[m].task == ev.task and (
                        m > level or ev.coalition != items[m].coalition):
                    violated = True
                    break
            if violated:
                break
        out.add(BOTTOM if violated else level)
    return out


@dataclass(frozen=True)
class WitnessEdge:
    src: int
    action: JointAction
    dst: int
    events: frozenset[CompletionEvent]

    def to_dict(self) -> dict:
        return {
            "src": self.src,
            "action": list(self.action),
            "dst": self.dst,
            "events": [ev.to_dict() for ev in sorted(self.events, key=lambda e: e.task)],
        }


@dataclass
class FeasibilityResult:
    feasible: bool
    witness: list[WitnessEdge] | None = None


def _adjacency(mmdp: Mmdp) -> dict[int, list[tuple[JointAction, int]]]:
    """Progress-making edges (count >= 1), deterministically ordered."""
    adj: dict[int, list[tuple[JointAction, int]]] = {s: [] for s in mmdp.states}
    for (src, action), targets in mmdp.transitions.items():
        for dst in targets:
            if dst != src:
                adj[src].append((action, dst))
    for edges in adj.values():
        edges.sort(key=lambda e: (e[1], e[0]))
    return adj


def check_feasible(mmdp: Mmdp, query: TemporalQuery) -> FeasibilityResult:
    """Breadth-first reachability of monitor level |query| in the product.

    Uses the nondeterministic monitor; every reachable (state, level) pair
    is expanded once, which is sound because progress-making edges form a
    DAG. Returns a witness edge path when feasible.
    """
    goal = len(query.items)
    start = (mmdp.initial, 0)
    if goal == 0:
        return FeasibilityResult(True, [])
    adj = _adjacency(mmdp)
    events_cache: dict[tuple[int, int], frozenset[CompletionEvent]] = {}
    parents: dict[tuple[int, int], tuple[tuple[int, int], WitnessEdge]] = {}
    seen = {start}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        sid, level = node
        for action, dst in adj[sid]:
            key = (sid, dst)
            events = events_cache.get(key)
            if events is None:
                events = mmdp.edge_events(sid, dst)
                events_cache[key] = events
            for nxt_level in sorted(_monitor_successors(level, events, query),
                                    key=lambda v: -1 if v is BOTTOM else v):
                if nxt_level is BOTTOM:
                    continue
                nxt = (dst, nxt_level)
                if nxt in seen:
                    continue
                seen.add(nxt)
                parents[nxt] = (node, WitnessEdge(sid, action, dst, events))
                if nxt_level == goal:
                    path: list[WitnessEdge] = []
                    cur = nxt
                    while cur != start:
                        cur, edge = parents[cur]
                        path.append(edge)
                    path.reverse()
                    return FeasibilityResult(True, path)
                queue.append(nxt)
    return FeasibilityResult(False, None)


def annotate(mmdp: Mmdp, query: TemporalQuery) -> tuple[int, dict[int, int]]:
    """Conformance annotation: best greedy monitor level per state.

    Expands each (state, level) product node once, never expands past a
    violation, and skips identity self-loops. Returns (umax, per-state best
    level); states reachable only through violations are absent from the
    map.
    """
    node_u: dict[int, int] = {mmdp.initial: 0}
    adj = _adjacency(mmdp)
    events_cache: dict[tuple[int, int], frozenset[CompletionEvent]] = {}
    start = (mmdp.initial, 0)
    seen = {start}
    queue = deque([start])
    while queue:
        sid, level = queue.popleft()
        for _action, dst in adj[sid]:
            key = (sid, dst)
            events = events_cache.get(key)
            if events is None:
                events = mmdp.edge_events(sid, dst)
                events_cache[key] = events
            nxt_level = monitor_step(level, events, query)
            if nxt_level is BOTTOM:
                continue
            nxt = (dst, nxt_level)
            if nxt in seen:
                continue
            seen.add(nxt)
            if node_u.get(dst, -1) < nxt_level:
                node_u[dst] = nxt_level
            queue.append(nxt)
    umax = max(node_u.values())
    return umax, node_u
