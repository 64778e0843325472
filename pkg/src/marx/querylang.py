"""Temporal query data model, text grammar, and logic rendering.

Grammar (whitespace-insensitive)::

    query := item ( "->" item )*
    item  := taskName ":" agent ( "," agent )*
    agent := "r" <1-based id>

"obstacle:r1,r2 -> fire:r2" asks for the obstacle task completed by exactly
agents 1 and 2, then the fire task by exactly agent 2. Empty text is the
empty query. Coalition matching is exact: a completion by a superset of the
designated agents does not satisfy an item.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError, UnknownAgent, UnknownTask
from .naming import Naming, event_atom

_TASK_RE = re.compile(r"[A-Za-z_][\w-]*")
_AGENT_RE = re.compile(r"[rR]([0-9]+)")


@dataclass(frozen=True)
class QueryItem:
    task: str
    coalition: frozenset[int]


@dataclass(frozen=True)
class TemporalQuery:
    items: tuple[QueryItem, ...] = ()

    def __len__(self) -> int:
        return len(self.items)

    def task_position(self, task: str) -> int | None:
        for idx, item in enumerate(self.items):
            if item.task == task:
                return idx
        return None


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    index: int | None = None

    def to_dict(self) -> dict:
        return {"kind": self.kind, "message": self.message, "index": self.index}


def _skip_ws(text: str, pos: int) -> int:
    while pos < len(text) and text[pos].isspace():
        pos += 1
    return pos


def parse_query(text: str, env) -> TemporalQuery:
    """Parse query text against an environment or abstraction scope.

    ``env`` needs ``num_agents`` and ``task_names`` attributes (both
    EnvConfig and Mmdp qualify). Raises ParseError with a byte offset for
    syntax problems, UnknownTask / UnknownAgent for resolution failures.
    """
    task_names = set(env.task_names)
    num_agents = env.num_agents
    items: list[QueryItem] = []
    pos = _skip_ws(text, 0)
    if pos == len(text):
        return TemporalQuery(())
    while True:
        m = _TASK_RE.match(text, pos)
        if not m:
            raise ParseError("expected a task name", pos)
        task = m.group(0)
        if task not in task_names:
            raise UnknownTask(f"unknown task {task!r} at offset {pos}")
        pos = _skip_ws(text, m.end())
        if pos >= len(text) or text[pos] != ":":
            raise ParseError("expected ':' after task name", pos)
        pos = _skip_ws(text, pos + 1)
        agents: set[int] = set()
        while True:
            m = _AGENT_RE.match(text, pos)
            if not m:
                raise ParseError("expected an agent like r1", pos)
            agent_id = int(m.group(1))
            if not 1 <= agent_id <= num_agents:
                raise UnknownAgent(
                    f"agent r{agent_id} outside 1..{num_agents} at offset {pos}")
            agents.add(agent_id)
            pos = _skip_ws(text, m.end())
            if pos < len(text) and text[pos] == ",":
                pos = _skip_ws(text, pos + 1)
                continue
            break
        items.append(QueryItem(task, frozenset(agents)))
        if pos == len(text):
            break
        if text.startswith("->", pos):
            pos = _skip_ws(text, pos + 2)
            continue
        raise ParseError("expected '->' between items", pos)
    return TemporalQuery(tuple(items))


def render_query(query: TemporalQuery) -> str:
    """Canonical text form; parse(render(q)) == q."""
    return " -> ".join(
        f"{item.task}:" + ",".join(f"r{i}" for i in sorted(item.coalition))
        for item in query.items)


def validate(query: TemporalQuery, env) -> list[Violation]:
    """Report duplicate tasks, empty coalitions, and unknown names as data."""
    task_names = set(env.task_names)
    num_agents = env.num_agents
    violations: list[Violation] = []
    seen: set[str] = set()
    for idx, item in enumerate(query.items):
        if item.task in seen:
            violations.append(Violation(
                "DuplicateTask", f"task {item.task!r} queried twice", idx))
        seen.add(item.task)
        if item.task not in task_names:
            violations.append(Violation(
                "UnknownTask", f"unknown task {item.task!r}", idx))
        if not item.coalition:
            violations.append(Violation(
                "EmptyCoalition", f"item {idx} has no agents", idx))
        for agent_id in item.coalition:
            if not 1 <= agent_id <= num_agents:
                violations.append(Violation(
                    "UnknownAgent", f"agent {agent_id} outside 1..{num_agents}",
                    idx))
    return violations


def to_pctl(query: TemporalQuery, agent_prefix: str = "robot") -> str:
    """Render the nested eventually-formula for the query.

    Items become atoms "task_robotI_robotII"; the empty query renders as
    "P>0 [ true ]".
    """
    if not query.items:
        return "P>0 [ true ]"
    naming = Naming(agent_noun=agent_prefix)
    body = ""
    for item in reversed(query.items):
        atom = event_atom(item.task, item.coalition, naming)
        body = f"F ({atom})" if not body else f"F ({atom} & {body})"
    return f"P>0 [ {body} ]"
