"""Policy abstraction built from sampled executions.

Abstract states are progress matrices: one Boolean per (agent, task) pair
recording who has completed what. Transitions between abstract states are
frequency-counted over sampled steps; each abstract state keeps its visit
count and a capped reservoir of the concrete joint states observed there.
Completion events are never stored on states: they are recovered as the
bit difference along an edge, which is well-defined even when a state has
several predecessors.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass

from .envsim.core import (CompletionEvent, EnvConfig, Environment,
                          JointAction, JointState, Trajectory, run_episode)
from .errors import (MmdpFormatError, NoCompletePath, NonMonotone,
                     UnsupportedVersion)
from .naming import Naming

FORMAT_VERSION = 1
DEFAULT_SAMPLE_CAP = 256


@dataclass(frozen=True)
class ProgressMatrix:
    """N x |G| completion bits, packed into an int.

    Bit for (agent i, task g) lives at flat index (i-1)*|G| + index(g);
    the bitstring form reads those indices left to right, so agent blocks
    are concatenated in agent order.
    """

    num_agents: int
    tasks: tuple[str, ...]
    mask: int = 0

    @classmethod
    def zero(cls, num_agents: int, tasks) -> "ProgressMatrix":
        return cls(num_agents, tuple(tasks), 0)

    def var_index(self, agent_id: int, task: str) -> int:
        return (agent_id - 1) * len(self.tasks) + self.tasks.index(task)

    def bit(self, agent_id: int, task: str) -> bool:
        return bool(self.mask >> self.var_index(agent_id, task) & 1)

    def task_done(self, task: str) -> bool:
        return bool(self.agents_for(task))

    def agents_for(self, task: str) -> frozenset[int]:
        t = self.tasks.index(task)
        g = len(self.tasks)
        return frozenset(
            i for i in range(1, self.num_agents + 1)
            if self.mask >> ((i - 1) * g + t) & 1)

    def all_done(self) -> bool:
        return all(self.task_done(t) for t in self.tasks)

    def apply_events(self, events) -> "ProgressMatrix":
        mask = self.mask
        for ev in events:
            for agent_id in ev.coalition:
                mask |= 1 << self.var_index(agent_id, ev.task)
        return ProgressMatrix(self.num_agents, self.tasks, mask)

    def covers(self, other: "ProgressMatrix") -> bool:
        """True when every set bit of ``other`` is set here."""
        return other.mask & ~self.mask == 0

    def bitstring(self) -> str:
        n = self.num_agents * len(self.tasks)
        return "".join("1" if self.mask >> v & 1 else "0" for v in range(n))

    @classmethod
    def from_bitstring(cls, bits: str, num_agents: int, tasks) -> "ProgressMatrix":
        tasks = tuple(tasks)
        if len(bits) != num_agents * len(tasks):
            raise ValueError("bitstring length mismatch")
        mask = 0
        for v, ch in enumerate(bits):
            if ch == "1":
                mask |= 1 << v
        return cls(num_agents, tasks, mask)


def events_of(source: ProgressMatrix, target: ProgressMatrix) -> frozenset[CompletionEvent]:
    """Completion events implied by an edge: newly set bits grouped by task."""
    if not target.covers(source):
        raise NonMonotone(
            f"progress bits dropped between {source.bitstring()} "
            f"and {target.bitstring()}")
    diff = target.mask & ~source.mask
    if diff == 0:
        return frozenset()
    g = len(source.tasks)
    by_task: dict[str, set[int]] = {}
    v = 0
    while diff >> v:
        if diff >> v & 1:
            agent_id = v // g + 1
            task = source.tasks[v % g]
            by_task.setdefault(task, set()).add(agent_id)
        v += 1
    return frozenset(
        CompletionEvent(task, frozenset(agents))
        for task, agents in by_task.items())


class SampleStore:
    """Reservoir of distinct serialized joint states, capped in size."""

    def __init__(self, cap: int = DEFAULT_SAMPLE_CAP,
                 items: list[str] | None = None):
        self.cap = cap
        self.items: list[str] = list(items or [])
        self._seen = len(self.items)

    def add(self, serialized: str, rng: random.Random) -> None:
        if serialized in self.items:
            return
        self._seen += 1
        if len(self.items) < self.cap:
            self.items.append(serialized)
        else:
            j = rng.randrange(self._seen)
            if j < self.cap:
                self.items[j] = serialized


@dataclass
class AbstractState:
    id: int
    progress: ProgressMatrix


class Mmdp:
    """Frequency-counted abstraction of a sampled policy.

    Any number of concurrent readers is safe; building and applying
    trajectories are the only writers and need exclusive access (the
    service layer serializes them with a lock).
    """

    def __init__(self, num_agents: int, tasks, naming: Naming | None = None,
                 sample_cap: int = DEFAULT_SAMPLE_CAP, seed: int = 0):
        self.num_agents = num_agents
        self.tasks = tuple(tasks)
        self.naming = naming or Naming()
        self.sample_cap = sample_cap
        self.states: dict[int, AbstractState] = {}
        self.transitions: dict[tuple[int, JointAction], dict[int, int]] = {}
        self.visit_counts: dict[int, int] = {}
        self.samples: dict[int, SampleStore] = {}
        self._ids_by_mask: dict[int, int] = {}
        self._rng = random.Random(seed)
        self.initial = self.intern(ProgressMatrix.zero(num_agents, self.tasks))

    @property
    def task_names(self) -> tuple[str, ...]:
        return self.tasks

    # -- construction ------------------------------------------------------

    def intern(self, progress: ProgressMatrix) -> int:
        sid = self._ids_by_mask.get(progress.mask)
        if sid is None:
            sid = len(self.states)
            self.states[sid] = AbstractState(sid, progress)
            self._ids_by_mask[progress.mask] = sid
            self.visit_counts[sid] = 0
            self.samples[sid] = SampleStore(self.sample_cap)
        return sid

    def record_visit(self, sid: int, concrete: JointState) -> None:
        self.visit_counts[sid] += 1
        self.samples[sid].add(concrete.to_json(), self._rng)

    def add_transition(self, src: int, action: JointAction, dst: int) -> None:
        targets = self.transitions.setdefault((src, action), {})
        targets[dst] = targets.get(dst, 0) + 1

    # -- queries -----------------------------------------------------------

    def edge_probability(self, src: int, action: JointAction, dst: int) -> float:
        targets = self.transitions[(src, action)]
        return targets[dst] / sum(targets.values())

    def successors(self, src: int) -> dict[int, int]:
        """Aggregate outgoing counts per target over all actions."""
        out: dict[int, int] = {}
        for (s, _a), targets in self.transitions.items():
            if s != src:
                continue
            for dst, count in targets.items():
                out[dst] = out.get(dst, 0) + count
        return out

    def edge_events(self, src: int, dst: int) -> frozenset[CompletionEvent]:
        return events_of(self.states[src].progress, self.states[dst].progress)

    def num_transitions(self) -> int:
        return sum(len(t) for t in self.transitions.values())

    def events_seen(self) -> frozenset[CompletionEvent]:
        """Every distinct completion event on any sampled edge."""
        seen: set[CompletionEvent] = set()
        for (src, _a), targets in self.transitions.items():
            for dst in targets:
                if dst != src:
                    seen |= self.edge_events(src, dst)
        return frozenset(seen)

    # -- persistence -------------------------------------------------------

    def to_dict(self) -> dict:
        transitions = []
        for (src, action), targets in sorted(
                self.transitions.items(), key=lambda kv: (kv[0][0], kv[0][1])):
            transitions.append({
                "src": src,
                "action": list(action),
                "targets": [{"dst": d, "count": c}
                            for d, c in sorted(targets.items())],
            })
        return {
            "version": FORMAT_VERSION,
            "numAgents": self.num_agents,
            "tasks": list(self.tasks),
            "language": self.naming.to_dict(),
            "states": [{"id": s.id, "bits": s.progress.bitstring()}
                       for s in sorted(self.states.values(), key=lambda s: s.id)],
            "initial": self.initial,
            "transitions": transitions,
            "visitCounts": {str(k): v for k, v in sorted(self.visit_counts.items())},
            "samples": {str(k): list(store.items)
                        for k, store in sorted(self.samples.items())},
        }

    @classmethod
    def from_dict(cls, data: dict, sample_cap: int = DEFAULT_SAMPLE_CAP) -> "Mmdp":
        if not isinstance(data, dict):
            raise MmdpFormatError("top level must be an object")
        version = data.get("version")
        if version != FORMAT_VERSION:
            raise UnsupportedVersion(
                f"file version {version!r}, supported {FORMAT_VERSION}")
        try:
            mmdp = cls(int(data["numAgents"]), tuple(data["tasks"]),
                       naming=Naming.from_dict(data.get("language")),
                       sample_cap=sample_cap)
            for entry in data["states"]:
                progress = ProgressMatrix.from_bitstring(
                    entry["bits"], mmdp.num_agents, mmdp.tasks)
                sid = mmdp.intern(progress)
                if sid != int(entry["id"]):
                    raise MmdpFormatError(
                        f"state ids must be dense and ordered; got {entry['id']}")
            if int(data["initial"]) != mmdp.initial:
                raise MmdpFormatError("initial state must be the all-false matrix")
            for tr in data["transitions"]:
                action = tuple(tr["action"])
                for target in tr["targets"]:
                    dst, count = int(target["dst"]), int(target["count"])
                    if count < 1:
                        raise MmdpFormatError("transition counts must be >= 1")
                    targets = mmdp.transitions.setdefault((int(tr["src"]), action), {})
                    targets[dst] = targets.get(dst, 0) + count
            for key, value in data["visitCounts"].items():
                mmdp.visit_counts[int(key)] = int(value)
            for key, items in data["samples"].items():
                sid = int(key)
                mmdp.samples[sid] = SampleStore(
                    max(sample_cap, len(items)), items=list(items))
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise MmdpFormatError(f"malformed abstraction file: {exc}") from exc
        return mmdp

    def structurally_equal(self, other: "Mmdp") -> bool:
        a, b = self.to_dict(), other.to_dict()
        for doc in (a, b):  # sample order is not significant
            doc["samples"] = {k: sorted(v) for k, v in doc["samples"].items()}
        return a == b

    def __eq__(self, other):
        return isinstance(other, Mmdp) and self.structurally_equal(other)


# -- operations ------------------------------------------------------------


def apply_trajectory(mmdp: Mmdp, trajectory: Trajectory,
                     start_progress: ProgressMatrix) -> Mmdp:
    """Fold one sampled trajectory into the abstraction in place.

    ``start_progress`` must be the abstract progress of the state the
    trajectory began from (all-false for fresh episodes).
    """
    if not trajectory:
        return mmdp
    current = mmdp.intern(start_progress)
    mmdp.record_visit(current, trajectory[0].state)
    progress = start_progress
    for step in trajectory:
        progress = progress.apply_events(step.outcome.events)
        nxt = mmdp.intern(progress)
        mmdp.add_transition(current, step.action, nxt)
        current = nxt
        mmdp.record_visit(current, step.outcome.next_state)
    return mmdp


def build_mmdp(env: Environment, policy, episodes: int, max_steps: int,
               seed: int, sample_cap: int = DEFAULT_SAMPLE_CAP,
               log: list | None = None) -> Mmdp:
    """Sample ``episodes`` executions and aggregate them.

    Pass a list as ``log`` to also collect the raw trajectories, e.g. to
    recount transition frequencies independently.
    """
    if episodes < 1:
        raise ValueError("episodes must be >= 1")
    config: EnvConfig = env.config
    mmdp = Mmdp(config.num_agents, config.task_names, naming=config.naming,
                sample_cap=sample_cap, seed=seed)
    zero = ProgressMatrix.zero(config.num_agents, config.task_names)
    master = random.Random(seed)
    for _ in range(episodes):
        ep_seed = master.getrandbits(64)
        trajectory = run_episode(env, policy, max_steps, ep_seed)
        apply_trajectory(mmdp, trajectory, zero)
        if log is not None:
            log.append(trajectory)
    return mmdp


@dataclass(frozen=True)
class Plan:
    """Ordered columns of simultaneous completion events."""

    columns: tuple[frozenset[CompletionEvent], ...]

    def to_dict(self) -> dict:
        return {
            "columns": [
                [ev.to_dict() for ev in sorted(col, key=lambda e: e.task)]
                for col in self.columns
            ]
        }


def summarize_plan(mmdp: Mmdp) -> Plan:
    """Witness plan: follow the most frequent progress-making edge from the
    initial state until every task is complete.

    Self-loops carry no events and are skipped; ties go to the smaller
    target id. Raises NoCompletePath when the walk dead-ends early.
    """
    columns: list[frozenset[CompletionEvent]] = []
    current = mmdp.initial
    while not mmdp.states[current].progress.all_done():
        succ = {dst: c for dst, c in mmdp.successors(current).items()
                if dst != current}
        if not succ:
            raise NoCompletePath(
                f"no progress-making edge out of state {current}")
        best = max(succ.items(), key=lambda kv: (kv[1], -kv[0]))[0]
        columns.append(mmdp.edge_events(current, best))
        current = best
    return Plan(tuple(columns))


def save(mmdp: Mmdp, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(mmdp.to_dict(), fh, indent=1)
        fh.write("\n")


def load(path, sample_cap: int = DEFAULT_SAMPLE_CAP) -> Mmdp:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MmdpFormatError(
            f"not valid JSON: {exc.msg} at line {exc.lineno} column {exc.colno}"
        ) from exc
    return Mmdp.from_dict(data, sample_cap=sample_cap)
