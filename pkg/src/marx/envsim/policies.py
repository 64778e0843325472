"""Policy oracles that stand in for trained controllers.

A policy is a function from joint state to a distribution over joint
actions; sampling threads an explicit ``random.Random`` so runs are
reproducible and instances can be shared read-only across threads.
"""

from __future__ import annotations

import random
from abc import ABC, abstractmethod
from dataclasses import dataclass

from .core import EnvConfig, JointAction, JointState
from .grids import ACTIONS


class PolicyOracle(ABC):
    @abstractmethod
    def sample(self, state: JointState, rng: random.Random) -> JointAction:
        ...

    def action_distribution(self, state: JointState) -> dict[JointAction, float] | None:
        """Explicit distribution when the policy can enumerate it."""
        return None


def _step_toward(pos: tuple[int, int], target: tuple[int, int]) -> str:
    if pos[0] < target[0]:
        return "right"
    if pos[0] > target[0]:
        return "left"
    if pos[1] < target[1]:
        return "up"
    if pos[1] > target[1]:
        return "down"
    return "stay"


@dataclass(frozen=True)
class ScriptEntry:
    task: str
    agents: frozenset[int]


class ScriptedPolicy(PolicyOracle):
    """Waypoint policy over an ordered task script.

    Sequential mode (default): all scripted coalitions work through the
    script one entry at a time; agents outside the current coalition stay.
    Concurrent mode: each agent pursues the first incomplete entry whose
    coalition contains it, so independent coalitions race.

    A coalition acts only when all of its members stand on the task cell,
    which keeps completions simultaneous. With probability ``epsilon`` each
    agent's choice is replaced by a uniformly random action.
    """

    def __init__(self, config: EnvConfig, script: list[ScriptEntry],
                 epsilon: float = 0.0, concurrent: bool = False):
        self.config = config
        self.script = list(script)
        self.epsilon = epsilon
        self.concurrent = concurrent
        self._task_index = {t.name: i for i, t in enumerate(config.tasks)}
        for entry in script:
            if entry.task not in self._task_index:
                raise ValueError(f"scripted task {entry.task!r} not in config")

    def _entry_for(self, state: JointState, agent_id: int) -> ScriptEntry | None:
        for entry in self.script:
            if state.done[self._task_index[entry.task]]:
                continue
            if self.concurrent:
                if agent_id in entry.agents:
                    return entry
                continue
            # sequential: everyone keys off the first incomplete entry
            return entry if agent_id in entry.agents else None
        return None

    def _intended(self, state: JointState, agent_id: int) -> str:
        entry = self._entry_for(state, agent_id)
        if entry is None:
            return "stay"
        cell = self.config.task(entry.task).cell
        pos = state.agents[agent_id - 1]
        if pos != cell:
            return _step_toward(pos, cell)
        members_present = all(
            state.agents[m - 1] == cell for m in entry.agents)
        return "act" if members_present else "stay"

    def sample(self, state: JointState, rng: random.Random) -> JointAction:
        out = []
        for agent_id in range(1, self.config.num_agents + 1):
            a = self._intended(state, agent_id)
            if self.epsilon > 0 and rng.random() < self.epsilon:
                a = rng.choice(ACTIONS)
            out.append(a)
        return tuple(out)


class TabularPolicy(PolicyOracle):
    """Lookup policy keyed by the serialized joint state.

    Each entry maps a state to weighted joint actions; unknown states fall
    back to the default action.
    """

    def __init__(self, table: dict[str, list[tuple[JointAction, float]]],
                 default: JointAction):
        self.table = table
        self.default = default

    def sample(self, state: JointState, rng: random.Random) -> JointAction:
        choices = self.table.get(state.to_json())
        if not choices:
            return self.default
        actions = [a for a, _ in choices]
        weights = [w for _, w in choices]
        return rng.choices(actions, weights=weights, k=1)[0]

    def action_distribution(self, state: JointState) -> dict[JointAction, float] | None:
        choices = self.table.get(state.to_json())
        if not choices:
            return {self.default: 1.0}
        total = sum(w for _, w in choices)
        return {a: w / total for a, w in choices}
