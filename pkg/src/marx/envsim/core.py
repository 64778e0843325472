"""Core simulation types: joint states, step outcomes, the environment
contract, and the episode runner.

Agents carry 1-based ids. A :class:`JointState` is immutable and contains
everything the dynamics need (positions plus per-task done flags), so
``Environment.step`` is a pure transition function; the mutable cursor kept
by ``inject``/``reset`` only exists for callers that want stateful stepping.
"""

from __future__ import annotations

import json
import random
from abc import ABC, abstractmethod
from dataclasses import dataclass, field

from ..errors import IncompatibleState
from ..naming import Naming


@dataclass(frozen=True)
class TaskSpec:
    """One task: where it is and how many agents must act together."""

    name: str
    cell: tuple[int, int]
    coalition_size: int


@dataclass(frozen=True)
class EnvConfig:
    """Static description of a grid environment."""

    num_agents: int
    tasks: tuple[TaskSpec, ...]
    grid_width: int
    grid_height: int
    agents_start: tuple[tuple[int, int], ...]
    max_episode_steps: int = 10_000
    kind: str = "search_rescue"
    naming: Naming = field(default_factory=Naming)

    def __post_init__(self):
        if self.num_agents < 1:
            raise ValueError("need at least one agent")
        names = [t.name for t in self.tasks]
        if len(set(names)) != len(names):
            raise ValueError("task names must be unique")
        cells = [t.cell for t in self.tasks]
        if len(set(cells)) != len(cells):
            raise ValueError("task cells must be unique")
        for t in self.tasks:
            if not 1 <= t.coalition_size <= self.num_agents:
                raise ValueError(
                    f"task {t.name}: coalition size {t.coalition_size} "
                    f"outside 1..{self.num_agents}")
        if len(self.agents_start) != self.num_agents:
            raise ValueError("agentsStart length must equal numAgents")

    @property
    def task_names(self) -> tuple[str, ...]:
        return tuple(t.name for t in self.tasks)

    def task(self, name: str) -> TaskSpec:
        for t in self.tasks:
            if t.name == name:
                return t
        raise KeyError(name)


@dataclass(frozen=True)
class JointState:
    """Positions of all agents plus the per-task done flags."""

    agents: tuple[tuple[int, int], ...]
    done: tuple[bool, ...]

    def to_json(self) -> str:
        return json.dumps(
            {"agents": [list(p) for p in self.agents],
             "done": [int(d) for d in self.done]},
            separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "JointState":
        data = json.loads(text)
        return cls(
            agents=tuple((int(x), int(y)) for x, y in data["agents"]),
            done=tuple(bool(d) for d in data["done"]))


JointAction = tuple[str, ...]


@dataclass(frozen=True)
class CompletionEvent:
    """A task realized by an exact coalition on one step."""

    task: str
    coalition: frozenset[int]

    def to_dict(self) -> dict:
        return {"task": self.task, "coalition": sorted(self.coalition)}

    @classmethod
    def from_dict(cls, data: dict) -> "CompletionEvent":
        return cls(data["task"], frozenset(int(i) for i in data["coalition"]))


@dataclass(frozen=True)
class StepOutcome:
    next_state: JointState
    rewards: tuple[float, ...]
    events: frozenset[CompletionEvent]


@dataclass(frozen=True)
class Step:
    """One sampled transition."""

    state: JointState
    action: JointAction
    outcome: StepOutcome


Trajectory = list[Step]


class Environment(ABC):
    """Stateful wrapper around a pure grid transition function."""

    def __init__(self, config: EnvConfig):
        self.config = config
        self._current: JointState | None = None

    @property
    @abstractmethod
    def action_ids(self) -> tuple[str, ...]:
        ...

    @abstractmethod
    def step(self, state: JointState, action: JointAction) -> StepOutcome:
        """Pure transition: next state, per-agent rewards, completion events."""

    def initial_state(self) -> JointState:
        return JointState(
            agents=self.config.agents_start,
            done=(False,) * len(self.config.tasks))

    def reset(self, seed: int = 0) -> JointState:
        # The built-in grids have deterministic dynamics; the seed only
        # matters for stochastic subclasses but stays in the signature so
        # equal seeds always give equal initial states.
        del seed
        self._current = self.initial_state()
        return self._current

    def inject(self, state: JointState) -> JointState:
        """Adopt a previously produced state as the episode cursor."""
        self.validate_state(state)
        self._current = state
        return state

    def validate_state(self, state: JointState) -> None:
        if len(state.agents) != self.config.num_agents:
            raise IncompatibleState(
                f"state has {len(state.agents)} agents, "
                f"environment has {self.config.num_agents}")
        if len(state.done) != len(self.config.tasks):
            raise IncompatibleState(
                f"state has {len(state.done)} task flags, "
                f"environment has {len(self.config.tasks)}")
        for x, y in state.agents:
            if not (0 <= x < self.config.grid_width
                    and 0 <= y < self.config.grid_height):
                raise IncompatibleState(f"agent position ({x},{y}) off-grid")

    @property
    def current_state(self) -> JointState:
        if self._current is None:
            self._current = self.initial_state()
        return self._current

    def advance(self, action: JointAction) -> StepOutcome:
        """Step the internal cursor."""
        outcome = self.step(self.current_state, action)
        self._current = outcome.next_state
        return outcome


def run_episode(env: Environment, policy, max_steps: int, seed: int,
                start: JointState | None = None) -> Trajectory:
    """Sample one execution of ``policy``; stops early once every task is done.

    Equal seeds (with equal policies and start states) give equal
    trajectories.
    """
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    rng = random.Random(seed)
    state = env.inject(start) if start is not None else env.reset(seed)
    steps: Trajectory = []
    for _ in range(max_steps):
        if all(state.done):
            break
        action = policy.sample(state, rng)
        outcome = env.step(state, action)
        steps.append(Step(state, action, outcome))
        state = outcome.next_state
    env._current = state
    return steps
