"""Built-in grid environments.

Both grids share the same action set (four moves, stay, act). A task
completes the first time at least ``coalition_size`` agents standing on its
cell all choose ``act`` in the same step; the completing coalition is
exactly the set of acting agents on that cell. Each agent receives reward
1.0 on the step it belongs to a completing coalition, 0.0 otherwise.
"""

from __future__ import annotations

from .core import (CompletionEvent, EnvConfig, Environment, JointAction,
                   JointState, StepOutcome)
from ..errors import InvalidAction

ACTIONS: tuple[str, ...] = ("up", "down", "left", "right", "stay", "act")

_MOVES = {
    "up": (0, 1),
    "down": (0, -1),
    "left": (-1, 0),
    "right": (1, 0),
    "stay": (0, 0),
    "act": (0, 0),
}


class SearchRescueEnv(Environment):
    """Open grid: agents move freely and cooperate on co-located tasks."""

    @property
    def action_ids(self) -> tuple[str, ...]:
        return ACTIONS

    def _move_allowed(self, state: JointState, src: tuple[int, int],
                      dst: tuple[int, int]) -> bool:
        del state, src
        return (0 <= dst[0] < self.config.grid_width
                and 0 <= dst[1] < self.config.grid_height)

    def step(self, state: JointState, action: JointAction) -> StepOutcome:
        self.validate_state(state)
        if len(action) != self.config.num_agents:
            raise InvalidAction(
                f"joint action has {len(action)} entries, "
                f"need {self.config.num_agents}")
        for a in action:
            if a not in _MOVES:
                raise InvalidAction(f"unknown action {a!r}")

        positions = list(state.agents)
        for idx, a in enumerate(action):
            dx, dy = _MOVES[a]
            target = (positions[idx][0] + dx, positions[idx][1] + dy)
            if (dx, dy) != (0, 0) and self._move_allowed(state, positions[idx], target):
                positions[idx] = target

        # Acting agents are evaluated on their pre-move cells (act implies
        # staying put, so pre == post for them).
        events = set()
        done = list(state.done)
        for t_idx, task in enumerate(self.config.tasks):
            if done[t_idx]:
                continue
            acting = frozenset(
                i + 1 for i in range(self.config.num_agents)
                if action[i] == "act" and state.agents[i] == task.cell)
            if len(acting) >= task.coalition_size:
                events.add(CompletionEvent(task.name, acting))
                done[t_idx] = True

        rewarded = set()
        for ev in events:
            rewarded |= ev.coalition
        rewards = tuple(
            1.0 if i + 1 in rewarded else 0.0
            for i in range(self.config.num_agents))
        next_state = JointState(agents=tuple(positions), done=tuple(done))
        return StepOutcome(next_state, rewards, frozenset(events))


class PlateChainEnv(SearchRescueEnv):
    """Chain variant: a full-height wall sits just right of each task cell
    and stays closed until that task completes, so tasks open up in order
    of their column."""

    def __init__(self, config: EnvConfig):
        super().__init__(config)
        # door x-coordinate -> index of the task that opens it
        self._doors = {
            task.cell[0]: idx for idx, task in enumerate(config.tasks)
        }

    def _move_allowed(self, state: JointState, src: tuple[int, int],
                      dst: tuple[int, int]) -> bool:
        if not super()._move_allowed(state, src, dst):
            return False
        if dst[0] > src[0]:  # moving right may cross a door
            for door_x, t_idx in self._doors.items():
                if src[0] <= door_x < dst[0] and not state.done[t_idx]:
                    return False
        return True


def make_environment(config: EnvConfig) -> Environment:
    if config.kind == "search_rescue":
        return SearchRescueEnv(config)
    if config.kind == "chain":
        return PlateChainEnv(config)
    raise ValueError(f"unknown environment kind {config.kind!r}")
