"""Guided rollout: enrich the abstraction with fresh policy samples,
starting from stored concrete states of promising abstract states.

Promising means: highest conformance with the query first, then least
sampled. The frontier is computed once per call and popped; popped states
are not re-enqueued.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .abstraction import Mmdp, apply_trajectory
from .checker import annotate
from .envsim.core import Environment, JointState, run_episode
from .errors import EmptySampleMap
from .querylang import TemporalQuery


@dataclass(frozen=True)
class RolloutParams:
    rollout_num: int = 10
    depth_limit: int = 50
    seed: int = 0

    def __post_init__(self):
        if self.rollout_num < 0:
            raise ValueError("rollout_num must be >= 0")
        if self.depth_limit < 1:
            raise ValueError("depth_limit must be >= 1")


def frontier(mmdp: Mmdp, query: TemporalQuery) -> list[int]:
    """States ordered by conformance level descending, then visit count
    ascending, then id. States only reachable through query violations are
    excluded."""
    _umax, node_u = annotate(mmdp, query)
    return sorted(node_u,
                  key=lambda sid: (-node_u[sid], mmdp.visit_counts[sid], sid))


def guided_rollout(mmdp: Mmdp, env: Environment, policy,
                   query: TemporalQuery, params: RolloutParams) -> Mmdp:
    """Run up to ``rollout_num`` depth-limited policy executions and fold
    them into the abstraction in place; returns the same instance."""
    order = frontier(mmdp, query)
    rng = random.Random(params.seed)
    for sid in order[:params.rollout_num]:
        store = mmdp.samples[sid]
        if not store.items:
            raise EmptySampleMap(f"state {sid} has no stored concrete states")
        start = JointState.from_json(rng.choice(store.items))
        episode_seed = rng.getrandbits(64)
        trajectory = run_episode(env, policy, params.depth_limit,
                                 episode_seed, start=start)
        apply_trajectory(mmdp, trajectory, mmdp.states[sid].progress)
    return mmdp
