"""JSON loaders for environment configs and policy files.

Environment config schema::

    {
      "numAgents": 3,
      "grid": {"w": 5, "h": 5},
      "tasks": [{"name": "fire", "cell": [3, 1], "coalition": 2}, ...],
      "agentsStart": [[0, 0], [1, 0], [2, 0]],
      "kind": "search_rescue" | "chain",          # optional
      "maxEpisodeSteps": 10000,                    # optional
      "language": {                                # optional verb table
        "agentNoun": "robot", "groupNoun": "robots",
        "tasks": {"fire": {"infinitive": "...", "gerund": "..."}}
      }
    }

Policy file schema::

    {"type": "scripted", "script": [{"task": "fire", "agents": [2, 3]}],
     "epsilon": 0.0, "concurrent": false}
    {"type": "tabular", "entries": [{"state": {...}, "actions":
       [{"action": ["stay", ...], "weight": 1.0}]}], "default": ["stay", ...]}
"""

from __future__ import annotations

import json
from pathlib import Path

from .core import EnvConfig, JointState, TaskSpec
from .grids import make_environment
from .policies import PolicyOracle, ScriptEntry, ScriptedPolicy, TabularPolicy
from ..naming import Naming


def env_config_from_dict(data: dict) -> EnvConfig:
    tasks = tuple(
        TaskSpec(name=t["name"], cell=(int(t["cell"][0]), int(t["cell"][1])),
                 coalition_size=int(t["coalition"]))
        for t in data["tasks"])
    return EnvConfig(
        num_agents=int(data["numAgents"]),
        tasks=tasks,
        grid_width=int(data["grid"]["w"]),
        grid_height=int(data["grid"]["h"]),
        agents_start=tuple((int(x), int(y)) for x, y in data["agentsStart"]),
        max_episode_steps=int(data.get("maxEpisodeSteps", 10_000)),
        kind=data.get("kind", "search_rescue"),
        naming=Naming.from_dict(data.get("language")),
    )


def load_env_config(path: str | Path) -> EnvConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return env_config_from_dict(json.load(fh))


def load_environment(path: str | Path):
    return make_environment(load_env_config(path))


def policy_from_dict(data: dict, config: EnvConfig) -> PolicyOracle:
    kind = data.get("type")
    if kind == "scripted":
        script = [
            ScriptEntry(task=e["task"],
                        agents=frozenset(int(a) for a in e["agents"]))
            for e in data["script"]]
        return ScriptedPolicy(
            config, script,
            epsilon=float(data.get("epsilon", 0.0)),
            concurrent=bool(data.get("concurrent", False)))
    if kind == "tabular":
        table: dict[str, list[tuple[tuple[str, ...], float]]] = {}
        for entry in data.get("entries", []):
            key = JointState(
                agents=tuple((int(x), int(y)) for x, y in entry["state"]["agents"]),
                done=tuple(bool(d) for d in entry["state"]["done"])).to_json()
            table[key] = [
                (tuple(c["action"]), float(c.get("weight", 1.0)))
                for c in entry["actions"]]
        return TabularPolicy(table, default=tuple(data["default"]))
    raise ValueError(f"unknown policy type {kind!r}")


def load_policy(path: str | Path, config: EnvConfig) -> PolicyOracle:
    with open(path, "r", encoding="utf-8") as fh:
        return policy_from_dict(json.load(fh), config)
