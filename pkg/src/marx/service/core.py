"""End-to-end pipeline: check, roll out on a miss, explain on a second miss.

A Workspace bundles the loaded environment, policy, run configuration, and
the abstraction (built fresh or loaded from the configured cache path).
"""

from __future__ import annotations

import json
import os
import threading
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

from ..abstraction import Mmdp, build_mmdp, load, save
from ..checker import WitnessEdge, check_feasible
from ..envsim.core import EnvConfig, Environment
from ..envsim.io import load_env_config, load_policy, make_environment
from ..explainer import ExplanationReport, explain
from ..querylang import TemporalQuery
from ..rollout import RolloutParams, guided_rollout

CONFIG_ENV_VAR = "MARX_CONFIG"


@dataclass(frozen=True)
class RunConfig:
    env_config: Path
    policy: Path
    episodes: int = 200
    max_steps: int = 10_000
    rollout_num: int = 10
    depth_limit: int = 50
    seed: int = 0
    mmdp_cache_path: Path | None = None
    qm_var_cap: int | None = None
    queue_writes: bool = False
    ui_dir: Path | None = None
    host: str = "127.0.0.1"
    port: int = 8765

    def __post_init__(self):
        if self.episodes < 1 or self.max_steps < 1 or self.depth_limit < 1:
            raise ValueError("episodes, max_steps, depth_limit must be >= 1")
        if self.rollout_num < 0:
            raise ValueError("rollout_num must be >= 0")


def load_run_config(path: str | Path) -> RunConfig:
    base = Path(path).resolve().parent
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)

    def resolve(key) -> Path | None:
        value = data.get(key)
        return (base / value).resolve() if value else None

    return RunConfig(
        env_config=resolve("envConfig"),
        policy=resolve("policy"),
        episodes=int(data.get("episodes", 200)),
        max_steps=int(data.get("maxSteps", 10_000)),
        rollout_num=int(data.get("rolloutNum", 10)),
        depth_limit=int(data.get("depthLimit", 50)),
        seed=int(data.get("seed", 0)),
        mmdp_cache_path=resolve("mmdpCachePath"),
        qm_var_cap=int(data["qmVarCap"]) if "qmVarCap" in data else None,
        queue_writes=bool(data.get("queueWrites", False)),
        ui_dir=resolve("uiDir"),
        host=data.get("host", "127.0.0.1"),
        port=int(data.get("port", 8765)),
    )


def config_from_env() -> RunConfig:
    path = os.environ.get(CONFIG_ENV_VAR)
    if not path:
        raise ValueError(f"{CONFIG_ENV_VAR} is not set and no --config given")
    return load_run_config(path)


@dataclass
class PhaseTimings:
    abstraction_ms: float = 0.0
    check_ms: float = 0.0
    rollout_ms: float = 0.0
    explain_ms: float = 0.0

    def to_dict(self) -> dict:
        return {
            "abstractionMs": round(self.abstraction_ms, 3),
            "checkMs": round(self.check_ms, 3),
            "rolloutMs": round(self.rollout_ms, 3),
            "explainMs": round(self.explain_ms, 3),
        }


@dataclass
class QueryAnswer:
    feasible: bool
    timings: PhaseTimings
    num_states: int
    num_transitions: int
    witness: list[WitnessEdge] | None = None
    report: ExplanationReport | None = None
    rollout_ran: bool = False

    def to_dict(self) -> dict:
        body = {
            "verdict": "feasible" if self.feasible else "infeasible",
            "timings": self.timings.to_dict(),
            "mmdpStats": {"numStates": self.num_states,
                          "numTransitions": self.num_transitions},
        }
        if self.feasible:
            body["witness"] = [edge.to_dict() for edge in self.witness or []]
        else:
            body["report"] = self.report.to_dict()
        return body


def answer_query(mmdp: Mmdp, env: Environment, policy,
                 query: TemporalQuery, config: RunConfig,
                 abstraction_ms: float = 0.0) -> QueryAnswer:
    """Check the query; on a miss, enrich the abstraction by guided rollout
    and re-check; on a second miss, generate the explanation report.

    A feasible first check is a pure read: the abstraction is untouched.
    """
    timings = PhaseTimings(abstraction_ms=abstraction_ms)
    t0 = time.perf_counter()
    result = check_feasible(mmdp, query)
    timings.check_ms += (time.perf_counter() - t0) * 1000
    rollout_ran = False
    if not result.feasible:
        params = RolloutParams(config.rollout_num, config.depth_limit,
                               config.seed)
        t0 = time.perf_counter()
        guided_rollout(mmdp, env, policy, query, params)
        timings.rollout_ms += (time.perf_counter() - t0) * 1000
        rollout_ran = config.rollout_num > 0
        t0 = time.perf_counter()
        result = check_feasible(mmdp, query)
        timings.check_ms += (time.perf_counter() - t0) * 1000
    stats = (len(mmdp.states), mmdp.num_transitions())
    if result.feasible:
        return QueryAnswer(True, timings, *stats, witness=result.witness,
                           rollout_ran=rollout_ran)
    t0 = time.perf_counter()
    report = explain(mmdp, query, var_cap=config.qm_var_cap)
    timings.explain_ms += (time.perf_counter() - t0) * 1000
    return QueryAnswer(False, timings, *stats, report=report,
                       rollout_ran=rollout_ran)


@dataclass
class Workspace:
    """Loaded pipeline state shared by the CLI and the HTTP service."""

    config: RunConfig
    env_config: EnvConfig
    env: Environment
    policy: object
    mmdp: Mmdp
    abstraction_ms: float = 0.0
    lock: threading.Lock = field(default_factory=threading.Lock)

    @classmethod
    def from_config(cls, config: RunConfig, rebuild: bool = False) -> "Workspace":
        env_config = load_env_config(config.env_config)
        env = make_environment(env_config)
        policy = load_policy(config.policy, env_config)
        cache = config.mmdp_cache_path
        abstraction_ms = 0.0
        if cache and cache.exists() and not rebuild:
            mmdp = load(cache)
        else:
            t0 = time.perf_counter()
            mmdp = build_mmdp(env, policy, config.episodes, config.max_steps,
                              config.seed)
            abstraction_ms = (time.perf_counter() - t0) * 1000
            if cache:
                save(mmdp, cache)
        return cls(config, env_config, env, policy, mmdp, abstraction_ms)

    def answer(self, query: TemporalQuery,
               seed: int | None = None) -> QueryAnswer:
        config = self.config if seed is None else replace(self.config, seed=seed)
        answer = answer_query(self.mmdp, self.env, self.policy, query, config,
                              abstraction_ms=self.abstraction_ms)
        if answer.rollout_ran and self.config.mmdp_cache_path:
            save(self.mmdp, self.config.mmdp_cache_path)
        return answer
