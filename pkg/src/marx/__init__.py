"""marx: feasibility checking and contrastive explanation of temporal task
queries against sampled multi-agent policies."""

from .abstraction import (Mmdp, Plan, ProgressMatrix, apply_trajectory,
                          build_mmdp, events_of, load, save, summarize_plan)
from .checker import (BOTTOM, FeasibilityResult, WitnessEdge, annotate,
                      check_feasible, monitor_step)
from .envsim import (CompletionEvent, EnvConfig, JointState, PolicyOracle,
                     ScriptedPolicy, TabularPolicy, TaskSpec,
                     make_environment, run_episode)
from .explainer import (ExplanationReport, Implicant, explain, minimal_dnf,
                        repair_query, select_term, target_states, translate)
from .querylang import (QueryItem, TemporalQuery, parse_query, render_query,
                        to_pctl, validate)
from .rollout import RolloutParams, frontier, guided_rollout
from .service import QueryAnswer, RunConfig, Workspace, answer_query

__version__ = "0.1.0"

__all__ = [
    "BOTTOM", "CompletionEvent", "EnvConfig", "ExplanationReport",
    "FeasibilityResult", "Implicant", "JointState", "Mmdp", "Plan",
    "PolicyOracle", "ProgressMatrix", "QueryAnswer", "QueryItem",
    "RolloutParams", "RunConfig", "ScriptedPolicy", "TabularPolicy",
    "TaskSpec", "TemporalQuery", "WitnessEdge", "Workspace", "annotate",
    "answer_query", "apply_trajectory", "build_mmdp", "check_feasible",
    "events_of", "explain", "frontier", "guided_rollout", "load",
    "make_environment", "minimal_dnf", "monitor_step", "parse_query",
    "render_query", "repair_query", "run_episode", "save", "select_term",
    "summarize_plan", "target_states", "to_pctl", "translate", "validate",
]
