"""Multi-agent task environments and policy oracles."""

from .core import (CompletionEvent, EnvConfig, Environment, JointAction,
                   JointState, Step, StepOutcome, TaskSpec, Trajectory,
                   run_episode)
from .grids import ACTIONS, PlateChainEnv, SearchRescueEnv, make_environment
from .io import (env_config_from_dict, load_env_config, load_environment,
                 load_policy, policy_from_dict)
from .policies import (PolicyOracle, ScriptEntry, ScriptedPolicy,
                       TabularPolicy)

__all__ = [
    "ACTIONS", "CompletionEvent", "EnvConfig", "Environment", "JointAction",
    "JointState", "PlateChainEnv", "PolicyOracle", "ScriptEntry",
    "ScriptedPolicy", "SearchRescueEnv", "Step", "StepOutcome",
    "TabularPolicy", "TaskSpec", "Trajectory", "env_config_from_dict",
    "load_env_config", "load_environment", "load_policy",
    "make_environment", "policy_from_dict", "run_episode",
]
