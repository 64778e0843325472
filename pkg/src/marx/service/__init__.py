"""Pipeline orchestration, run configuration, and the HTTP API."""

from .core import (CONFIG_ENV_VAR, PhaseTimings, QueryAnswer, RunConfig,
                   Workspace, answer_query, config_from_env, load_run_config)
from .http import create_app

__all__ = [
    "CONFIG_ENV_VAR", "PhaseTimings", "QueryAnswer", "RunConfig",
    "Workspace", "answer_query", "config_from_env", "create_app",
    "load_run_config",
]
