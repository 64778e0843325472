import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from marx.abstraction import Mmdp, build_mmdp
from marx.envsim import make_environment
from marx.envsim.io import load_env_config, load_policy

FIXTURES = Path(__file__).parent.parent / "fixtures"


@pytest.fixture(scope="session")
def sr3_env_config():
    return load_env_config(FIXTURES / "sr3_env.json")


@pytest.fixture()
def sr3_env(sr3_env_config):
    return make_environment(sr3_env_config)


@pytest.fixture(scope="session")
def sr3_policy(sr3_env_config):
    return load_policy(FIXTURES / "sr3_policy.json", sr3_env_config)


@pytest.fixture(scope="session")
def fig_mmdp(sr3_env_config, sr3_policy) -> Mmdp:
    """The four-state chain abstraction of the deterministic rescue script."""
    env = make_environment(sr3_env_config)
    return build_mmdp(env, sr3_policy, episodes=1, max_steps=50, seed=7)


@pytest.fixture(scope="session")
def race_setup():
    config = load_env_config(FIXTURES / "race_env.json")
    env = make_environment(config)
    policy = load_policy(FIXTURES / "race_policy.json", config)
    return config, env, policy


@pytest.fixture(scope="session")
def sr5_setup():
    config = load_env_config(FIXTURES / "sr5_env.json")
    env = make_environment(config)
    policy = load_policy(FIXTURES / "sr5_policy.json", config)
    return config, env, policy
