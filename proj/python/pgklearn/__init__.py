"""Kernel learning of parametrized quantum states (C++ core)."""

import json

from ._pgk import *  # noqa: F401,F403
from ._pgk import default_config, run_experiment as _run_experiment


def config(task="energy", **overrides):
    """Default experiment configuration for `task` as a dict, with top-level overrides."""
    cfg = json.loads(default_config(task))
    cfg.update(overrides)
    return cfg


def run(cfg):
    """Run an experiment from a config dict (or JSON string)."""
    if not isinstance(cfg, str):
        cfg = json.dumps(cfg)
    return _run_experiment(cfg)
