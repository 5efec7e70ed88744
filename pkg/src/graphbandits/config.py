"""Experiment configuration files.

Configs are YAML mappings with three blocks:

    instance:
      means: [0.9, 0.6, 0.6]
      graph: "cliques:2,1"        # spec string, or {edges: [...], num_arms: N}
      family: bernoulli           # optional
    policy:
      name: ucb-n                 # ucb-n | ucb1 | ts-n
      delta: 0.001                # optional
    run:
      horizon: 10000
      runs: 50                    # optional, default 1
      seed: 7                     # optional, default 0
      checkpoints: [10, 100]      # optional, default powers of two
    mis:                          # optional block
      exact_limit: 30
      allow_approximate: false
"""
from __future__ import annotations

from pathlib import Path

import yaml

from .env import BanditInstance
from .errors import ConfigError, InputError
from .graph import FeedbackGraph, parse_graph_spec
from .sim import ExperimentConfig

__all__ = ["experiment_config_from_dict", "load_experiment_config"]


def _require(mapping, key: str, label: str):
    if not isinstance(mapping, dict):
        raise ConfigError(f"{label.rsplit('.', 1)[0]} must be a mapping")
    if key not in mapping:
        raise ConfigError(f"missing required field: {label}")
    return mapping[key]


def _graph_from_value(value, label: str) -> FeedbackGraph:
    if isinstance(value, str):
        try:
            return parse_graph_spec(value)
        except InputError as exc:
            raise ConfigError(f"{label}: {exc}") from exc
    if isinstance(value, dict):
        raw_edges = value.get("edges", [])
        if not isinstance(raw_edges, list):
            raise ConfigError(f"{label}.edges must be a list")
        edges = []
        top = -1
        for item in raw_edges:
            if isinstance(item, str) and "-" in item:
                left, _, right = item.partition("-")
                try:
                    pair = (int(left), int(right))
                except ValueError:
                    raise ConfigError(
                        f"{label}.edges: expected 'a-b', got {item!r}"
                    ) from None
            elif isinstance(item, (list, tuple)) and len(item) == 2:
                try:
                    pair = (int(item[0]), int(item[1]))
                except (TypeError, ValueError):
                    raise ConfigError(
                        f"{label}.edges: expected a pair of ints, got {item!r}"
                    ) from None
            else:
                raise ConfigError(
                    f"{label}.edges: expected 'a-b' or [a, b], got {item!r}"
                )
            edges.append(pair)
            top = max(top, pair[0], pair[1])
        num_arms = value.get("num_arms", top + 1)
        try:
            return FeedbackGraph(int(num_arms), edges)
        except (InputError, TypeError, ValueError) as exc:
            raise ConfigError(f"{label}: {exc}") from exc
    raise ConfigError(f"{label} must be a graph spec string or a mapping")


def experiment_config_from_dict(data: dict, source: str = "<config>") -> ExperimentConfig:
    """Validate a parsed config mapping; errors name the offending field."""
    if not isinstance(data, dict):
        raise ConfigError(f"{source}: top level must be a mapping")
    instance_block = _require(data, "instance", "instance")
    means = _require(instance_block, "means", "instance.means")
    if not isinstance(means, list) or not means:
        raise ConfigError("instance.means must be a nonempty list of reals")
    graph = _graph_from_value(
        _require(instance_block, "graph", "instance.graph"), "instance.graph"
    )
    family = instance_block.get("family", "bernoulli")

    policy_block = _require(data, "policy", "policy")
    policy_name = _require(policy_block, "name", "policy.name")
    delta = policy_block.get("delta")
    if delta is not None:
        try:
            delta = float(delta)
        except (TypeError, ValueError):
            raise ConfigError(f"policy.delta must be a real, got {delta!r}") from None

    run_block = _require(data, "run", "run")
    horizon = _require(run_block, "horizon", "run.horizon")
    runs = run_block.get("runs", 1)
    seed = run_block.get("seed", 0)
    checkpoints = run_block.get("checkpoints")
    if checkpoints is not None and not isinstance(checkpoints, list):
        raise ConfigError("run.checkpoints must be a list of round indices")

    mis_block = data.get("mis", {})
    if not isinstance(mis_block, dict):
        raise ConfigError("mis must be a mapping")
    exact_limit = mis_block.get("exact_limit", 30)
    allow_approximate = bool(mis_block.get("allow_approximate", False))

    # InputError is a ValueError, so domain violations surface as config
    # errors here; capability errors pass through untouched.
    try:
        instance = BanditInstance(means, graph, str(family))
        return ExperimentConfig(
            instance=instance,
            policy=str(policy_name),
            horizon=int(horizon),
            num_runs=int(runs),
            base_seed=int(seed),
            delta=delta,
            checkpoints=tuple(checkpoints) if checkpoints is not None else None,
            mis_exact_limit=int(exact_limit),
            allow_approximate_mis=allow_approximate,
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{source}: {exc}") from exc


def load_experiment_config(path) -> ExperimentConfig:
    """Read and validate a YAML experiment config."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: invalid YAML: {exc}") from exc
    if data is None:
        raise ConfigError(f"{path}: config file is empty")
    return experiment_config_from_dict(data, source=str(path))
