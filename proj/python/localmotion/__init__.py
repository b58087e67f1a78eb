"""Python access to the localmotion simulator.

Configurations are the same ``key = value`` text the CLI reads; keyword
arguments override individual keys.
"""

import csv
import io
import json
from pathlib import Path

from . import _core
from ._core import (
    ModelViolation,
    adversary_push_count,
    completion_potential_bound,
    evolver_potential_bound,
    kl_exact_1d,
    kl_upper_bound,
    object_potential,
)

__all__ = [
    "ModelViolation",
    "adversary_push_count",
    "completion_potential_bound",
    "evolver_potential_bound",
    "kl_exact_1d",
    "kl_upper_bound",
    "load_config",
    "lower_bound",
    "object_potential",
    "run",
    "verify",
]


def _text(config):
    if isinstance(config, Path):
        return config.read_text()
    return config


def _overrides(kwargs):
    return {k: str(v).lower() if isinstance(v, bool) else str(v) for k, v in kwargs.items()}


def load_config(config="", **overrides):
    """Canonical config text after applying overrides and validation."""
    return _core.canonical_config(_text(config), _overrides(overrides))


def run(config="", **overrides):
    """Run to max_time. Returns (summary dict, list of metrics row dicts)."""
    summary, metrics = _core.run(_text(config), _overrides(overrides))
    rows = [
        {k: (float(v) if v != "" else None) for k, v in row.items()}
        for row in csv.DictReader(io.StringIO(metrics))
    ]
    return json.loads(summary), rows


def verify(config="", **overrides):
    return json.loads(_core.verify(_text(config), _overrides(overrides)))


def lower_bound(config="", **overrides):
    return json.loads(_core.lower_bound(_text(config), _overrides(overrides)))
