"""Voronoi-partitioned linear policy distillation."""

import json

from ._core import Bundle, Partition, run_cli, spread_stats

__all__ = [
    "Bundle",
    "Partition",
    "distill",
    "evaluate",
    "evaluate_teacher",
    "run_cli",
    "spread_stats",
]


def distill(config=None, **kwargs):
    """Runs a distillation described by a flat config dict.

    Returns (bundle, events) where events is the per-epoch log as a list
    of dicts.
    """
    from . import _core

    cfg = dict(config or {})
    cfg.update(kwargs)
    bundle_json, events_jsonl = _core.distill_json(json.dumps(cfg))
    events = [json.loads(line) for line in events_jsonl.splitlines()]
    return Bundle.loads(bundle_json), events


def evaluate(bundle, episodes=100, seed=0):
    """Evaluates a Bundle over seeded episodes; returns the report dict."""
    from . import _core

    return json.loads(_core.evaluate_bundle_json(bundle.dumps(), episodes, seed))


def evaluate_teacher(environment, teacher, episodes=100, seed=0):
    """Evaluates a teacher source (oracle:<tag> or file:<path>) directly."""
    from . import _core

    return json.loads(
        _core.evaluate_teacher_json(environment, teacher, episodes, seed)
    )
