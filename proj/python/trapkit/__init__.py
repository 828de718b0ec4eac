"""Stationary traps, subgradients and variational principles on a grid."""

import json
from pathlib import Path

from ._trapkit import (
    ContractError,
    DimensionError,
    DomainError,
    Field,
    HypothesisError,
    ParseError,
    ScenarioError,
    TrapkitError,
    __version__,
)
from . import _trapkit

__all__ = [
    "ContractError",
    "DimensionError",
    "DomainError",
    "Field",
    "HypothesisError",
    "ParseError",
    "ScenarioError",
    "TrapkitError",
    "__version__",
    "call",
    "list_ops",
    "run_scenario",
    "smoke",
]


def list_ops():
    return json.loads(_trapkit.catalog_json())


def call(op, context=None, **args):
    """Run one operation. `context` holds scenario-style functions, sets and defaults."""
    ctx = json.dumps(context) if context else ""
    return json.loads(_trapkit.call(op, json.dumps(args), ctx))


def smoke(op):
    return json.loads(_trapkit.smoke(op))


def run_scenario(scenario):
    """Run a scenario given as a path or a dict. Returns (report, all_executed)."""
    if isinstance(scenario, dict):
        text = json.dumps(scenario)
    else:
        text = Path(scenario).read_text()
    report, ok = _trapkit.run_scenario_text(text)
    return json.loads(report), ok
