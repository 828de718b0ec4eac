import json
import math
import os
from pathlib import Path

import pytest

import trapkit

SCENARIOS = Path(os.environ.get("TRAPKIT_SCENARIO_DIR", Path(__file__).resolve().parents[2] / "scenarios"))


def test_version():
    assert trapkit.__version__.count(".") == 2


def test_every_operation_runs_its_smoke_arguments():
    ops = trapkit.list_ops()
    assert {"ekeland_descend", "extremal_witness", "eps_subdiff_interval_1d"} <= {op["name"] for op in ops}
    for op in ops:
        assert isinstance(trapkit.smoke(op["name"]), dict), op["name"]


def test_field():
    f = trapkit.Field("x1^2 + x2", 2, grad=["2*x1", "1"])
    assert f([3.0, 1.0]) == 10.0
    assert f.gradient([1.0, 0.0]) == [2.0, 1.0]
    assert f.fd_gradient([1.0, 0.0]) == pytest.approx([2.0, 1.0], abs=1e-6)
    g = trapkit.Field("log(x1)", 1, domain="x1 >= 0")
    assert math.isinf(g([-1.0]))
    with pytest.raises(trapkit.ParseError):
        trapkit.Field("x1 +", 1)


def test_call_abs_interval():
    ctx = {"functions": {"f": {"dim": 1, "expr": "abs(x1)"}}}
    r = trapkit.call("eps_subdiff_interval_1d", ctx, phi="f", xbar=[0.0], eps=0.5)
    [[lo, hi]] = r["intervals"]
    assert lo == pytest.approx(-1.5, abs=0.02)
    assert hi == pytest.approx(1.5, abs=0.02)


def test_errors_map_to_python():
    with pytest.raises(trapkit.ScenarioError):
        trapkit.call("frobnicate")
    ctx = {"functions": {"inv": {"dim": 1, "expr": "1/x1"}}}
    with pytest.raises(trapkit.DomainError):
        trapkit.call("eps_subgrad_member", ctx, phi="inv", xbar=[0.0], xstar=[0.0])
    assert issubclass(trapkit.HypothesisError, trapkit.ContractError)


def test_example_scenario():
    report, ok = trapkit.run_scenario(SCENARIOS / "gain_loss.json")
    assert ok
    verdicts = [t["result"]["holds"] for t in report["tasks"] if "holds" in t["result"]]
    assert verdicts == [True] * 4


def test_reports_are_deterministic():
    def strip(r):
        for t in r["tasks"]:
            t.pop("wall_time_ms")
        return json.dumps(r, sort_keys=True)

    a, _ = trapkit.run_scenario(SCENARIOS / "halfplane_extremal.json")
    b, _ = trapkit.run_scenario(SCENARIOS / "halfplane_extremal.json")
    assert strip(a) == strip(b)


def test_empty_scenario_from_dict():
    report, ok = trapkit.run_scenario({"schema": "trapkit.scenario/1", "name": "d", "tasks": []})
    assert ok and report["tasks"] == []
