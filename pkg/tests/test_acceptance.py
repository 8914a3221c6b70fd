"""Acceptance gate: every criterion must PASS at default config.

Each test prints a single pass/fail line so a full run reads as a table;
failures carry the offending sub-checks in the assertion message.
"""

import pytest

from equimap import acceptance


@pytest.mark.parametrize("index", sorted(acceptance.CRITERIA))
def test_criterion(index, capsys):
    report = acceptance.run_criterion(index)
    line = "criterion %d [%s] %6.2fs  %s" % (
        index, report["status"], report["elapsed"], report["name"]
    )
    with capsys.disabled():
        print(line)
    bad = [c for c in report["checks"] if c["status"] != "PASS"]
    assert report["status"] == "PASS", bad


def test_suite_aggregation(monkeypatch):
    monkeypatch.setitem(
        acceptance.CRITERIA, 90, ("always skip", lambda cfg: [("a", "SKIP", "")])
    )
    monkeypatch.setitem(
        acceptance.CRITERIA, 91, ("always fail", lambda cfg: [("b", "FAIL", "")])
    )
    monkeypatch.setitem(acceptance.BUDGETS, 90, 10.0)
    monkeypatch.setitem(acceptance.BUDGETS, 91, 10.0)
    assert acceptance.run_criterion(90)["status"] == "SKIP"
    assert acceptance.run_criterion(91)["status"] == "FAIL"


def test_budget_scale_parsing(monkeypatch):
    monkeypatch.setenv("EQUIMAP_BUDGET_SCALE", "2.5")
    assert acceptance.budget_scale() == 2.5
    monkeypatch.setenv("EQUIMAP_BUDGET_SCALE", "oops")
    assert acceptance.budget_scale() == 1.0


def test_budget_overrun_is_failure(monkeypatch):
    monkeypatch.setitem(
        acceptance.CRITERIA, 92, ("slow", lambda cfg: [("a", "PASS", "")])
    )
    monkeypatch.setitem(acceptance.BUDGETS, 92, 0.0)
    report = acceptance.run_criterion(92)
    assert report["status"] == "FAIL"
    assert any(c["label"] == "wall clock" for c in report["checks"])
