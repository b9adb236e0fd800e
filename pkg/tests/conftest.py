from __future__ import annotations

import json
import sys
from pathlib import Path

import pytest

from qpath.exchange import DoubleFlow
from qpath.minors import Flow
from qpath.pathkit import DPath
from qpath.segraph import from_json

FIXTURES = Path(__file__).parent / "fixtures"


def fixture_path(name: str) -> Path:
    return FIXTURES / name


@pytest.fixture
def minimal_graph():
    return from_json(json.loads(fixture_path("minimal.json").read_text()))


@pytest.fixture
def grid34():
    return from_json(json.loads(fixture_path("grid3x4.json").read_text()))


def load_running_example():
    """Graph and double flow of the running example (I={1,2,3}, J={1,3,4}, I'={2,4}, J'={2,3})."""
    data = json.loads(fixture_path("running_example.json").read_text())

    def flow(d):
        return Flow(tuple(d["I"]), tuple(d["J"]), tuple(DPath(tuple(p)) for p in d["paths"]))

    return from_json(data["graph"]), DoubleFlow(flow(data["phi"]), flow(data["phi2"]))


@pytest.fixture
def running_example():
    return load_running_example()


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
