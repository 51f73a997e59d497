import sys
from pathlib import Path

import pytest

from sullivan.corpus import CORPUS_DIR
from sullivan.model import load_model, parse_model

sys.path.insert(0, str(Path(__file__).parent))


def corpus_model(name):
    return load_model(CORPUS_DIR / f"{name}.model")


@pytest.fixture
def m2():
    return parse_model("gen u1:3; gen u2:3; gen v12:5; d v12 = u1*u2")


@pytest.fixture
def corpus():
    return corpus_model


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: numbered acceptance criterion")


_criteria = {}


def pytest_runtest_logreport(report):
    name = report.nodeid.rsplit("::", 1)[-1]
    if not name.startswith("test_criterion_"):
        return
    number = int(name.split("_")[2])
    if report.when == "call" or report.outcome != "passed":
        _criteria[number] = _criteria.get(number, True) and report.outcome == "passed"


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        terminalreporter.write_line(f"criterion {number}: {'pass' if _criteria[number] else 'fail'}")
