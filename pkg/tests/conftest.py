from __future__ import annotations

import pytest

from qpluecker.fixtures import load_fixture


def example(name):
    qf = load_fixture(name)
    return qf.representation(), dict(qf.dimvector)


@pytest.fixture
def del_pezzo():
    return example("del_pezzo")


@pytest.fixture
def jumping():
    return example("jumping_euler")


@pytest.fixture
def elliptic():
    return example("elliptic")


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
