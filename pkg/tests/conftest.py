import numpy as np
import pytest

from compmeasure import VariableTable, make_measure

_ACCEPTANCE = {}


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def binary3():
    return VariableTable({1: 2, 2: 2, 3: 2})


@pytest.fixture
def u2(binary3):
    return make_measure((1, 2), [0.25] * 4, binary3)


@pytest.fixture
def qd(binary3):
    return make_measure((2, 3), [0.3, 0.2, 0.1, 0.4], binary3)


@pytest.fixture
def chain(binary3):
    """P1(X1), P2(X1, X2), P3(X2, X3)."""
    return [
        make_measure((1,), [0.3, 0.7], binary3),
        make_measure((1, 2), [0.1, 0.2, 0.3, 0.4], binary3),
        make_measure((2, 3), [0.2, 0.2, 0.1, 0.5], binary3),
    ]


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.failed):
        number, title = marker.args
        _ACCEPTANCE.setdefault(number, [title, True])
        if not report.passed:
            _ACCEPTANCE[number][1] = False


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, ok = _ACCEPTANCE[number]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {number:>2}. {title}")
