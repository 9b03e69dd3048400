from __future__ import annotations

import re

import pytest
from hypothesis import settings

from equiloc.geometry import build_toric, polygon, segment

settings.register_profile("equiloc", max_examples=25, deadline=None)
settings.load_profile("equiloc")

POLYTOPES = {
    "segment": segment(0, 1),
    "triangle": polygon([(0, 0), (1, 0), (0, 1)]),
    "square": polygon([(0, 0), (1, 0), (1, 1), (0, 1)]),
    "hirzebruch": polygon([(0, 0), (2, 0), (1, 1), (0, 1)]),
}


@pytest.fixture
def cp1():
    return build_toric(POLYTOPES["segment"], 1)


@pytest.fixture
def cp2():
    return build_toric(POLYTOPES["triangle"], 1)


_ACCEPTANCE = {}
_PATTERN = re.compile(r"test_criterion_(\d+)_")


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    match = _PATTERN.search(report.nodeid)
    if not match:
        return
    n = int(match.group(1))
    failed = report.failed
    if report.when == "call" or failed:
        _ACCEPTANCE[n] = _ACCEPTANCE.get(n, True) and not failed


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"{'PASS' if _ACCEPTANCE[n] else 'FAIL'} criterion {n}")
