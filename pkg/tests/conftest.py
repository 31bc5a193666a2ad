from __future__ import annotations

import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from guandan.cards import parse_card

# make the oracle helpers importable as a plain module
sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("repo", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")


def cards(text: str):
    """``"D2 C2 HJ#1"`` -> tuple of cards."""
    return tuple(parse_card(t) for t in text.split())


@pytest.fixture
def parse():
    return cards


# --------------------------------------------------------------------------
# acceptance summary: tests marked ``criterion(n, text)`` get one line each

_RESULTS: dict[int, tuple[str, str, float]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, text): an acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, text = marker.args
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        status = "SKIP" if rep.skipped else ("PASS" if rep.passed else "FAIL")
        if number in _RESULTS and _RESULTS[number][0] == "FAIL":
            return
        if number in _RESULTS and _RESULTS[number][0] == "PASS" and status == "SKIP":
            return
        _RESULTS[number] = (status, text, rep.duration)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        status, text, seconds = _RESULTS[number]
        terminalreporter.write_line(f"criterion {number:>2}: {status}  {text}  ({seconds:.1f}s)")
