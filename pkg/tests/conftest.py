from __future__ import annotations

import pytest

# criterion number -> (passed, short description); filled by test_acceptance
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


class _Recorder:
    def __init__(self, number: int, title: str):
        self.number = number
        self.title = title
        self.details: list[str] = []

    def note(self, text: str) -> None:
        self.details.append(text)


@pytest.fixture
def criterion(request):
    """Record the outcome of an acceptance criterion for the summary table."""
    marker = request.node.get_closest_marker("criterion")
    number, title = marker.args
    rec = _Recorder(number, title)
    yield rec
    rep = getattr(request.node, "rep_call", None)
    passed = rep is not None and rep.passed
    detail = "; ".join(rec.details)
    ACCEPTANCE[number] = (passed, f"{title}" + (f" ({detail})" if detail else ""))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        passed, text = ACCEPTANCE[number]
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  criterion {number}: {text}")
