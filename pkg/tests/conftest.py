import os

import pytest

ACCEPTANCE_LINES = []


def pytest_addoption(parser):
    parser.addoption("--long-run", action="store_true", default=False, help="run 10^9-scale checks")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--long-run") or os.environ.get("UBV_LONG_RUN") == "1":
        return
    skip = pytest.mark.skip(reason="long-run check; use --long-run or UBV_LONG_RUN=1")
    for item in items:
        if "long_run" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def table_1e6():
    from ubv.sieve import primes_up_to

    return primes_up_to(15_485_863)


@pytest.fixture
def acceptance():
    """Record one summary line per criterion, then assert on it."""

    def record(number: int, title: str, ok: bool, detail: str):
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {number:>2}. {title}: {detail}")
        assert ok, detail

    return record
