from pathlib import Path

import pytest

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "fanoloc" / "fixtures"

_CRITERIA = pytest.StashKey[dict]()


@pytest.fixture
def fixture_path():
    def get(name: str) -> Path:
        return FIXTURES / f"{name}.json"

    return get


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): numbered acceptance criterion")
    config.stash[_CRITERIA] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or not (rep.when == "call" or rep.failed):
        return
    number, title = marker.args
    results = item.config.stash[_CRITERIA]
    _, ok = results.get(number, (title, True))
    results[number] = (title, ok and rep.passed)


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash.get(_CRITERIA, {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        title, ok = results[number]
        terminalreporter.write_line(f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {title}")
