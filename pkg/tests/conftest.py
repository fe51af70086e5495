from collections import defaultdict

import pytest

_criteria = defaultdict(list)
_titles = {}


def pytest_addoption(parser):
    parser.addoption("--slow", action="store_true", default=False, help="run long checks marked slow")


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion this test belongs to")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--slow"):
        return
    skip = pytest.mark.skip(reason="needs --slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    _titles[number] = title
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        _criteria[number].append((item.name, rep.outcome, rep.duration))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_criteria):
        parts = _criteria[number]
        outcomes = {o for _, o, _ in parts}
        status = "FAIL" if "failed" in outcomes else "PASS" if "passed" in outcomes else "SKIP"
        seconds = sum(d for _, o, d in parts if o != "skipped")
        skipped = [name for name, o, _ in parts if o == "skipped"]
        note = f" (skipped: {', '.join(skipped)}; run with --slow)" if skipped else ""
        tr.write_line(f"criterion {number:2d} {status}  {_titles[number]}  [{seconds:.1f} s]{note}")
