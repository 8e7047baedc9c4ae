"""Prints one PASS/FAIL line per acceptance criterion after the run."""

_names = {}
_results = {}


def pytest_collection_modifyitems(items):
    for item in items:
        name = getattr(item.function, "_criterion_name", None)
        if name:
            _names[item.nodeid] = name


def pytest_runtest_logreport(report):
    if report.nodeid in _names and report.when == "call":
        _results[report.nodeid] = report.passed


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, name in _names.items():
        if nodeid in _results:
            verdict = "PASS" if _results[nodeid] else "FAIL"
            terminalreporter.write_line(f"{verdict}: {name}")
