"""Prints one PASS/FAIL line per acceptance criterion after the run."""

_results: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(n, title): acceptance criterion n")


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("acceptance")
    if mark is None:
        return
    n, title = mark.args
    if call.when == "call" or (call.when == "setup" and call.excinfo is not None):
        _results[n] = (title, "FAIL" if call.excinfo is not None else "PASS")


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_results):
        title, status = _results[n]
        terminalreporter.write_line(f"criterion {n}: {status}  {title}")
