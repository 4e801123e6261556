import pytest

# criterion number -> list of (test id, passed)
_CRITERIA: dict[int, list[tuple[str, bool]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion a test belongs to")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    n, title = marker.args
    item.config._criterion_titles = getattr(item.config, "_criterion_titles", {})
    item.config._criterion_titles[n] = title
    _CRITERIA.setdefault(n, []).append((item.name, call.excinfo is None))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _CRITERIA:
        return
    titles = getattr(config, "_criterion_titles", {})
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        results = _CRITERIA[n]
        ok = all(p for _, p in results)
        failed = [name for name, p in results if not p]
        line = f"{'PASS' if ok else 'FAIL'} criterion {n:>2}: {titles.get(n, '')}"
        if failed:
            line += f"  (failed: {', '.join(failed)})"
        terminalreporter.write_line(line)
