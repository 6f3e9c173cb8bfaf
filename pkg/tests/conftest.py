import pytest

_results: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or (rep.when != "call" and rep.passed):
        return
    num, title = mark.args
    entry = _results.setdefault(num, {"title": title, "ok": True, "why": ""})
    if rep.failed:
        entry["ok"] = False
        if not entry["why"]:
            entry["why"] = str(rep.longrepr.reprcrash.message if hasattr(rep.longrepr, "reprcrash")
                               else rep.longrepr).splitlines()[0][:160]


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for num in sorted(_results):
        e = _results[num]
        line = f"criterion {num:2d}: {'PASS' if e['ok'] else 'FAIL'}  {e['title']}"
        if not e["ok"]:
            line += f"  [{e['why']}]"
        tr.write_line(line)
