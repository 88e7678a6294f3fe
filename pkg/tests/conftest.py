import pytest

_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, title): acceptance criterion reported in the summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    num, title = mark.args
    failed = rep.failed
    if rep.when == "call" or failed:
        prev = _RESULTS.get(num)
        detail = "; ".join(str(v) for k, v in item.user_properties if k == "detail")
        ok = not failed and (prev is None or prev[1])
        _RESULTS[num] = (title, ok, detail)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for num in sorted(_RESULTS):
        title, ok, detail = _RESULTS[num]
        line = f"[{'PASS' if ok else 'FAIL'}] {num:>2}. {title}"
        if detail:
            line += f"  ({detail})"
        tr.write_line(line)
    passed = sum(ok for _, ok, _ in _RESULTS.values())
    tr.write_line(f"{passed}/{len(_RESULTS)} acceptance criteria passed")
