import pytest

_results = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(cid, text): an acceptance criterion, reported in the summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("acceptance")
    if m is None:
        return
    cid, text = m.args
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        _results[item.nodeid] = (cid, text, rep.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for cid, text, outcome in sorted(_results.values(), key=lambda r: (int("".join(c for c in r[0] if c.isdigit())), r[0])):
        tr.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  [{cid}] {text}")
