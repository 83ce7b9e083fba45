import re

_ACCEPT = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid or report.when != "call":
        return
    m = re.search(r"c(\d\d)", report.nodeid)
    if not m:
        return
    num = int(m.group(1))
    ok = report.passed and not hasattr(report, "wasxfail")
    detail = dict(report.user_properties).get("detail", "")
    if not ok:
        detail = getattr(report, "wasxfail", "") or detail or "failed"
    prev = _ACCEPT.get(num, (True, []))
    _ACCEPT[num] = (prev[0] and ok, prev[1] + [detail])


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPT:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_ACCEPT):
        ok, details = _ACCEPT[num]
        terminalreporter.write_line(f"criterion {num:2d} {'PASS' if ok else 'FAIL'}  {'; '.join(details)}")
