"""Print one PASS/FAIL line per acceptance criterion at the end of a run."""

_ACCEPTANCE = []


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_acceptance" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        props = dict(report.user_properties)
        label = props.get("criterion", report.nodeid.split("[", 1)[-1].rstrip("]"))
        detail = props.get("detail", "")
        _ACCEPTANCE.append((report.passed, label, detail, report.nodeid))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for ok, label, detail, nodeid in _ACCEPTANCE:
        if not detail:
            detail = nodeid.split("[", 1)[-1].rstrip("]")
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} {label} -- {detail}")
