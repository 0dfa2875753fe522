"""Shared pytest wiring: one PASS/FAIL banner line per acceptance criterion.

pytest captures test output at the file-descriptor level, so the banner is
emitted from the terminal-summary hook, which runs after capture is torn
down.  Every ``test_cNN_*`` test in test_acceptance.py gets exactly one
line, whether it passed, failed, or crashed during setup.
"""

import re

_ACCEPTANCE = re.compile(r"test_acceptance\.py::test_c(\d\d)")

_LABELS = {
    1: "gap family + mutation test",
    2: "symmetric plane + overring chain",
    3: "punctured plane closures",
    4: "quadratic tail construction",
    5: "pullback maximality biconditional",
    6: "series ring axioms + inversion",
    7: "Gauss extension vs rescaling oracle",
    8: "family-vs-Nagata separating witnesses",
    9: "semilocal unit combinations",
    10: "byte-identical repro reports",
}

_results = {}


def pytest_runtest_logreport(report):
    m = _ACCEPTANCE.search(report.nodeid)
    if not m:
        return
    num = int(m.group(1))
    if report.when == "call":
        _results[num] = report.outcome.upper().replace("PASSED", "PASS").replace(
            "FAILED", "FAIL"
        )
    elif report.failed:
        _results[num] = "FAIL"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_results):
        terminalreporter.write_line(
            "ACCEPTANCE %02d  %-40s %s"
            % (num, _LABELS.get(num, "unknown criterion"), _results[num])
        )
