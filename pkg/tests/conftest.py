import _gate


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion, after the normal output."""
    if not _gate.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, ok, description in _gate.RESULTS:
        verdict = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"criterion {number} [{verdict}]: {description}")
