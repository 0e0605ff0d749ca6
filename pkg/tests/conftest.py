import re

# acceptance criteria report one line each; collected here and echoed after the run
ACCEPTANCE_LINES = []


def pytest_runtest_logreport(report):
    # a criterion that errors before reporting still gets its FAIL line
    m = re.search(r"test_ac(\d+)_", report.nodeid)
    if m and report.when == "call" and report.failed:
        tag = f"AC{m.group(1)} "
        if not any(line.split("] ", 1)[1].startswith(tag) for line in ACCEPTANCE_LINES):
            ACCEPTANCE_LINES.append(f"[FAIL] {tag}raised before reporting: {report.longrepr.reprcrash.message}")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("AC")[1].split()[0])):
            terminalreporter.write_line(line)
