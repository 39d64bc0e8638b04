import time

CRITERIA: list[str] = []
_START = time.perf_counter()


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in CRITERIA:
            terminalreporter.write_line(line)
    terminalreporter.write_line(f"suite wall time: {time.perf_counter() - _START:.1f} s")
