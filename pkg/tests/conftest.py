import time
from contextlib import contextmanager

ACCEPTANCE_LINES = []


@contextmanager
def criterion(number, title, budget_s):
    """Time one acceptance criterion and record a PASS/FAIL line for the summary."""
    start = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        if ok and elapsed > budget_s:
            ok = False
            reason = f"over budget {budget_s:g}s"
        else:
            reason = ""
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title} ({elapsed:.2f}s){' ' + reason if reason else ''}"
        ACCEPTANCE_LINES.append(line)
        print(line)
    assert elapsed <= budget_s, f"criterion {number} took {elapsed:.1f}s, budget {budget_s}s"


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
