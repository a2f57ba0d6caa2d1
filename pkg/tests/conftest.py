import time
from contextlib import contextmanager

ACCEPTANCE: dict[int, tuple[bool, float, float, str]] = {}


@contextmanager
def criterion(number: int, limit: float, title: str):
    """Time a criterion body and record its outcome for the summary."""
    start = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        within = elapsed < limit
        ACCEPTANCE[number] = (ok and within, elapsed, limit, title)
    assert within, f"criterion {number} took {elapsed:.1f}s, limit {limit:.0f}s"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, elapsed, limit, title = ACCEPTANCE[n]
        state = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {state}  {title}  ({elapsed:.1f}s, limit {limit:.0f}s)")
