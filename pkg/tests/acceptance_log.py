"""Per-criterion result lines for the acceptance suite, printed at the end of the run."""
from __future__ import annotations

import time
from contextlib import contextmanager

LINES: dict = {}
WITNESSES: dict = {"checked": 0, "failed": 0}


@contextmanager
def criterion(n: int, title: str, limit_s: float):
    """Record PASS/FAIL for criterion ``n``; a run over ``limit_s`` seconds fails it."""
    info: dict = {"detail": ""}
    start = time.perf_counter()
    ok = False
    try:
        yield info
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        timely = elapsed < limit_s
        status = "PASS" if ok and timely else "FAIL"
        note = info["detail"] + ("" if timely else f"; over the {limit_s:g} s limit")
        LINES[n] = f"{status} criterion {n}: {title} ({elapsed:.1f} s) {note}".rstrip()
        print(LINES[n])
    if not timely:
        raise AssertionError(f"criterion {n} took {elapsed:.1f} s, limit {limit_s:g} s")


def witness(ok: bool) -> None:
    WITNESSES["checked"] += 1
    if not ok:
        WITNESSES["failed"] += 1
