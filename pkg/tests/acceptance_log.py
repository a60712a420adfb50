"""Collects one pass/fail line per acceptance criterion."""

from __future__ import annotations

import time

RESULTS: dict[int, tuple[bool, float, str]] = {}
TIME_LIMIT = 10.0


def record(number: int, title: str, fn) -> None:
    start = time.perf_counter()
    ok, note = False, ""
    try:
        fn()
        ok = True
    except AssertionError as exc:
        note = str(exc).splitlines()[0] if str(exc) else "assertion failed"
        raise
    finally:
        elapsed = time.perf_counter() - start
        if ok and elapsed >= TIME_LIMIT:
            ok, note = False, f"took {elapsed:.1f}s (limit {TIME_LIMIT:.0f}s)"
        RESULTS[number] = (ok, elapsed, f"{title}{': ' + note if note else ''}")
        print(f"criterion {number}: {'PASS' if ok else 'FAIL'} ({elapsed:.2f}s) {RESULTS[number][2]}")
    assert elapsed < TIME_LIMIT, f"criterion {number} took {elapsed:.1f}s"


def lines() -> list[str]:
    return [f"criterion {n}: {'PASS' if ok else 'FAIL'} ({t:.2f}s) {title}"
            for n, (ok, t, title) in sorted(RESULTS.items())]
