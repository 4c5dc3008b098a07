"""Kernel selection.

Imports the compiled core when it is importable and falls back to the numpy
implementations otherwise. Set ``INTERLEAVEKIT_KERNELS=numpy`` to force the
fallback (the benchmark and the parity tests use this).
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

from . import _fallback

_forced = os.environ.get("INTERLEAVEKIT_KERNELS", "").strip().lower()

if _forced == "numpy":
    _impl = _fallback
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]
    except ImportError:
        if _forced == "cython":
            raise
        _impl = _fallback

BACKEND: str = _impl.BACKEND
rref = _impl.rref


def backends() -> dict:
    """All importable kernel modules keyed by backend name."""
    out = {"numpy": _fallback}
    try:
        from . import _kernels

        out["cython"] = _kernels
    except ImportError:
        pass
    return out


def _first_hit(fn, total: int, threads: int, *args) -> int:
    # ranges are scanned in waves so the lowest hit index wins for any thread count
    if threads <= 1 or total < 4096:
        return fn(*args, 0, total)
    chunk = max(1024, total // (threads * 8))
    with ThreadPoolExecutor(max_workers=threads) as pool:
        lo = 0
        while lo < total:
            bounds = []
            for _ in range(threads):
                if lo >= total:
                    break
                bounds.append((lo, min(total, lo + chunk)))
                lo += chunk
            hits = list(pool.map(lambda b: fn(*args, b[0], b[1]), bounds))
            found = [h for h in hits if h >= 0]
            if found:
                return min(found)
    return -1


def first_consistent(stack, b, p: int, total: int, threads: int = 1) -> int:
    """Lowest candidate index below ``total`` with a consistent system, or -1."""
    return _first_hit(_impl.first_consistent, total, threads, stack, b, p)


def ci_first_solution(n: int, free_pos, q_pos, p: int, total: int, threads: int = 1) -> int:
    """Lowest candidate index below ``total`` that solves the CI instance, or -1."""
    return _first_hit(_impl.ci_first_solution, total, threads, n, free_pos, q_pos, p)
