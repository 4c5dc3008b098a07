"""Pure numpy versions of the compiled kernels.

Same signatures and results as ``_kernels.pyx``. Candidate loops are
vectorized over batches instead of compiled; they are correct but a few
times slower, see ``benchmarks/bench_kernels.py``.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

BACKEND = "numpy"

_BATCH_ELEMENTS = 1 << 21


@lru_cache(maxsize=None)
def _inverse_table(p: int) -> np.ndarray:
    table = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        table[a] = pow(a, p - 2, p)
    return table


def rref(a, p: int):
    """Reduced row echelon form of ``a`` mod ``p``; returns ``(reduced, pivots)``."""
    w = np.array(a, dtype=np.int64, copy=True) % p
    rows, cols = w.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(w[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            w[[r, piv]] = w[[piv, r]]
        w[r] = w[r] * pow(int(w[r, c]), p - 2, p) % p
        f = w[:, c].copy()
        f[r] = 0
        w = (w - np.outer(f, w[r])) % p
        pivots.append(c)
        r += 1
    return w, np.array(pivots, dtype=np.int64)


def _digit_matrix(lo: int, hi: int, p: int, s: int) -> np.ndarray:
    idx = np.arange(lo, hi, dtype=np.int64)
    out = np.empty((idx.size, s), dtype=np.int64)
    for i in range(s - 1, -1, -1):
        out[:, i] = idx % p
        idx = idx // p
    return out


def _eliminate(w: np.ndarray, p: int, ncols: int) -> np.ndarray:
    """Batched Gauss-Jordan on the first ``ncols`` columns; returns pivot counts."""
    inv = _inverse_table(p) if p <= 1 << 16 else None
    batch, rows, _ = w.shape
    r = np.zeros(batch, dtype=np.int64)
    row_ids = np.arange(rows)[None, :]
    for c in range(ncols):
        mask = (w[:, :, c] != 0) & (row_ids >= r[:, None])
        has = mask.any(axis=1)
        sel = np.nonzero(has)[0]
        if sel.size == 0:
            continue
        piv = mask[sel].argmax(axis=1)
        rr = r[sel]
        top = w[sel, rr].copy()
        w[sel, rr] = w[sel, piv]
        w[sel, piv] = top
        lead = w[sel, rr, c]
        if inv is not None:
            scale = inv[lead]
        else:
            scale = np.array([pow(int(v), p - 2, p) for v in lead], dtype=np.int64)
        w[sel, rr] = w[sel, rr] * scale[:, None] % p
        f = w[sel, :, c].copy()
        f[np.arange(sel.size), rr] = 0
        w[sel] = (w[sel] - f[:, :, None] * w[sel, rr][:, None, :]) % p
        r[sel] += 1
    return r


def first_consistent(stack, b, p: int, start: int, stop: int) -> int:
    """First candidate index in ``[start, stop)`` whose system is solvable, else -1."""
    st = np.asarray(stack, dtype=np.int64) % p
    rhs = np.asarray(b, dtype=np.int64) % p
    s, rows, cols = st.shape
    if rows == 0:
        return start if start < stop else -1
    per = rows * (cols + 1)
    step = max(1, min(8192, _BATCH_ELEMENTS // max(per, 1)))
    flat = st.reshape(s, rows * cols)
    lo = start
    while lo < stop:
        hi = min(stop, lo + step)
        x = _digit_matrix(lo, hi, p, s)
        a = (x @ flat) % p if s else np.zeros((hi - lo, rows * cols), dtype=np.int64)
        w = np.empty((hi - lo, rows, cols + 1), dtype=np.int64)
        w[:, :, :cols] = a.reshape(hi - lo, rows, cols)
        w[:, :, cols] = rhs
        _eliminate(w, p, cols)
        zero_coef = ~(w[:, :, :cols] != 0).any(axis=2)
        bad = (zero_coef & (w[:, :, cols] != 0)).any(axis=1)
        ok = np.nonzero(~bad)[0]
        if ok.size:
            return int(lo + ok[0])
        lo = hi
    return -1


def ci_first_solution(n: int, free_pos, q_pos, p: int, start: int, stop: int) -> int:
    """First candidate index in ``[start, stop)`` solving a CI instance, else -1."""
    fp = np.asarray(free_pos, dtype=np.int64)
    qp = np.asarray(q_pos, dtype=np.int64)
    s = fp.size
    step = max(1, min(16384, _BATCH_ELEMENTS // (2 * n * n + 1)))
    eye = np.eye(n, dtype=np.int64)
    lo = start
    while lo < stop:
        hi = min(stop, lo + step)
        count = hi - lo
        mats = np.zeros((count, n * n), dtype=np.int64)
        if s:
            mats[:, fp] = _digit_matrix(lo, hi, p, s)
        w = np.empty((count, n, 2 * n), dtype=np.int64)
        w[:, :, :n] = mats.reshape(count, n, n)
        w[:, :, n:] = eye
        ranks = _eliminate(w, p, n)
        ok = ranks == n
        if qp.size:
            inv = w[:, :, n:].reshape(count, n * n)
            ok &= ~(inv[:, qp] != 0).any(axis=1)
        hits = np.nonzero(ok)[0]
        if hits.size:
            return int(lo + hits[0])
        lo = hi
    return -1
