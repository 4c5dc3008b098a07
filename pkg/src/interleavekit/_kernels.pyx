# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops over GF(p).

Every function here has a numpy twin in ``_fallback.py`` with the same
signature and the same results; ``kernels.py`` picks one at import.
Matrices are int64 arrays holding canonical residues.
"""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, uint64_t
from libc.stdlib cimport malloc, free
from libc.string cimport memcpy, memset

cnp.import_array()

BACKEND = "cython"


cdef extern from *:
    """
    static inline int ik_ctz64(unsigned long long x) { return __builtin_ctzll(x); }
    """
    int ik_ctz64(unsigned long long x) nogil


cdef inline int64_t _modinv(int64_t a, int64_t p) noexcept nogil:
    cdef int64_t t = 0, newt = 1, r = p, newr = a % p, q, tmp
    while newr != 0:
        q = r // newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += p
    return t


def rref(a, int64_t p):
    """Reduced row echelon form of ``a`` mod ``p``.

    Returns ``(reduced, pivots)`` where ``pivots[i]`` is the pivot column of
    row ``i``; rows past ``len(pivots)`` are zero.
    """
    cdef cnp.ndarray[int64_t, ndim=2] w = np.array(a, dtype=np.int64, order="C", copy=True) % p
    cdef Py_ssize_t rows = w.shape[0], cols = w.shape[1]
    cdef int64_t[:, ::1] m = w
    cdef Py_ssize_t r = 0, c, i, j, piv
    cdef int64_t inv, f, tmp
    cdef cnp.ndarray[int64_t, ndim=1] piv_arr = np.zeros(min(rows, cols), dtype=np.int64)
    cdef int64_t[::1] pivots = piv_arr
    with nogil:
        for c in range(cols):
            if r == rows:
                break
            piv = -1
            for i in range(r, rows):
                if m[i, c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(c, cols):
                    tmp = m[r, j]
                    m[r, j] = m[piv, j]
                    m[piv, j] = tmp
            inv = _modinv(m[r, c], p)
            if inv != 1:
                for j in range(c, cols):
                    m[r, j] = (m[r, j] * inv) % p
            for i in range(rows):
                if i != r and m[i, c] != 0:
                    f = p - m[i, c]
                    for j in range(c, cols):
                        m[i, j] = (m[i, j] + f * m[r, j]) % p
            pivots[r] = c
            r += 1
    return w, piv_arr[:r].copy()


cdef bint _consistent(int64_t* w, Py_ssize_t rows, Py_ssize_t width, int64_t p) noexcept nogil:
    # w is rows x width, last column is the right-hand side
    cdef Py_ssize_t r = 0, c, i, j, piv
    cdef int64_t inv, f, tmp
    for c in range(width - 1):
        if r == rows:
            return True
        piv = -1
        for i in range(r, rows):
            if w[i * width + c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(c, width):
                tmp = w[r * width + j]
                w[r * width + j] = w[piv * width + j]
                w[piv * width + j] = tmp
        inv = _modinv(w[r * width + c], p)
        for j in range(c, width):
            w[r * width + j] = (w[r * width + j] * inv) % p
        for i in range(r + 1, rows):
            f = w[i * width + c]
            if f != 0:
                f = p - f
                for j in range(c, width):
                    w[i * width + j] = (w[i * width + j] + f * w[r * width + j]) % p
        r += 1
    for i in range(r, rows):
        if w[i * width + width - 1] != 0:
            return False
    return True


cdef inline bint _consistent_bits(const uint64_t* rows, Py_ssize_t nrows, uint64_t colmask,
                                  uint64_t* basis) noexcept nogil:
    cdef Py_ssize_t i
    cdef uint64_t v, m
    cdef int c
    memset(basis, 0, 64 * sizeof(uint64_t))
    for i in range(nrows):
        v = rows[i]
        while True:
            m = v & colmask
            if m == 0:
                if v != 0:
                    return False
                break
            c = ik_ctz64(m)
            if basis[c] == 0:
                basis[c] = v
                break
            v ^= basis[c]
    return True


cdef void _digits(int64_t idx, int64_t p, Py_ssize_t s, int64_t* d) noexcept nogil:
    cdef Py_ssize_t i
    for i in range(s - 1, -1, -1):
        d[i] = idx % p
        idx //= p


def first_consistent(stack, b, int64_t p, int64_t start, int64_t stop):
    """First candidate index in ``[start, stop)`` whose system is solvable.

    Candidate ``idx`` has base-``p`` digits ``x`` (first coordinate most
    significant); its system is ``(sum_i x_i * stack[i]) @ y = b``.
    Returns -1 when no candidate in the range is consistent.
    """
    cdef cnp.ndarray[int64_t, ndim=3] st = np.ascontiguousarray(stack, dtype=np.int64) % p
    cdef cnp.ndarray[int64_t, ndim=1] rhs = np.ascontiguousarray(b, dtype=np.int64) % p
    cdef Py_ssize_t s = st.shape[0], rows = st.shape[1], cols = st.shape[2]
    if rows == 0:
        return start if start < stop else -1
    if p == 2 and cols < 64:
        return _first_consistent_gf2(st, rhs, start, stop)
    cdef int64_t[:, :, ::1] A = st
    cdef int64_t[::1] bv = rhs
    cdef Py_ssize_t width = cols + 1, i, r, c
    cdef int64_t idx, found = -1
    cdef int64_t* cur = <int64_t*> malloc(rows * width * sizeof(int64_t))
    cdef int64_t* work = <int64_t*> malloc(rows * width * sizeof(int64_t))
    cdef int64_t* d = <int64_t*> malloc((s + 1) * sizeof(int64_t))
    try:
        with nogil:
            _digits(start, p, s, d)
            for r in range(rows):
                for c in range(cols):
                    cur[r * width + c] = 0
                cur[r * width + cols] = bv[r]
            for i in range(s):
                if d[i] != 0:
                    for r in range(rows):
                        for c in range(cols):
                            cur[r * width + c] = (cur[r * width + c] + d[i] * A[i, r, c]) % p
            idx = start
            while idx < stop:
                memcpy(work, cur, rows * width * sizeof(int64_t))
                if _consistent(work, rows, width, p):
                    found = idx
                    break
                idx += 1
                i = s - 1
                while i >= 0:
                    for r in range(rows):
                        for c in range(cols):
                            cur[r * width + c] = (cur[r * width + c] + A[i, r, c]) % p
                    d[i] += 1
                    if d[i] < p:
                        break
                    d[i] = 0
                    i -= 1
    finally:
        free(cur)
        free(work)
        free(d)
    return found


cdef int64_t _first_consistent_gf2(cnp.ndarray[int64_t, ndim=3] st, cnp.ndarray[int64_t, ndim=1] rhs,
                                   int64_t start, int64_t stop):
    cdef Py_ssize_t s = st.shape[0], rows = st.shape[1], cols = st.shape[2]
    cdef Py_ssize_t i, r, c
    cdef cnp.ndarray[cnp.uint64_t, ndim=2] packed = np.zeros((s, rows), dtype=np.uint64)
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] cur_arr = np.zeros(rows, dtype=np.uint64)
    cdef uint64_t[:, ::1] P = packed
    cdef uint64_t[::1] cur = cur_arr
    cdef int64_t[:, :, ::1] A = st
    cdef uint64_t colmask = (<uint64_t> 1 << cols) - 1
    cdef uint64_t basis[64]
    cdef int64_t d[64]
    cdef int64_t idx, found = -1
    if s > 63:
        raise ValueError("too many enumeration coordinates for a 64-bit index")
    for i in range(s):
        for r in range(rows):
            for c in range(cols):
                if A[i, r, c]:
                    P[i, r] |= (<uint64_t> 1) << c
    for r in range(rows):
        if rhs[r]:
            cur[r] = (<uint64_t> 1) << cols
    with nogil:
        _digits(start, 2, s, d)
        for i in range(s):
            if d[i]:
                for r in range(rows):
                    cur[r] ^= P[i, r]
        idx = start
        while idx < stop:
            if _consistent_bits(&cur[0], rows, colmask, basis):
                found = idx
                break
            idx += 1
            i = s - 1
            while i >= 0:
                for r in range(rows):
                    cur[r] ^= P[i, r]
                if d[i] == 0:
                    d[i] = 1
                    break
                d[i] = 0
                i -= 1
    return found


cdef bint _inverse_ok(int64_t* w, Py_ssize_t n, int64_t p, const int64_t* qpos, Py_ssize_t nq) noexcept nogil:
    # w is n x 2n holding [M | I]; Gauss-Jordan, then test the inverse pattern
    cdef Py_ssize_t width = 2 * n, r, c, i, j, piv
    cdef int64_t inv, f, tmp
    for c in range(n):
        piv = -1
        for i in range(c, n):
            if w[i * width + c] != 0:
                piv = i
                break
        if piv < 0:
            return False
        if piv != c:
            for j in range(width):
                tmp = w[c * width + j]
                w[c * width + j] = w[piv * width + j]
                w[piv * width + j] = tmp
        inv = _modinv(w[c * width + c], p)
        for j in range(width):
            w[c * width + j] = (w[c * width + j] * inv) % p
        for i in range(n):
            if i != c and w[i * width + c] != 0:
                f = p - w[i * width + c]
                for j in range(width):
                    w[i * width + j] = (w[i * width + j] + f * w[c * width + j]) % p
    for i in range(nq):
        r = qpos[i] // n
        c = qpos[i] % n
        if w[r * width + n + c] != 0:
            return False
    return True


def ci_first_solution(Py_ssize_t n, free_pos, q_pos, int64_t p, int64_t start, int64_t stop):
    """First candidate index in ``[start, stop)`` solving a CI instance.

    Candidate ``idx`` writes its base-``p`` digits into the flat row-major
    positions ``free_pos`` (all other entries zero). It is a hit when the
    matrix is invertible and its inverse vanishes on ``q_pos``.
    """
    cdef cnp.ndarray[int64_t, ndim=1] fp = np.ascontiguousarray(free_pos, dtype=np.int64)
    cdef cnp.ndarray[int64_t, ndim=1] qp = np.ascontiguousarray(q_pos, dtype=np.int64)
    cdef Py_ssize_t s = fp.shape[0], nq = qp.shape[0], i, r, width = 2 * n
    cdef int64_t idx, found = -1
    cdef int64_t* mat = <int64_t*> malloc(n * n * sizeof(int64_t) + 1)
    cdef int64_t* work = <int64_t*> malloc(n * width * sizeof(int64_t) + 1)
    cdef int64_t* d = <int64_t*> malloc((s + 1) * sizeof(int64_t))
    cdef int64_t* fpp = &fp[0] if s > 0 else NULL
    cdef int64_t* qpp = &qp[0] if nq > 0 else NULL
    try:
        with nogil:
            memset(mat, 0, n * n * sizeof(int64_t))
            _digits(start, p, s, d)
            for i in range(s):
                mat[fpp[i]] = d[i]
            idx = start
            while idx < stop:
                for r in range(n):
                    memcpy(&work[r * width], &mat[r * n], n * sizeof(int64_t))
                    memset(&work[r * width + n], 0, n * sizeof(int64_t))
                    work[r * width + n + r] = 1
                if _inverse_ok(work, n, p, qpp, nq):
                    found = idx
                    break
                idx += 1
                i = s - 1
                while i >= 0:
                    d[i] += 1
                    if d[i] < p:
                        mat[fpp[i]] = d[i]
                        break
                    d[i] = 0
                    mat[fpp[i]] = 0
                    i -= 1
    finally:
        free(mat)
        free(work)
        free(d)
    return found
