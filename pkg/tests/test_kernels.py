"""The compiled core and the numpy fallback must agree bit for bit."""
import random

import numpy as np
import pytest

from interleavekit import kernels

BACKENDS = kernels.backends()
needs_both = pytest.mark.skipif("cython" not in BACKENDS, reason="compiled core not built")


def test_selected_backend_is_known():
    assert kernels.BACKEND in BACKENDS


@needs_both
@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_rref_parity(p):
    rng = np.random.default_rng(p)
    for _ in range(50):
        a = rng.integers(0, p, size=(rng.integers(1, 7), rng.integers(1, 7)))
        r1, piv1 = BACKENDS["numpy"].rref(a, p)
        r2, piv2 = BACKENDS["cython"].rref(a, p)
        assert np.array_equal(r1 % p, np.asarray(r2) % p)
        assert np.array_equal(piv1, np.asarray(piv2))


@needs_both
@pytest.mark.parametrize("p", [2, 3])
def test_first_consistent_parity(p):
    rng = np.random.default_rng(10 + p)
    for _ in range(30):
        s, rows, cols = int(rng.integers(1, 5)), int(rng.integers(1, 6)), int(rng.integers(1, 5))
        stack = rng.integers(0, p, size=(s, rows, cols))
        b = rng.integers(0, p, size=rows)
        total = p**s
        got = [BACKENDS[k].first_consistent(stack, b, p, 0, total) for k in ("numpy", "cython")]
        assert got[0] == got[1]
        # brute force: lowest index whose combination makes A x = b solvable
        expect = -1
        for idx in range(total):
            digits, t = [], idx
            for _ in range(s):
                digits.append(t % p)
                t //= p
            coeffs = digits[::-1]
            A = sum(c * m for c, m in zip(coeffs, stack)) % p
            aug = np.concatenate([A, b[:, None]], axis=1)
            if _rank(A, p) == _rank(aug, p):
                expect = idx
                break
        assert got[0] == expect


def _rank(a, p):
    return int(BACKENDS["numpy"].rref(a, p)[1].size)


@needs_both
@pytest.mark.parametrize("p", [2, 3])
def test_ci_first_solution_parity(p):
    rng = random.Random(p)
    for _ in range(20):
        n = rng.randint(1, 3)
        cells = list(range(n * n))
        forced = set(rng.sample(cells, rng.randint(0, n)))
        free = np.array([c for c in cells if c not in forced], dtype=np.int64)
        q = np.array(rng.sample(cells, rng.randint(0, n)), dtype=np.int64)
        total = p ** free.size
        if total > 1 << 14:
            continue
        a = BACKENDS["numpy"].ci_first_solution(n, free, q, p, 0, total)
        b = BACKENDS["cython"].ci_first_solution(n, free, q, p, 0, total)
        assert a == b


def test_threaded_first_hit_is_lowest():
    calls = []

    def fn(lo, hi):
        calls.append((lo, hi))
        hits = [i for i in (5000, 9000) if lo <= i < hi]
        return hits[0] if hits else -1

    assert kernels._first_hit(fn, 20000, 4) == 5000
    assert kernels._first_hit(fn, 20000, 1) == 5000
