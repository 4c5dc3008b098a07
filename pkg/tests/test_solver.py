import itertools
import random

import numpy as np
import pytest

from interleavekit import (
    GF2,
    GF3,
    EnumerationCapError,
    GridPoset,
    are_isomorphic,
    change_basis,
    direct_sum,
    hom_space,
    interleaving_distance,
    interval_module,
    is_delta_interleaved,
    verify_witness,
)
from interleavekit.ci import CIProblem, ci_to_modules
from interleavekit.modules import range_interval_module, zero_module
from interleavekit.posets import line
from interleavekit.solver import extend_witness, is_natural

from oracles import random_module_1d

W = line(1, 6)


def _iv(a, b, window=W):
    return range_interval_module(a, b, GF2, window)


# ---------------------------------------------------------------------------
# double enumeration oracle


def _all_morphisms(m, n, delta):
    """Every natural family ``m_a -> n_{a+delta}`` over GF(2), enumerated entrywise."""
    P = m.poset
    slots = []
    for a in m.support:
        b = P.shift_point(a, delta)
        if b is not None and n.dim(b):
            slots.append((a, n.dim(b), m.dim(a)))
    sizes = [r * c for _, r, c in slots]
    out = []
    for bits in itertools.product(range(2), repeat=sum(sizes)):
        mor, k = {}, 0
        for (a, r, c), s in zip(slots, sizes):
            mor[a] = np.array(bits[k : k + s], dtype=np.int64).reshape(r, c)
            k += s
        ok = True
        for a, b in P.covers:
            fa, fb = mor.get(a), mor.get(b)
            sa, sb = P.shift_point(a, delta), P.shift_point(b, delta)
            lhs = fb @ m.arr(a, b) % 2 if fb is not None and m.dim(a) else None
            rhs = n.arr(sa, sb) @ fa % 2 if fa is not None and sb is not None and n.dim(sb) else None
            if lhs is None and rhs is None:
                continue
            zero_l = lhs is None or not lhs.any()
            zero_r = rhs is None or not rhs.any()
            if lhs is not None and rhs is not None:
                if not np.array_equal(lhs, rhs):
                    ok = False
                    break
            elif not (zero_l and zero_r):
                ok = False
                break
        if ok:
            out.append(mor)
    return out


def _oracle_interleaved(m, n, delta) -> bool:
    P = m.poset

    def composite_ok(x, y, f, g):
        for a in x.support:
            b = P.shift_point(a, delta)
            c = P.shift_point(a, 2 * delta)
            want = x.transition_array(a, c) if c is not None else np.zeros((0, x.dim(a)), dtype=np.int64)
            if b is None or not y.dim(b) or a not in f or b not in g:
                got = np.zeros_like(want)
            else:
                got = g[b] @ f[a] % 2
            if c is not None and x.dim(c) and not np.array_equal(got, want):
                return False
            if (c is None or not x.dim(c)) and got.size and got.any():
                return False
        return True

    fs, gs = _all_morphisms(m, n, delta), _all_morphisms(n, m, delta)
    return any(composite_ok(m, n, f, g) and composite_ok(n, m, g, f) for f in fs for g in gs)


def test_solver_matches_double_enumeration_1d():
    rng = random.Random(31)
    checked = 0
    for _ in range(60):
        m = random_module_1d(rng, window=4, max_total=4, max_dim=2)
        n = random_module_1d(rng, window=4, max_total=4, max_dim=2)
        for delta in range(3):
            got = is_delta_interleaved(m, n, delta)
            assert (got is not None) == _oracle_interleaved(m, n, delta)
            checked += 1
    assert checked == 180


def test_solver_matches_double_enumeration_grid():
    P = GridPoset([2, 3])
    pts = P.points
    rng = random.Random(4)
    from interleavekit.modules import is_interval

    ivs = [s for k in range(1, 4) for s in itertools.combinations(pts, k) if is_interval(s, P)]
    for _ in range(40):
        m = direct_sum([interval_module(P, rng.choice(ivs), GF2) for _ in range(rng.randint(1, 2))])
        n = direct_sum([interval_module(P, rng.choice(ivs), GF2) for _ in range(rng.randint(1, 2))])
        for delta in range(2):
            assert (is_delta_interleaved(m, n, delta) is not None) == _oracle_interleaved(m, n, delta)


# ---------------------------------------------------------------------------
# hom spaces and witnesses


def test_hom_space_contains_identity():
    m = direct_sum([_iv(1, 3), _iv(2, 5)])
    H = hom_space(m, m)
    assert H.dimension >= 1
    for mor in H.basis:
        assert is_natural(m, m, mor)


def test_ci_hom_pattern_example_41():
    prob = CIProblem(3, ((2, 2), (3, 3)), ((2, 3), (3, 2)))
    mods = ci_to_modules(prob)
    P = mods.M.poset
    from interleavekit.modules import shift

    for i, I in enumerate(mods.I, start=1):
        for j, J in enumerate(mods.J, start=1):
            d = hom_space(interval_module(P, I, GF2), shift(interval_module(P, J, GF2), 1)).dimension
            assert d == (0 if (i, j) in prob.P else 1)


def test_identity_witness_at_zero():
    m = direct_sum([_iv(1, 3), _iv(2, 5)])
    w = is_delta_interleaved(m, m, 0)
    assert w is not None and verify_witness(m, m, w)
    for pt, mat in w.f.items():
        assert mat.rows == mat.cols and mat.shape[0] == m.dim(pt)


def test_distance_examples():
    m = direct_sum([_iv(1, 3), _iv(2, 5)])
    assert interleaving_distance(m, m) == 0
    assert interleaving_distance(_iv(1, 4), _iv(2, 5)) == 1
    assert is_delta_interleaved(_iv(1, 4), _iv(2, 5), 0) is None


def test_extend_witness():
    a, b = _iv(1, 4), _iv(2, 5)
    w = is_delta_interleaved(a, b, 1)
    w2 = extend_witness(a, b, w)
    assert w2.delta == 2 and verify_witness(a, b, w2)


def test_isomorphism_examples():
    rng = np.random.default_rng(0)
    P = GridPoset([3, 3])
    m = direct_sum([interval_module(P, [(a, b) for a in range(3) for b in range(3) if a >= i and b >= j], GF3) for i, j in ((0, 0), (1, 0), (1, 1))])
    bases = {}
    for pt in m.support:
        d = m.dim(pt)
        while True:
            t = rng.integers(0, 3, size=(d, d))
            if round(np.linalg.det(t)) % 3:
                break
        bases[pt] = t
    assert are_isomorphic(m, change_basis(m, bases))
    assert not are_isomorphic(_iv(1, 2), _iv(1, 3))
    assert not are_isomorphic(direct_sum([_iv(1, 3), _iv(2, 4)]), direct_sum([_iv(1, 4), _iv(2, 3)]))
    assert is_delta_interleaved(direct_sum([_iv(1, 3), _iv(2, 4)]), direct_sum([_iv(1, 4), _iv(2, 3)]), 0) is None


def test_cap_is_not_a_no():
    mods = ci_to_modules(CIProblem(3, ((2, 2), (3, 3)), ((2, 3), (3, 2))))
    with pytest.raises(EnumerationCapError):
        is_delta_interleaved(mods.M, mods.N, 1, cap=4)


def test_threads_do_not_change_result():
    mods = ci_to_modules(CIProblem(3, ((2, 2), (3, 3)), ((2, 3), (3, 2))))
    w1 = is_delta_interleaved(mods.M, mods.N, 1, threads=1)
    w4 = is_delta_interleaved(mods.M, mods.N, 1, threads=4)
    assert w1 == w4


def test_zero_modules():
    z = zero_module(W, GF2)
    assert is_delta_interleaved(z, z, 0) is not None
    assert interleaving_distance(_iv(3, 3), z) == 1
