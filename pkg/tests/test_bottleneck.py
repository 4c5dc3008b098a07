import itertools
import random

from interleavekit import GF2, bottleneck_distance, delta_matching_exists, interleaving_distance_1d, realize
from interleavekit.bottleneck import intervals_delta_interleaved, is_eps_trivial
from interleavekit.matching import hopcroft_karp, matching_covering
from interleavekit.modules import range_interval_module, zero_module
from interleavekit.posets import line
from interleavekit.solver import is_delta_interleaved

from oracles import random_barcode

W = line(1, 6)


def test_eps_trivial():
    assert is_eps_trivial((3, 3), 1)
    assert not is_eps_trivial((1, 4), 3) and is_eps_trivial((1, 4), 4)
    assert not any(is_eps_trivial((a, b), 0) for a in range(1, 4) for b in range(a, 4))


def test_eps_trivial_against_solver():
    # trivial at eps = 2 delta iff delta-interleaved with the zero module
    m = range_interval_module(1, 4, GF2, line(1, 8))
    z = zero_module(line(1, 8), GF2)
    assert is_delta_interleaved(m, z, 1) is None
    assert is_delta_interleaved(m, z, 2) is not None


def test_interval_predicate_examples():
    assert intervals_delta_interleaved((2, 4), (2, 4), 0)
    assert intervals_delta_interleaved((1, 4), (2, 5), 1)
    assert not intervals_delta_interleaved((1, 4), (2, 5), 0)
    assert intervals_delta_interleaved((1, 1), (5, 5), 1)
    a = range_interval_module(1, 1, GF2, W)
    b = range_interval_module(5, 5, GF2, W)
    assert is_delta_interleaved(a, b, 1) is not None


def test_matching_examples():
    c = [(1, 3), (2, 5)]
    got = delta_matching_exists(c, c, 0)
    assert sorted(got.index_pairs) == [(0, 0), (1, 1)]
    got = delta_matching_exists([(1, 4)], [(2, 5)], 1)
    assert got.pairs == (((1, 4), (2, 5)),)


def test_bottleneck_examples():
    assert bottleneck_distance([(1, 3), (2, 2)], [(1, 3), (2, 2)]) == 0
    assert bottleneck_distance([(1, 4)], [(2, 5)]) == 1
    m, n = realize([(1, 4)], GF2, W), realize([(2, 5)], GF2, W)
    assert interleaving_distance_1d(m, n) == 1
    assert interleaving_distance_1d(m, m) == 0


def _brute_matching_exists(c, d, delta):
    """Try every partial injection from c to d."""
    need_c = [i for i, x in enumerate(c) if not is_eps_trivial(x, 2 * delta)]
    need_d = [j for j, y in enumerate(d) if not is_eps_trivial(y, 2 * delta)]
    for k in range(min(len(c), len(d)) + 1):
        for left in itertools.combinations(range(len(c)), k):
            for right in itertools.permutations(range(len(d)), k):
                if all(intervals_delta_interleaved(c[i], d[j], delta) for i, j in zip(left, right)):
                    if set(need_c) <= set(left) and set(need_d) <= set(right):
                        return True
    return False


def test_matching_against_brute_force():
    rng = random.Random(21)
    for _ in range(150):
        c = random_barcode(rng, max_bars=4)
        d = random_barcode(rng, max_bars=4)
        for delta in range(3):
            got = delta_matching_exists(c, d, delta)
            assert (got is not None) == _brute_matching_exists(sorted(c), sorted(d), delta)
            if got is not None:
                assert all(intervals_delta_interleaved(x, y, delta) for x, y in got.pairs)


def test_hopcroft_karp_size():
    rng = random.Random(1)
    for _ in range(100):
        nl, nr = rng.randint(0, 5), rng.randint(0, 5)
        adj = [[j for j in range(nr) if rng.random() < 0.4] for _ in range(nl)]
        ml, mr = hopcroft_karp(adj, nr)
        size = sum(1 for v in ml if v >= 0)
        best = 0
        for k in range(min(nl, nr) + 1):
            for left in itertools.combinations(range(nl), k):
                for right in itertools.permutations(range(nr), k):
                    if all(j in adj[i] for i, j in zip(left, right)):
                        best = k
        assert size == best
        assert all(mr[v] == u for u, v in enumerate(ml) if v >= 0)


def test_matching_covering_requirements():
    rng = random.Random(2)
    for _ in range(200):
        nl, nr = rng.randint(0, 4), rng.randint(0, 4)
        adj = [[j for j in range(nr) if rng.random() < 0.5] for _ in range(nl)]
        need_l = [i for i in range(nl) if rng.random() < 0.5]
        need_r = [j for j in range(nr) if rng.random() < 0.5]
        got = matching_covering(adj, nr, need_l, need_r)
        exists = False
        for k in range(min(nl, nr) + 1):
            for left in itertools.combinations(range(nl), k):
                for right in itertools.permutations(range(nr), k):
                    if all(j in adj[i] for i, j in zip(left, right)) and set(need_l) <= set(left) and set(need_r) <= set(right):
                        exists = True
        assert (got is not None) == exists
        if got is not None:
            ls, rs = [u for u, _ in got], [v for _, v in got]
            assert len(set(ls)) == len(ls) and len(set(rs)) == len(rs)
            assert set(need_l) <= set(ls) and set(need_r) <= set(rs)
            assert all(v in adj[u] for u, v in got)
