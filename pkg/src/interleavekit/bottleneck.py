"""Delta-matchings between barcodes and the bottleneck distance.

The 1-D predicates below are closed forms; the generic entry points take
the interval predicates as arguments so the same matching code serves
barcodes of intervals in any poset (with the interleaving solver as the
predicate).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .barcode import Barcode, barcode
from .matching import matching_covering
from .modules import Interval, VecModule, interval_module


def is_eps_trivial(j, eps: int) -> bool:
    """``[a, b]`` dies under the ``eps`` transition: ``b - a < eps``."""
    a, b = j
    return b - a < eps


def intervals_delta_interleaved(j, k, delta: int) -> bool:
    (a, b), (c, d) = j, k
    if abs(a - c) <= delta and abs(b - d) <= delta:
        return True
    return is_eps_trivial(j, 2 * delta) and is_eps_trivial(k, 2 * delta)


@dataclass(frozen=True)
class Matching:
    """Matched pairs of bars, as values and as indices into the sorted inputs."""

    pairs: tuple
    index_pairs: tuple

    def __len__(self) -> int:
        return len(self.pairs)


def generic_delta_matching(
    c: Sequence,
    d: Sequence,
    delta: int,
    interleaved: Callable,
    trivial: Callable,
) -> Optional[Matching]:
    """A delta-matching for arbitrary bar types and predicates.

    ``interleaved(x, y, delta)`` decides whether two bars may be matched and
    ``trivial(x, eps)`` whether a bar may stay unmatched at ``eps = 2 delta``.
    """
    c, d = list(c), list(d)
    adj = [[j for j, y in enumerate(d) if interleaved(x, y, delta)] for x in c]
    need_c = [i for i, x in enumerate(c) if not trivial(x, 2 * delta)]
    need_d = [j for j, y in enumerate(d) if not trivial(y, 2 * delta)]
    pairs = matching_covering(adj, len(d), need_c, need_d)
    if pairs is None:
        return None
    return Matching(tuple((c[i], d[j]) for i, j in pairs), tuple(pairs))


def delta_matching_exists(c, d, delta: int) -> Optional[Matching]:
    c = c if isinstance(c, Barcode) else Barcode(c)
    d = d if isinstance(d, Barcode) else Barcode(d)
    return generic_delta_matching(c.bars, d.bars, delta, intervals_delta_interleaved, is_eps_trivial)


def _max_needed(bars: Sequence, trivial: Callable) -> int:
    delta = 0
    while any(not trivial(x, 2 * delta) for x in bars):
        delta += 1
    return delta


def generic_bottleneck_distance(c, d, interleaved: Callable, trivial: Callable) -> tuple:
    """``(distance, matching)`` by a linear scan over delta."""
    c, d = list(c), list(d)
    top = max(_max_needed(c, trivial), _max_needed(d, trivial))
    for delta in range(top + 1):
        hit = generic_delta_matching(c, d, delta, interleaved, trivial)
        if hit is not None:
            return delta, hit
    raise AssertionError("unreachable: the empty matching works once every bar is trivial")


def bottleneck_distance(c, d) -> int:
    c = c if isinstance(c, Barcode) else Barcode(c)
    d = d if isinstance(d, Barcode) else Barcode(d)
    return generic_bottleneck_distance(c.bars, d.bars, intervals_delta_interleaved, is_eps_trivial)[0]


def interleaving_distance_1d(m: VecModule, n: VecModule) -> int:
    return bottleneck_distance(barcode(m), barcode(n))


# ---------------------------------------------------------------------------
# intervals in arbitrary posets, decided by the generic solver


def interval_is_trivial(j: Interval, eps: int) -> bool:
    """No ``a`` in ``j`` with ``a + eps`` in ``j``."""
    P = j.poset
    return not any(P.shift_point(a, eps) in j.points for a in j.points)


def solver_intervals_interleaved(field) -> Callable:
    """Predicate deciding interval interleavings with the generic solver."""
    from .solver import is_delta_interleaved

    cache = {}

    def pred(j: Interval, k: Interval, delta: int) -> bool:
        key = (j.points, k.points, delta)
        if key not in cache:
            cache[key] = (
                is_delta_interleaved(interval_module(j.poset, j, field), interval_module(k.poset, k, field), delta)
                is not None
            )
        return cache[key]

    return pred
