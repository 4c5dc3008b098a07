"""Rank invariants and barcodes of Z-indexed modules."""
from __future__ import annotations

from collections import Counter
from typing import Iterable, Optional

from .errors import InvalidIntervalError, InvalidModuleError
from .fields import PrimeField, rank_mod
from .modules import VecModule, direct_sum, range_interval_module, zero_module
from .posets import GridPoset, line


class Barcode:
    """A multiset of integer intervals ``[a, b]``, kept sorted."""

    __slots__ = ("bars",)

    def __init__(self, bars: Iterable = ()):
        out = []
        for bar in bars:
            a, b = (int(v) for v in bar)
            if a > b:
                raise InvalidIntervalError(f"empty interval [{a}, {b}]")
            out.append((a, b))
        self.bars = tuple(sorted(out))

    def __iter__(self):
        return iter(self.bars)

    def __len__(self) -> int:
        return len(self.bars)

    def counts(self) -> Counter:
        return Counter(self.bars)

    def __eq__(self, other) -> bool:
        if isinstance(other, Barcode):
            return self.bars == other.bars
        if isinstance(other, (list, tuple)):
            return self == Barcode(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.bars)

    def __repr__(self) -> str:
        return "Barcode(" + ", ".join(f"[{a},{b}]" for a, b in self.bars) + ")"


class RankInvariant:
    """``rk(a, b) = rank phi(a, b)`` on the module's window; zero outside."""

    def __init__(self, lo: int, hi: int, table: dict):
        self.lo, self.hi = lo, hi
        self.table = table

    def __call__(self, a: int, b: int) -> int:
        return self.table.get((a, b), 0)

    def __eq__(self, other) -> bool:
        return isinstance(other, RankInvariant) and {k: v for k, v in self.table.items() if v} == {
            k: v for k, v in other.table.items() if v
        }


def _require_line(m: VecModule) -> GridPoset:
    P = m.poset
    if not isinstance(P, GridPoset) or P.arity != 1:
        raise InvalidModuleError(f"expected a module over a 1-D grid, got {P!r}")
    return P


def rank_invariant(m: VecModule) -> RankInvariant:
    P = _require_line(m)
    lo, hi = P.origin[0], P.hi[0]
    p = m.field.p
    table = {}
    for a in range(lo, hi + 1):
        if not m.dim((a,)):
            continue
        for b in range(a, hi + 1):
            if not m.dim((b,)):
                break
            r = rank_mod(m.transition_array((a,), (b,)), p)
            if r == 0:
                break
            table[(a, b)] = r
    return RankInvariant(lo, hi, table)


def barcode(m: VecModule) -> Barcode:
    """Bars with multiplicity ``rk(a,b) - rk(a-1,b) - rk(a,b+1) + rk(a-1,b+1)``."""
    rk = rank_invariant(m)
    bars = []
    for (a, b), r in sorted(rk.table.items()):
        mult = r - rk(a - 1, b) - rk(a, b + 1) + rk(a - 1, b + 1)
        if mult < 0:
            raise InvalidModuleError(f"negative multiplicity {mult} for [{a}, {b}]; module is not functorial")
        bars.extend([(a, b)] * mult)
    return Barcode(bars)


def realize(bars, field: PrimeField, window: Optional[GridPoset] = None) -> VecModule:
    """Direct sum of interval modules, one per bar, in input order."""
    if not isinstance(bars, Barcode):
        bars = [tuple(int(v) for v in bar) for bar in bars]
    bars = list(bars)
    if window is None:
        if bars:
            window = line(min(a for a, _ in bars), max(b for _, b in bars))
        else:
            window = line(1, 1)
    if not bars:
        return zero_module(window, field)
    return direct_sum([range_interval_module(a, b, field, window) for a, b in bars])
