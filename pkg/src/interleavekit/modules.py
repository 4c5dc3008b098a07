"""Vec-valued persistence modules over finite posets.

A module stores a dimension per point and one matrix per cover relation
between nonzero spaces. Points outside the poset, and points with no stored
dimension, read as the zero space. Composites along the order are computed
on demand and cached.
"""
from __future__ import annotations

import threading
from collections import deque
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .errors import (
    DimensionMismatchError,
    FieldMismatchError,
    InvalidIntervalError,
    InvalidModuleError,
    OrderError,
    PosetMismatchError,
)
from .fields import FieldMatrix, PrimeField, inverse_mod
from .posets import GridPoset, LCPoset, Poset, line


def _as_array(mat, rows: int, cols: int, p: int) -> np.ndarray:
    if isinstance(mat, FieldMatrix):
        arr = mat.data
    else:
        arr = np.array(mat, dtype=np.int64)
        if arr.size == rows * cols:
            arr = arr.reshape(rows, cols)
    arr = np.asarray(arr, dtype=np.int64) % p
    arr.flags.writeable = False
    return arr


class VecModule:
    """A functor from a finite poset to finite-dimensional GF(p) vector spaces.

    ``dims`` maps points to dimensions (missing points are zero). ``maps``
    maps cover relations ``(a, b)`` to ``dim(b) x dim(a)`` matrices; covers
    touching a zero space need no entry. Shapes and functoriality are not
    enforced here; call ``validate_module`` for a full report.
    """

    def __init__(self, poset: Poset, field: PrimeField, dims: Mapping, maps: Optional[Mapping] = None):
        if isinstance(field, int):
            field = PrimeField(field)
        self.poset = poset
        self.field = field
        self._dims = {}
        for pt, d in dims.items():
            pt = tuple(pt)
            if pt not in poset:
                raise InvalidModuleError(f"point {pt} is not in {poset!r}")
            if int(d) < 0:
                raise InvalidModuleError(f"negative dimension at {pt}")
            if int(d):
                self._dims[pt] = int(d)
        self._maps = {}
        for key, mat in (maps or {}).items():
            a, b = tuple(key[0]), tuple(key[1])
            if (a, b) not in poset.cover_set:
                raise InvalidModuleError(f"{a} -> {b} is not a cover relation")
            da, db = self.dim(a), self.dim(b)
            if da == 0 or db == 0:
                continue
            self._maps[(a, b)] = _as_array(mat, db, da, field.p)
        self._cache = {}
        self._lock = threading.Lock()

    # -- basic reads -------------------------------------------------------

    def dim(self, pt) -> int:
        return self._dims.get(pt, 0)

    @property
    def dims(self) -> dict:
        return dict(self._dims)

    @property
    def support(self) -> list:
        return [pt for pt in self.poset.points if pt in self._dims]

    @property
    def total_dimension(self) -> int:
        return sum(self._dims.values())

    def stored_maps(self) -> dict:
        return dict(self._maps)

    def arr(self, a, b) -> np.ndarray:
        """Matrix on the cover ``a -> b`` as an int64 array."""
        da, db = self.dim(a), self.dim(b)
        if da == 0 or db == 0:
            return np.zeros((db, da), dtype=np.int64)
        try:
            return self._maps[(a, b)]
        except KeyError:
            raise InvalidModuleError(f"no matrix stored on {a} -> {b}") from None

    def map(self, a, b) -> FieldMatrix:
        return FieldMatrix(self.field, self.arr(a, b))

    def transition_array(self, a, b) -> np.ndarray:
        if a not in self.poset or b not in self.poset or not self.poset.leq(a, b):
            raise OrderError(f"{a} is not <= {b}")
        da, db = self.dim(a), self.dim(b)
        if da == 0 or db == 0:
            return np.zeros((db, da), dtype=np.int64)
        key = (a, b)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        p = self.field.p
        out = np.eye(da, dtype=np.int64)
        for u, v in self.poset.path(a, b):
            if self.dim(v) == 0:
                out = np.zeros((db, da), dtype=np.int64)
                break
            out = self.arr(u, v) @ out % p
        out.flags.writeable = False
        with self._lock:
            self._cache.setdefault(key, out)
        return out

    def transition(self, a, b) -> FieldMatrix:
        return FieldMatrix(self.field, self.transition_array(a, b))

    # -- comparisons -------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, VecModule):
            return NotImplemented
        if self.poset != other.poset or self.field != other.field or self._dims != other._dims:
            return False
        keys = set(self._maps) | set(other._maps)
        return all(np.array_equal(self.arr(*k), other.arr(*k)) for k in keys)

    __hash__ = None

    def __repr__(self) -> str:
        return f"VecModule({self.poset!r}, {self.field!r}, total_dim={self.total_dimension})"


def transition(m: VecModule, a, b) -> FieldMatrix:
    return m.transition(a, b)


# ---------------------------------------------------------------------------
# validation


@dataclass
class ValidationReport:
    violations: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        return "ok" if self.ok else "\n".join(self.violations)


def validate_module(m: VecModule) -> ValidationReport:
    """Check matrix shapes, presence and commutativity of every square."""
    rep = ValidationReport()
    p = m.field.p
    shapes_ok = True
    for a, b in m.poset.covers:
        da, db = m.dim(a), m.dim(b)
        if da == 0 or db == 0:
            continue
        mat = m._maps.get((a, b))
        if mat is None:
            rep.violations.append(f"missing map on {a} -> {b}")
            shapes_ok = False
        elif mat.shape != (db, da):
            rep.violations.append(f"shape {mat.shape} on {a} -> {b}, expected {(db, da)}")
            shapes_ok = False
    if not shapes_ok:
        return rep
    for (a, b1, c), (_, b2, _) in m.poset.squares:
        if m.dim(a) == 0 or m.dim(c) == 0:
            continue
        left = m.arr(b1, c) @ m.arr(a, b1) % p
        right = m.arr(b2, c) @ m.arr(a, b2) % p
        if not np.array_equal(left, right):
            rep.violations.append(f"square {a} -> {b1} | {b2} -> {c} does not commute")
    return rep


def require_valid(m: VecModule) -> VecModule:
    rep = validate_module(m)
    if not rep.ok:
        raise InvalidModuleError(str(rep))
    return m


# ---------------------------------------------------------------------------
# constructions


def zero_module(poset: Poset, field: PrimeField) -> VecModule:
    return VecModule(poset, field, {}, {})


def shift(m: VecModule, delta: int) -> VecModule:
    """``M(delta)``: the module ``a -> M_{a + delta}``; off-poset reads as zero."""
    if delta < 0:
        raise ValueError("shift amount must be non-negative")
    if delta == 0:
        return m
    P = m.poset
    dims, maps = {}, {}
    for pt in P.points:
        q = P.shift_point(pt, delta)
        if q is not None and m.dim(q):
            dims[pt] = m.dim(q)
    for a, b in P.covers:
        if a in dims and b in dims:
            maps[(a, b)] = m.arr(P.shift_point(a, delta), P.shift_point(b, delta))
    return VecModule(P, m.field, dims, maps)


def direct_sum(ms: Sequence[VecModule]) -> VecModule:
    """Pointwise direct sum; blocks appear in input order."""
    ms = list(ms)
    if not ms:
        raise ValueError("direct sum of an empty list")
    P, K = ms[0].poset, ms[0].field
    for x in ms[1:]:
        if x.poset != P:
            raise PosetMismatchError(f"{x.poset!r} vs {P!r}")
        if x.field != K:
            raise FieldMismatchError(f"{x.field!r} vs {K!r}")
    dims = {}
    for pt in P.points:
        d = sum(x.dim(pt) for x in ms)
        if d:
            dims[pt] = d
    maps = {}
    for a, b in P.covers:
        if a not in dims or b not in dims:
            continue
        out = np.zeros((dims[b], dims[a]), dtype=np.int64)
        r = c = 0
        for x in ms:
            da, db = x.dim(a), x.dim(b)
            if da and db:
                out[r : r + db, c : c + da] = x.arr(a, b)
            r += db
            c += da
        maps[(a, b)] = out
    return VecModule(P, K, dims, maps)


def change_basis(m: VecModule, bases: Mapping) -> VecModule:
    """The isomorphic module with ``M_a`` re-based by invertible ``bases[a]``.

    New maps are ``T_b @ phi(a, b) @ T_a^{-1}``; points absent from ``bases``
    keep their basis.
    """
    p = m.field.p
    fwd, inv = {}, {}
    for pt in m.support:
        t = bases.get(pt)
        if t is None:
            t = np.eye(m.dim(pt), dtype=np.int64)
        t = np.asarray(t.data if isinstance(t, FieldMatrix) else t, dtype=np.int64) % p
        ti = inverse_mod(t, p)
        if ti is None:
            raise DimensionMismatchError(f"basis change at {pt} is singular")
        fwd[pt], inv[pt] = t, ti
    maps = {}
    for (a, b), mat in m._maps.items():
        maps[(a, b)] = fwd[b] @ mat @ inv[a] % p
    return VecModule(m.poset, m.field, m.dims, maps)


# ---------------------------------------------------------------------------
# intervals


def _closure(points: Iterable, step: Mapping) -> set:
    seen = set(points)
    queue = deque(seen)
    while queue:
        x = queue.popleft()
        for y in step[x]:
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def is_interval(points: Iterable, poset: Poset) -> bool:
    """Non-empty, order-convex and connected through comparable pairs."""
    pts = {tuple(p) if isinstance(p, (list, tuple)) else p for p in points}
    if not pts or any(p not in poset for p in pts):
        return False
    # convex iff the up-closure and down-closure meet exactly in the set
    if _closure(pts, poset.successors) & _closure(pts, poset.predecessors) != pts:
        return False
    # for convex sets, comparable pairs are joined by cover paths inside the set
    start = next(iter(pts))
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for y in poset.successors[x] + poset.predecessors[x]:
            if y in pts and y not in seen:
                seen.add(y)
                queue.append(y)
    return len(seen) == len(pts)


class Interval:
    """A validated interval of a poset."""

    __slots__ = ("poset", "points")

    def __init__(self, poset: Poset, points: Iterable):
        pts = frozenset(tuple(p) for p in points)
        if not is_interval(pts, poset):
            raise InvalidIntervalError(f"not an interval of {poset!r}: {sorted(pts)[:8]}")
        self.poset = poset
        self.points = pts

    def __contains__(self, pt) -> bool:
        return pt in self.points

    def __len__(self) -> int:
        return len(self.points)

    def __eq__(self, other) -> bool:
        return isinstance(other, Interval) and self.poset == other.poset and self.points == other.points

    def __hash__(self) -> int:
        return hash(self.points)

    def __repr__(self) -> str:
        return f"Interval({sorted(self.points)})"


def interval_module(poset: Poset, points, field: PrimeField) -> VecModule:
    """``I^J``: K on ``J``, identity inside ``J``, zero elsewhere."""
    j = points if isinstance(points, Interval) else Interval(poset, points)
    if j.poset != poset:
        raise PosetMismatchError("interval belongs to a different poset")
    dims = {pt: 1 for pt in j.points}
    one = np.ones((1, 1), dtype=np.int64)
    maps = {(a, b): one for a, b in poset.covers if a in j.points and b in j.points}
    return VecModule(poset, field, dims, maps)


def range_interval_module(lo: int, hi: int, field: PrimeField, window: Optional[GridPoset] = None) -> VecModule:
    """``I^{[lo, hi]}`` on a one-dimensional window (default exactly ``[lo, hi]``)."""
    P = window if window is not None else line(lo, hi)
    return interval_module(P, [(t,) for t in range(lo, hi + 1)], field)


__all__ = [
    "VecModule",
    "ValidationReport",
    "validate_module",
    "require_valid",
    "transition",
    "zero_module",
    "shift",
    "direct_sum",
    "change_basis",
    "is_interval",
    "Interval",
    "interval_module",
    "range_interval_module",
    "GridPoset",
    "LCPoset",
]
