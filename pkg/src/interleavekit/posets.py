"""Finite index posets: boxes in Z^n and the literal/clause poset Z^{L->C}.

Both kinds expose the same small surface used by modules and solvers:
the point list in canonical order, the order relation, a generating set of
cover relations, the commuting squares that generate all path equalities,
and the diagonal shift of a point.
"""
from __future__ import annotations

import itertools
from functools import cached_property
from typing import Iterable, Optional, Sequence

Point = tuple


class Poset:
    """Common interface; use ``GridPoset`` or ``LCPoset``."""

    @cached_property
    def index(self) -> dict:
        return {pt: i for i, pt in enumerate(self.points)}

    def __contains__(self, pt) -> bool:
        return pt in self.index

    def __len__(self) -> int:
        return len(self.points)

    @cached_property
    def cover_set(self) -> frozenset:
        return frozenset(self.covers)

    @cached_property
    def successors(self) -> dict:
        out = {pt: [] for pt in self.points}
        for a, b in self.covers:
            out[a].append(b)
        return out

    @cached_property
    def predecessors(self) -> dict:
        out = {pt: [] for pt in self.points}
        for a, b in self.covers:
            out[b].append(a)
        return out

    def path(self, a: Point, b: Point) -> list:
        """A monotone cover path from ``a`` to ``b`` as a list of covers."""
        raise NotImplementedError

    def shift_point(self, pt: Point, delta: int) -> Optional[Point]:
        raise NotImplementedError


class GridPoset(Poset):
    """The box ``origin + [0, dims)`` in Z^n under the product order."""

    def __init__(self, dims: Sequence[int], origin: Optional[Sequence[int]] = None):
        self.dims = tuple(int(d) for d in dims)
        if not self.dims or any(d < 1 for d in self.dims):
            raise ValueError(f"grid sides must be positive, got {self.dims}")
        self.origin = tuple(int(o) for o in origin) if origin is not None else (0,) * len(self.dims)
        if len(self.origin) != len(self.dims):
            raise ValueError("origin and dims differ in length")
        self.hi = tuple(o + d - 1 for o, d in zip(self.origin, self.dims))

    @property
    def arity(self) -> int:
        return len(self.dims)

    @cached_property
    def points(self) -> tuple:
        return tuple(itertools.product(*(range(o, h + 1) for o, h in zip(self.origin, self.hi))))

    def __contains__(self, pt) -> bool:
        return (
            isinstance(pt, tuple)
            and len(pt) == len(self.dims)
            and all(o <= x <= h for x, o, h in zip(pt, self.origin, self.hi))
        )

    def leq(self, a: Point, b: Point) -> bool:
        return all(x <= y for x, y in zip(a, b))

    @cached_property
    def covers(self) -> tuple:
        out = []
        for pt in self.points:
            for i in range(self.arity):
                if pt[i] < self.hi[i]:
                    out.append((pt, pt[:i] + (pt[i] + 1,) + pt[i + 1 :]))
        return tuple(out)

    @cached_property
    def squares(self) -> tuple:
        out = []
        for pt in self.points:
            for i, j in itertools.combinations(range(self.arity), 2):
                if pt[i] < self.hi[i] and pt[j] < self.hi[j]:
                    pi = pt[:i] + (pt[i] + 1,) + pt[i + 1 :]
                    pj = pt[:j] + (pt[j] + 1,) + pt[j + 1 :]
                    top = pi[:j] + (pi[j] + 1,) + pi[j + 1 :]
                    out.append(((pt, pi, top), (pt, pj, top)))
        return tuple(out)

    def path(self, a: Point, b: Point) -> list:
        steps = []
        cur = a
        for i in range(self.arity):
            while cur[i] < b[i]:
                nxt = cur[:i] + (cur[i] + 1,) + cur[i + 1 :]
                steps.append((cur, nxt))
                cur = nxt
        return steps

    def shift_point(self, pt: Point, delta: int) -> Optional[Point]:
        out = tuple(x + delta for x in pt)
        return out if out in self else None

    def __eq__(self, other) -> bool:
        return isinstance(other, GridPoset) and self.dims == other.dims and self.origin == other.origin

    def __hash__(self) -> int:
        return hash(("grid", self.dims, self.origin))

    def __repr__(self) -> str:
        return f"GridPoset(dims={list(self.dims)}, origin={list(self.origin)})"


class LCPoset(Poset):
    """Disjoint time chains for literal and clause labels plus cross relations.

    ``(l, t) <= (c, t')`` for a literal label ``l`` and clause label ``c``
    exactly when ``t <= t'`` and ``t' >= cross_from``; the generating cover
    relations are the chain successors and ``(l, t) -> (c, t)`` for
    ``t >= cross_from``.
    """

    def __init__(
        self,
        literals: Iterable[str],
        clauses: Iterable[str],
        t_min: int = 1,
        t_max: int = 5,
        cross_from: int = 3,
    ):
        self.literals = tuple(str(x) for x in literals)
        self.clauses = tuple(str(x) for x in clauses)
        labels = self.literals + self.clauses
        if len(set(labels)) != len(labels):
            raise ValueError("literal and clause labels must be distinct")
        if t_max < t_min:
            raise ValueError(f"empty time range [{t_min}, {t_max}]")
        self.t_min, self.t_max, self.cross_from = int(t_min), int(t_max), int(cross_from)
        self._literal_set = frozenset(self.literals)
        self._clause_set = frozenset(self.clauses)

    @cached_property
    def points(self) -> tuple:
        ts = range(self.t_min, self.t_max + 1)
        return tuple((lab, t) for lab in self.literals + self.clauses for t in ts)

    def __contains__(self, pt) -> bool:
        return (
            isinstance(pt, tuple)
            and len(pt) == 2
            and (pt[0] in self._literal_set or pt[0] in self._clause_set)
            and isinstance(pt[1], int)
            and self.t_min <= pt[1] <= self.t_max
        )

    def is_literal(self, label: str) -> bool:
        return label in self._literal_set

    def leq(self, a: Point, b: Point) -> bool:
        (la, ta), (lb, tb) = a, b
        if la == lb:
            return ta <= tb
        return la in self._literal_set and lb in self._clause_set and ta <= tb and tb >= self.cross_from

    @cached_property
    def covers(self) -> tuple:
        out = []
        for lab in self.literals + self.clauses:
            for t in range(self.t_min, self.t_max):
                out.append(((lab, t), (lab, t + 1)))
        for t in range(max(self.t_min, self.cross_from), self.t_max + 1):
            for l in self.literals:
                for c in self.clauses:
                    out.append(((l, t), (c, t)))
        return tuple(out)

    @cached_property
    def squares(self) -> tuple:
        out = []
        for t in range(max(self.t_min, self.cross_from), self.t_max):
            for l in self.literals:
                for c in self.clauses:
                    out.append((((l, t), (c, t), (c, t + 1)), ((l, t), (l, t + 1), (c, t + 1))))
        return tuple(out)

    def path(self, a: Point, b: Point) -> list:
        (la, ta), (lb, tb) = a, b
        steps = []
        if la == lb:
            for t in range(ta, tb):
                steps.append(((la, t), (la, t + 1)))
            return steps
        cross_t = max(ta, self.cross_from)
        for t in range(ta, cross_t):
            steps.append(((la, t), (la, t + 1)))
        steps.append(((la, cross_t), (lb, cross_t)))
        for t in range(cross_t, tb):
            steps.append(((lb, t), (lb, t + 1)))
        return steps

    def shift_point(self, pt: Point, delta: int) -> Optional[Point]:
        out = (pt[0], pt[1] + delta)
        return out if out in self else None

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LCPoset)
            and self.literals == other.literals
            and self.clauses == other.clauses
            and (self.t_min, self.t_max, self.cross_from) == (other.t_min, other.t_max, other.cross_from)
        )

    def __hash__(self) -> int:
        return hash(("lc", self.literals, self.clauses, self.t_min, self.t_max, self.cross_from))

    def __repr__(self) -> str:
        return (
            f"LCPoset(literals={list(self.literals)}, clauses={list(self.clauses)}, "
            f"t=[{self.t_min}, {self.t_max}])"
        )


def line(lo: int, hi: int) -> GridPoset:
    """The integer window ``[lo, hi]`` as a one-dimensional grid."""
    return GridPoset([hi - lo + 1], [lo])
