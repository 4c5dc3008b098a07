"""Exact linear algebra over prime fields GF(p).

Two layers live here. ``PrimeField`` and ``FieldMatrix`` are the public
value types; the ``*_mod`` helpers work on plain int64 arrays and are what
the solvers call in their inner loops.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import numpy as np

from . import kernels
from .config import enumeration_cap
from .errors import DimensionMismatchError, EnumerationCapError, FieldMismatchError


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class PrimeField:
    """The field Z/pZ for a prime ``p``."""

    p: int

    def __post_init__(self):
        if not isinstance(self.p, (int, np.integer)) or not _is_prime(int(self.p)):
            raise ValueError(f"characteristic must be prime, got {self.p!r}")
        object.__setattr__(self, "p", int(self.p))

    def __call__(self, a: int) -> int:
        return int(a) % self.p

    def inv(self, a: int) -> int:
        a = int(a) % self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(a, self.p - 2, self.p)

    def neg(self, a: int) -> int:
        return (-int(a)) % self.p

    def __repr__(self) -> str:
        return f"GF({self.p})"


GF2 = PrimeField(2)
GF3 = PrimeField(3)


# ---------------------------------------------------------------------------
# array layer


def rank_mod(a: np.ndarray, p: int) -> int:
    a = np.asarray(a, dtype=np.int64)
    if a.size == 0:
        return 0
    _, piv = kernels.rref(a, p)
    return int(piv.size)


def nullspace_mod(a: np.ndarray, p: int, ncols: Optional[int] = None) -> np.ndarray:
    """Basis of ``{x : a @ x = 0}`` as the rows of a ``(k, ncols)`` array."""
    a = np.asarray(a, dtype=np.int64)
    cols = a.shape[1] if a.ndim == 2 else int(ncols)
    if a.size == 0:
        return np.eye(cols, dtype=np.int64)
    red, piv = kernels.rref(a, p)
    pivot_set = set(piv.tolist())
    free = [c for c in range(cols) if c not in pivot_set]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, c in enumerate(free):
        basis[k, c] = 1
        for r, pc in enumerate(piv):
            basis[k, pc] = (-red[r, c]) % p
    return basis


def solve_mod(a: np.ndarray, b: np.ndarray, p: int):
    """Solve ``a @ x = b`` for a 2-D ``a``; returns ``(particular, nullspace_rows)`` or None."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1)
    rows, cols = a.shape
    if rows == 0:
        return np.zeros(cols, dtype=np.int64), np.eye(cols, dtype=np.int64)
    red, piv = kernels.rref(np.concatenate([a, b[:, None]], axis=1), p)
    if piv.size and piv[-1] == cols:
        return None
    x = np.zeros(cols, dtype=np.int64)
    for r, pc in enumerate(piv):
        x[pc] = red[r, cols]
    return x, nullspace_mod(a, p)


def inverse_mod(a: np.ndarray, p: int) -> Optional[np.ndarray]:
    a = np.asarray(a, dtype=np.int64)
    n = a.shape[0]
    if n == 0:
        return np.zeros((0, 0), dtype=np.int64)
    red, piv = kernels.rref(np.concatenate([a, np.eye(n, dtype=np.int64)], axis=1), p)
    if piv.size < n or piv[n - 1] != n - 1:
        return None
    return red[:, n:].copy()


# ---------------------------------------------------------------------------
# value layer


class FieldMatrix:
    """An immutable dense matrix over a prime field, stored row-major."""

    __slots__ = ("field", "data")

    def __init__(self, field: PrimeField, entries, shape: Optional[tuple] = None):
        data = np.array(entries, dtype=np.int64)
        if shape is not None:
            data = data.reshape(shape)
        if data.ndim == 1 and shape is None:
            data = data.reshape(1, -1) if data.size else data.reshape(0, 0)
        if data.ndim != 2:
            raise DimensionMismatchError(f"matrix entries must be 2-D, got shape {data.shape}")
        data = data % field.p
        data.flags.writeable = False
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "data", data)

    def __setattr__(self, name, value):
        raise AttributeError("FieldMatrix is immutable")

    @classmethod
    def zeros(cls, field: PrimeField, rows: int, cols: int) -> "FieldMatrix":
        return cls(field, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, field: PrimeField, n: int) -> "FieldMatrix":
        return cls(field, np.eye(n, dtype=np.int64))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple:
        return self.data.shape

    @property
    def entries(self) -> tuple:
        return tuple(int(v) for v in self.data.reshape(-1))

    @property
    def T(self) -> "FieldMatrix":
        return transpose(self)

    def tolist(self) -> list:
        return self.data.tolist()

    def is_zero(self) -> bool:
        return not self.data.any()

    def __matmul__(self, other: "FieldMatrix") -> "FieldMatrix":
        return mat_mul(self, other)

    def __add__(self, other: "FieldMatrix") -> "FieldMatrix":
        _same_field(self, other)
        if self.shape != other.shape:
            raise DimensionMismatchError(f"cannot add {self.shape} and {other.shape}")
        return FieldMatrix(self.field, self.data + other.data)

    def scale(self, c: int) -> "FieldMatrix":
        return FieldMatrix(self.field, self.data * int(c))

    def __eq__(self, other) -> bool:
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and np.array_equal(self.data, other.data)

    def __hash__(self) -> int:
        return hash((self.field.p, self.shape, self.data.tobytes()))

    def __repr__(self) -> str:
        return f"FieldMatrix({self.field!r}, {self.tolist()})"


def _same_field(a: FieldMatrix, b: FieldMatrix) -> None:
    if a.field != b.field:
        raise FieldMismatchError(f"{a.field!r} vs {b.field!r}")


def transpose(a: FieldMatrix) -> FieldMatrix:
    return FieldMatrix(a.field, a.data.T.copy())


def mat_mul(a: FieldMatrix, b: FieldMatrix) -> FieldMatrix:
    """Exact product ``a @ b`` over GF(p)."""
    _same_field(a, b)
    if a.cols != b.rows:
        raise DimensionMismatchError(f"cannot multiply {a.shape} by {b.shape}")
    return FieldMatrix(a.field, (a.data @ b.data) % a.field.p)


def mat_rank(a: FieldMatrix) -> int:
    return rank_mod(a.data, a.field.p)


def mat_inverse(a: FieldMatrix) -> Optional[FieldMatrix]:
    """Two-sided inverse of a square matrix, or None when it is singular."""
    if a.rows != a.cols:
        raise DimensionMismatchError(f"inverse of non-square {a.shape} matrix")
    inv = inverse_mod(a.data, a.field.p)
    return None if inv is None else FieldMatrix(a.field, inv)


@dataclass(frozen=True)
class AffineSolution:
    """Solution set ``particular + span(nullspace_basis)`` of a linear system."""

    particular: tuple
    nullspace_basis: tuple

    def __len__(self) -> int:
        return len(self.nullspace_basis)


def solve_affine(a: FieldMatrix, b: Sequence[int]) -> Optional[AffineSolution]:
    """Solve ``a @ x = b``; None iff the system is inconsistent."""
    b = [int(v) % a.field.p for v in b]
    if a.rows != len(b):
        raise DimensionMismatchError(f"{a.rows} rows but right-hand side of length {len(b)}")
    res = solve_mod(a.data, np.array(b, dtype=np.int64), a.field.p)
    if res is None:
        return None
    x, basis = res
    return AffineSolution(tuple(int(v) for v in x), tuple(tuple(int(v) for v in row) for row in basis))


def enumerate_vectors(field: PrimeField, k: int, cap: Optional[int] = None) -> Iterator[tuple]:
    """All ``p**k`` vectors of length ``k`` in lexicographic order."""
    cap = enumeration_cap() if cap is None else cap
    total = field.p ** k
    if total > cap:
        raise EnumerationCapError(f"enumerating GF({field.p})^{k}", total, cap)
    return itertools.product(range(field.p), repeat=k)
