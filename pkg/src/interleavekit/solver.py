"""Hom spaces and delta-interleavings between finite Vec-valued modules.

Naturality is linear, so ``Hom(M, N)`` is a nullspace. The composite
conditions of an interleaving are bilinear in ``(f, g)``; fixing the
coefficients of one side leaves a linear system in the other, so we
enumerate one side exhaustively (in lexicographic order) and solve for the
other. Before enumerating, the equations are row-reduced and the enumerated
side is cut down to an independent subset of its coefficient matrices,
which leaves the set of reachable systems unchanged.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels
from .config import enumeration_cap
from .errors import EnumerationCapError, FieldMismatchError, PosetMismatchError
from .fields import FieldMatrix, nullspace_mod, solve_mod
from .modules import VecModule, shift

log = logging.getLogger(__name__)


def _check_compatible(m: VecModule, n: VecModule) -> None:
    if m.poset != n.poset:
        raise PosetMismatchError(f"{m.poset!r} vs {n.poset!r}")
    if m.field != n.field:
        raise FieldMismatchError(f"{m.field!r} vs {n.field!r}")


class _Layout:
    """Coordinates of a morphism ``M -> N``: one row-major block per point."""

    def __init__(self, m: VecModule, n: VecModule):
        self.blocks = {}
        off = 0
        for pt in m.poset.points:
            dm, dn = m.dim(pt), n.dim(pt)
            if dm and dn:
                self.blocks[pt] = (off, dn, dm)
                off += dn * dm
        self.size = off

    def block(self, vec: np.ndarray, pt) -> Optional[np.ndarray]:
        hit = self.blocks.get(pt)
        if hit is None:
            return None
        off, r, c = hit
        return vec[..., off : off + r * c].reshape(vec.shape[:-1] + (r, c))

    def unpack(self, vec: np.ndarray) -> dict:
        return {pt: vec[off : off + r * c].reshape(r, c) for pt, (off, r, c) in self.blocks.items()}


def _find(parent: list, x: int) -> int:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def _hom_basis(m: VecModule, n: VecModule) -> tuple:
    """``(layout, basis)`` with the basis as rows of an int64 array."""
    p = m.field.p
    lay = _Layout(m, n)
    rows = []
    for a, b in m.poset.covers:
        dma, dnb = m.dim(a), n.dim(b)
        if not dma or not dnb:
            continue
        eq = np.zeros((dnb * dma, lay.size), dtype=np.int64)
        if b in lay.blocks:
            off, r, c = lay.blocks[b]
            eq[:, off : off + r * c] = np.kron(np.eye(dnb, dtype=np.int64), m.arr(a, b).T)
        if a in lay.blocks:
            off, r, c = lay.blocks[a]
            eq[:, off : off + r * c] -= np.kron(n.arr(a, b), np.eye(dma, dtype=np.int64))
        rows.append(eq % p)
    if not rows or lay.size == 0:
        return lay, np.eye(lay.size, dtype=np.int64)
    A = np.concatenate(rows)
    A = A[A.any(axis=1)]
    if not len(A):
        return lay, np.eye(lay.size, dtype=np.int64)
    # variables split into independent groups; direct sums decompose per summand pair
    parent = list(range(lay.size))
    for row in A:
        nz = np.flatnonzero(row)
        r0 = _find(parent, int(nz[0]))
        for v in nz[1:]:
            rv = _find(parent, int(v))
            if rv != r0:
                parent[rv] = r0
    roots = np.array([_find(parent, v) for v in range(lay.size)])
    row_root = roots[np.argmax(A != 0, axis=1)]
    pieces = []
    for root in dict.fromkeys(roots.tolist()):
        cols = np.flatnonzero(roots == root)
        sub = A[row_root == root][:, cols]
        null = nullspace_mod(sub, p, ncols=cols.size) if sub.size else np.eye(cols.size, dtype=np.int64)
        if null.size:
            full = np.zeros((null.shape[0], lay.size), dtype=np.int64)
            full[:, cols] = null
            pieces.append(full)
    basis = np.concatenate(pieces) if pieces else np.zeros((0, lay.size), dtype=np.int64)
    return lay, basis


@dataclass(frozen=True)
class HomSpace:
    """A basis of the natural transformations ``source -> target``."""

    source: VecModule
    target: VecModule
    basis: tuple

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def __len__(self) -> int:
        return len(self.basis)


def hom_space(m: VecModule, n: VecModule) -> HomSpace:
    _check_compatible(m, n)
    lay, basis = _hom_basis(m, n)
    K = m.field
    out = []
    for vec in basis:
        comps = lay.unpack(vec)
        out.append({pt: FieldMatrix(K, blk) for pt, blk in comps.items()})
    return HomSpace(m, n, tuple(out))


# ---------------------------------------------------------------------------
# witnesses


@dataclass(frozen=True)
class InterleavingWitness:
    """``f: M -> N(delta)`` and ``g: N -> M(delta)``, as point -> matrix maps.

    Points missing from ``f`` or ``g`` carry the unique map into or out of a
    zero space.
    """

    delta: int
    f: dict
    g: dict


def _component(mor: dict, pt, rows: int, cols: int) -> np.ndarray:
    got = mor.get(pt)
    if got is None:
        return np.zeros((rows, cols), dtype=np.int64)
    return np.asarray(got.data if isinstance(got, FieldMatrix) else got, dtype=np.int64)


def is_natural(m: VecModule, n: VecModule, mor: dict) -> bool:
    """Whether ``mor`` (point -> matrix) is a natural transformation ``m -> n``."""
    p = m.field.p
    P = m.poset
    for pt in P.points:
        got = mor.get(pt)
        if got is not None and np.shape(got.data if isinstance(got, FieldMatrix) else got) != (n.dim(pt), m.dim(pt)):
            return False
    for a, b in P.covers:
        if not m.dim(a) or not n.dim(b):
            continue
        fa = _component(mor, a, n.dim(a), m.dim(a))
        fb = _component(mor, b, n.dim(b), m.dim(b))
        if not np.array_equal(fb @ m.arr(a, b) % p, n.arr(a, b) @ fa % p):
            return False
    return True


def verify_witness(m: VecModule, n: VecModule, w: InterleavingWitness) -> bool:
    """Exact re-check of naturality and both composite identities."""
    d = w.delta
    p = m.field.p
    P = m.poset
    if not is_natural(m, shift(n, d), w.f) or not is_natural(n, shift(m, d), w.g):
        return False
    for a in P.points:
        a1 = P.shift_point(a, d)
        a2 = P.shift_point(a, 2 * d)
        if a2 is None:
            continue
        for src, dst, first, second in ((m, n, w.f, w.g), (n, m, w.g, w.f)):
            ds = src.dim(a)
            dt = src.dim(a2)
            if not ds or not dt:
                continue
            target = src.transition_array(a, a2)
            dmid = dst.dim(a1)
            comp = (
                _component(second, a1, dt, dmid) @ _component(first, a, dmid, ds) % p
                if dmid
                else np.zeros((dt, ds), dtype=np.int64)
            )
            if not np.array_equal(comp, target):
                return False
    return True


def extend_witness(m: VecModule, n: VecModule, w: InterleavingWitness) -> InterleavingWitness:
    """A ``(delta + 1)``-interleaving obtained by post-composing with the internal maps."""
    d = w.delta
    P = m.poset
    p = m.field.p
    K = m.field
    out = []
    for src, dst, mor in ((m, n, w.f), (n, m, w.g)):
        new = {}
        for a in P.points:
            a1, a2 = P.shift_point(a, d), P.shift_point(a, d + 1)
            if a2 is None or not src.dim(a) or not dst.dim(a2):
                continue
            comp = _component(mor, a, dst.dim(a1), src.dim(a)) if dst.dim(a1) else None
            if comp is None:
                continue
            new[a] = FieldMatrix(K, dst.transition_array(a1, a2) @ comp % p)
        out.append(new)
    return InterleavingWitness(d + 1, out[0], out[1])


# ---------------------------------------------------------------------------
# decision


class _Bilinear:
    """The composite identities as ``sum_ij x_i y_j T[i, j, :] = b``."""

    def __init__(self, m: VecModule, n: VecModule, delta: int):
        self.m, self.n, self.delta = m, n, delta
        p = m.field.p
        P = m.poset
        self.lay_f, self.F = _hom_basis(m, shift(n, delta))
        self.lay_g, self.G = _hom_basis(n, shift(m, delta))
        kf, kg = len(self.F), len(self.G)
        blocks, rhs = [], []
        for src, lay1, B1, lay2, B2, order in (
            (m, self.lay_f, self.F, self.lay_g, self.G, "fg"),
            (n, self.lay_g, self.G, self.lay_f, self.F, "gf"),
        ):
            for a in P.points:
                a2 = P.shift_point(a, 2 * delta)
                if a2 is None or not src.dim(a) or not src.dim(a2):
                    continue
                a1 = P.shift_point(a, delta)
                rhs.append(src.transition_array(a, a2).reshape(-1))
                first = lay1.block(B1, a)
                second = lay2.block(B2, a1)
                rows = src.dim(a2) * src.dim(a)
                if first is None or second is None:
                    blocks.append(np.zeros((kf, kg, rows), dtype=np.int64))
                    continue
                # second[j] @ first[i] for every basis pair
                prod = np.einsum("jrs,isc->ijrc", second, first) % p
                if order == "gf":
                    prod = prod.transpose(1, 0, 2, 3)
                blocks.append(prod.reshape(kf, kg, rows))
        if blocks:
            T = np.concatenate(blocks, axis=2)
            b = np.concatenate(rhs)
        else:
            T = np.zeros((kf, kg, 0), dtype=np.int64)
            b = np.zeros(0, dtype=np.int64)
        self.raw_rows = T.shape[2]
        # equivalent system with independent equations only
        if T.shape[2]:
            W = np.concatenate([T.reshape(kf * kg, T.shape[2]).T, b[:, None]], axis=1)
            red, piv = kernels.rref(W, p)
            red = red[: piv.size]
            self.inconsistent = bool(piv.size and piv[-1] == kf * kg)
            self.T = red[:, :-1].T.reshape(kf, kg, red.shape[0]).copy()
            self.b = red[:, -1].copy()
        else:
            self.inconsistent = False
            self.T, self.b = T, b


def _independent(mats: np.ndarray, p: int) -> np.ndarray:
    """Indices of the earliest linearly independent subset of ``mats``."""
    if mats.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    flat = mats.reshape(mats.shape[0], -1)
    if flat.shape[1] == 0:
        return np.zeros(0, dtype=np.int64)
    _, piv = kernels.rref(flat.T, p)
    return piv


def _digits(idx: int, p: int, s: int) -> np.ndarray:
    out = np.zeros(s, dtype=np.int64)
    for i in range(s - 1, -1, -1):
        out[i] = idx % p
        idx //= p
    return out


def _pointwise_dims_equal(m: VecModule, n: VecModule) -> bool:
    return all(m.dim(pt) == n.dim(pt) for pt in m.poset.points)


def is_delta_interleaved(
    m: VecModule,
    n: VecModule,
    delta: int,
    *,
    cap: Optional[int] = None,
    threads: int = 1,
) -> Optional[InterleavingWitness]:
    """A delta-interleaving of ``m`` and ``n``, or None if none exists.

    Raises ``EnumerationCapError`` when the search space exceeds ``cap``
    candidates (default from ``INTERLEAVEKIT_ENUM_CAP``).
    """
    _check_compatible(m, n)
    if delta < 0:
        raise ValueError("delta must be non-negative")
    if delta == 0 and not _pointwise_dims_equal(m, n):
        return None
    p = m.field.p
    cap = enumeration_cap() if cap is None else cap
    sys_ = _Bilinear(m, n, delta)
    if sys_.inconsistent:
        return None
    T, b = sys_.T, sys_.b
    kf, kg = T.shape[0], T.shape[1]

    # enumerate the side whose coefficient matrices span the smaller space
    ind_f = _independent(T, p)
    ind_g = _independent(T.transpose(1, 0, 2), p)
    enum_f = ind_f.size <= ind_g.size
    if enum_f:
        stack = T[ind_f].transpose(0, 2, 1)
        ind, k_enum, k_solve = ind_f, kf, kg
    else:
        stack = T[:, ind_g].transpose(1, 2, 0)
        ind, k_enum, k_solve = ind_g, kg, kf
    s = ind.size
    total = p**s
    if total > cap:
        raise EnumerationCapError(f"delta={delta} interleaving search over GF({p})^{s}", total, cap)
    log.debug("delta=%d: hom dims %d/%d, %d equations, enumerating %d", delta, kf, kg, len(b), total)

    if s == 0:
        hit = 0
        A = np.zeros((len(b), k_solve), dtype=np.int64)
    else:
        hit = kernels.first_consistent(stack, b, p, total, threads=threads)
        if hit < 0:
            return None
        coords = _digits(hit, p, s)
        A = np.tensordot(coords, stack, axes=1) % p
    x = np.zeros(k_enum, dtype=np.int64)
    if s:
        x[ind] = coords
    if len(b):
        sol = solve_mod(A, b, p)
        if sol is None:
            return None
        y = sol[0]
    else:
        y = np.zeros(k_solve, dtype=np.int64)
    xf, yg = (x, y) if enum_f else (y, x)
    fvec = xf @ sys_.F % p if kf else np.zeros(sys_.lay_f.size, dtype=np.int64)
    gvec = yg @ sys_.G % p if kg else np.zeros(sys_.lay_g.size, dtype=np.int64)
    K = m.field
    w = InterleavingWitness(
        delta,
        {pt: FieldMatrix(K, blk) for pt, blk in sys_.lay_f.unpack(fvec).items()},
        {pt: FieldMatrix(K, blk) for pt, blk in sys_.lay_g.unpack(gvec).items()},
    )
    if not verify_witness(m, n, w):
        raise AssertionError("internal error: constructed witness failed verification")
    return w


def vanishing_shift(m: VecModule) -> int:
    """Least ``delta`` with every ``phi(a, a + 2 delta)`` zero."""
    P = m.poset
    delta = 0
    while True:
        if all(
            P.shift_point(a, 2 * delta) is None
            or not m.dim(P.shift_point(a, 2 * delta))
            or not m.transition_array(a, P.shift_point(a, 2 * delta)).any()
            for a in m.support
        ):
            return delta
        delta += 1


def interleaving_distance(m: VecModule, n: VecModule, *, cap: Optional[int] = None, threads: int = 1) -> int:
    """Least delta admitting a delta-interleaving (finite for box-supported modules)."""
    _check_compatible(m, n)
    top = max(vanishing_shift(m), vanishing_shift(n))
    for delta in range(top):
        if is_delta_interleaved(m, n, delta, cap=cap, threads=threads) is not None:
            return delta
    return top


def are_isomorphic(m: VecModule, n: VecModule, *, cap: Optional[int] = None, threads: int = 1) -> bool:
    _check_compatible(m, n)
    if not _pointwise_dims_equal(m, n):
        return False
    P = m.poset
    if getattr(P, "arity", None) == 1:
        from .barcode import barcode

        if barcode(m) != barcode(n):
            return False
    return is_delta_interleaved(m, n, 0, cap=cap, threads=threads) is not None
