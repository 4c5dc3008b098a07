"""Constrained-invertibility (CI) problems and their reduction to Z^2-modules.

A CI problem ``(P, Q, n)`` asks for an invertible ``n x n`` matrix that is
zero on ``P`` whose inverse is zero on ``Q``. Indices are 1-based as in the
usual matrix notation.

Matrix convention for the reduction: ``a_f[i][j]`` is the coefficient of
the summand morphism ``I_i -> J_j(1)`` and ``a_g[j][i]`` that of
``J_j -> I_i(1)``. With this convention ``(f, g)`` is a 1-interleaving
exactly when ``a_f @ a_g`` is the identity, ``a_f`` vanishes on ``P`` and
``a_g`` vanishes on ``Q``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from . import kernels
from .config import ci_budget
from .errors import DimensionMismatchError, EnumerationCapError, InvalidIntervalError
from .fields import GF2, FieldMatrix, PrimeField, inverse_mod, mat_inverse, mat_mul
from .matching import hopcroft_karp
from .modules import Interval, VecModule, direct_sum, interval_module, is_interval
from .posets import GridPoset


def _pairs(items: Iterable, n: int, name: str) -> tuple:
    out = []
    for item in items:
        i, j = (int(v) for v in item)
        if not (1 <= i <= n and 1 <= j <= n):
            raise ValueError(f"{name} entry {(i, j)} lies outside {{1..{n}}}^2")
        if (i, j) in out:
            raise ValueError(f"duplicate {name} entry {(i, j)}")
        out.append((i, j))
    return tuple(out)


@dataclass(frozen=True)
class CIProblem:
    n: int
    P: tuple = ()
    Q: tuple = ()

    def __post_init__(self):
        if int(self.n) < 1:
            raise ValueError("matrix size must be positive")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "P", _pairs(self.P, self.n, "P"))
        object.__setattr__(self, "Q", _pairs(self.Q, self.n, "Q"))

    @property
    def m(self) -> int:
        return len(self.P) + len(self.Q)


@dataclass(frozen=True)
class CISolution:
    m: FieldMatrix
    m_inv: FieldMatrix


def is_solution(prob: CIProblem, m: FieldMatrix, m_inv: FieldMatrix) -> bool:
    n = prob.n
    if m.shape != (n, n) or m_inv.shape != (n, n):
        return False
    eye = FieldMatrix.identity(m.field, n)
    if mat_mul(m, m_inv) != eye or mat_mul(m_inv, m) != eye:
        return False
    return all(m.data[i - 1, j - 1] == 0 for i, j in prob.P) and all(
        m_inv.data[i - 1, j - 1] == 0 for i, j in prob.Q
    )


def _flat(pairs, n: int) -> list:
    return [(i - 1) * n + (j - 1) for i, j in pairs]


def ci_solve_bruteforce(
    prob: CIProblem, field: PrimeField = GF2, *, budget: Optional[int] = None, threads: int = 1
) -> Optional[CISolution]:
    """First solution in lexicographic order of the entries off ``P``, or None."""
    n, p = prob.n, field.p
    forced = set(_flat(prob.P, n))
    free = [k for k in range(n * n) if k not in forced]
    total = p ** len(free)
    budget = ci_budget() if budget is None else budget
    if total > budget:
        raise EnumerationCapError(f"CI brute force over GF({p}) with {len(free)} free entries", total, budget)
    qpos = np.array(_flat(prob.Q, n), dtype=np.int64)
    hit = kernels.ci_first_solution(n, np.array(free, dtype=np.int64), qpos, p, total, threads=threads)
    if hit < 0:
        return None
    flat = np.zeros(n * n, dtype=np.int64)
    idx = hit
    for pos in reversed(free):
        flat[pos] = idx % p
        idx //= p
    m = FieldMatrix(field, flat.reshape(n, n))
    sol = CISolution(m, mat_inverse(m))
    assert is_solution(prob, sol.m, sol.m_inv)
    return sol


def ci_solve_matching(prob: CIProblem, field: PrimeField = GF2) -> Optional[CISolution]:
    """Permutation solution from the lexicographically least perfect matching."""
    if prob.Q:
        raise ValueError("the matching solver needs Q to be empty")
    n = prob.n
    banned = set(prob.P)
    allowed = [[j for j in range(n) if (i + 1, j + 1) not in banned] for i in range(n)]

    def perfect(fixed: dict) -> bool:
        used = set(fixed.values())
        rows = [i for i in range(n) if i not in fixed]
        cols = [j for j in range(n) if j not in used]
        cidx = {c: k for k, c in enumerate(cols)}
        adj = [[cidx[j] for j in allowed[i] if j in cidx] for i in rows]
        ml, _ = hopcroft_karp(adj, len(cols))
        return all(v >= 0 for v in ml)

    if not perfect({}):
        return None
    sigma = {}
    for i in range(n):
        for j in allowed[i]:
            if j in sigma.values():
                continue
            sigma[i] = j
            if perfect(sigma):
                break
            del sigma[i]
    perm = np.zeros((n, n), dtype=np.int64)
    for i, j in sigma.items():
        perm[i, j] = 1
    m = FieldMatrix(field, perm)
    return CISolution(m, FieldMatrix(field, perm.T.copy()))


def char_family(n: int) -> CIProblem:
    """The ``(n + 2)``-sized instance solvable iff the characteristic divides ``n``."""
    if n < 2:
        raise ValueError("char_family needs n >= 2")
    size = n + 2
    Q = [(k, k) for k in range(2, size + 1)]
    P = [(1, 1)] + [(i, j) for i in range(2, size + 1) for j in range(2, size + 1) if i != j]
    return CIProblem(size, tuple(P), tuple(Q))


def char_family_pattern(n: int, field: PrimeField) -> tuple:
    """Candidate solution: ones off the forced zeros, ``-1`` on the free diagonal of ``M``."""
    prob = char_family(n)
    size = prob.n
    m = np.ones((size, size), dtype=np.int64)
    for i, j in prob.P:
        m[i - 1, j - 1] = 0
    for k in range(1, size):
        m[k, k] = field.p - 1
    mi = np.ones((size, size), dtype=np.int64)
    for i, j in prob.Q:
        mi[i - 1, j - 1] = 0
    return FieldMatrix(field, m), FieldMatrix(field, mi)


# ---------------------------------------------------------------------------
# reduction to modules


def upset(p: tuple, top: int) -> set:
    """``<p>``: points ``q`` with ``p <= q <= (top, top)``."""
    return {(a, b) for a in range(p[0], top + 1) for b in range(p[1], top + 1)}


def staircase_w(m: int) -> set:
    top = 2 * m + 2
    out = set()
    for k in range(m + 1):
        out |= upset((2 * m - 2 * k, 2 * k), top)
    return out


def x_point(m: int, i: int) -> tuple:
    return (2 * m - 2 * i + 1, 2 * i - 1)


def ci_intervals(prob: CIProblem) -> tuple:
    """Point sets of ``I_1..I_n`` and ``J_1..J_n`` from the staged recurrences."""
    n, m = prob.n, prob.m
    top = 2 * m + 2
    W = staircase_w(m)
    I = [set(W) for _ in range(n)]
    J = [set(W) for _ in range(n)]
    staged = [("P", pq) for pq in prob.P] + [("Q", pq) for pq in prob.Q]
    for k, (kind, (pk, qk)) in enumerate(staged, start=1):
        x = x_point(m, k)
        lower = upset((x[0] - 1, x[1] - 1), top)
        full = upset(x, top)
        if kind == "P":
            grow, keep, gi, ki = I, J, pk, qk
        else:
            grow, keep, gi, ki = J, I, pk, qk
        for i in range(1, n + 1):
            grow[i - 1] |= lower if i == gi else full
            if i != ki:
                keep[i - 1] |= full
    return [frozenset(s) for s in I], [frozenset(s) for s in J]


@dataclass(frozen=True)
class CIModules:
    """The pair of modules built from a CI problem, plus its summand intervals."""

    problem: CIProblem
    M: VecModule
    N: VecModule
    I: tuple
    J: tuple

    def __iter__(self):
        return iter((self.M, self.N))

    @property
    def top(self) -> tuple:
        t = 2 * self.problem.m + 1
        return (t, t)

    def manifest(self) -> dict:
        return {
            "n": self.problem.n,
            "m": self.problem.m,
            "grid": [2 * self.problem.m + 3, 2 * self.problem.m + 3],
            "M": [sorted(list(p) for p in s) for s in self.I],
            "N": [sorted(list(p) for p in s) for s in self.J],
        }


def ci_to_modules(prob: CIProblem, field: PrimeField = GF2) -> CIModules:
    side = 2 * prob.m + 3
    P = GridPoset([side, side])
    Is, Js = ci_intervals(prob)
    for s in Is + Js:
        if not is_interval(s, P):
            raise InvalidIntervalError("reduction produced a non-interval")
    M = direct_sum([interval_module(P, s, field) for s in Is])
    N = direct_sum([interval_module(P, s, field) for s in Js])
    return CIModules(prob, M, N, tuple(Is), tuple(Js))


def _unit_morphism(src: frozenset, dst: frozenset, poset: GridPoset, top: tuple, field: PrimeField) -> Optional[set]:
    """Support of the generator of ``Hom(I^src, I^dst(1))``, or None if it is zero.

    The generator is constant on its support, so scaling it to 1 at ``top``
    makes it the 0/1 indicator of that support.
    """
    from .modules import shift
    from .solver import hom_space

    hs = hom_space(interval_module(poset, src, field), shift(interval_module(poset, dst, field), 1))
    if hs.dimension == 0:
        return None
    if hs.dimension != 1:
        raise AssertionError("summand hom space is not one-dimensional")
    gen = hs.basis[0]
    values = {pt: int(mat.data[0, 0]) for pt, mat in gen.items() if not mat.is_zero()}
    if set(values.values()) != {values.get(top)}:
        raise AssertionError("summand generator is not constant on its support")
    return set(values)


def morphism_from_matrix(mods: CIModules, a: FieldMatrix, forward: bool = True) -> dict:
    """The morphism ``M -> N(1)`` (or ``N -> M(1)``) with summand coefficients ``a``."""
    poset = mods.M.poset
    src, dst = (mods.I, mods.J) if forward else (mods.J, mods.I)
    n = mods.problem.n
    K = a.field
    supports = {}
    for i in range(n):
        for j in range(n):
            if a.data[i, j]:
                sup = _unit_morphism(src[i], dst[j], poset, mods.top, K)
                if sup is None:
                    raise DimensionMismatchError(f"coefficient at {(i + 1, j + 1)} but the summand hom is zero")
                supports[(i, j)] = sup
    out = {}
    for pt in poset.points:
        q = poset.shift_point(pt, 1)
        rows = [j for j in range(n) if q is not None and q in dst[j]]
        cols = [i for i in range(n) if pt in src[i]]
        if not rows or not cols:
            continue
        blk = np.zeros((len(rows), len(cols)), dtype=np.int64)
        for r, j in enumerate(rows):
            for c, i in enumerate(cols):
                if (i, j) in supports and pt in supports[(i, j)]:
                    blk[r, c] = a.data[i, j]
        out[pt] = FieldMatrix(K, blk)
    return out


def check_pair_inverse_interleaving(mods: CIModules, a_f: FieldMatrix, a_g: FieldMatrix) -> bool:
    """Whether the morphisms with coefficient matrices ``a_f``, ``a_g`` form a 1-interleaving."""
    from .solver import InterleavingWitness, verify_witness

    prob = mods.problem
    for i, j in prob.P:
        if a_f.data[i - 1, j - 1]:
            raise ValueError(f"a_f is nonzero on P entry {(i, j)}")
    for i, j in prob.Q:
        if a_g.data[i - 1, j - 1]:
            raise ValueError(f"a_g is nonzero on Q entry {(i, j)}")
    w = InterleavingWitness(1, morphism_from_matrix(mods, a_f, True), morphism_from_matrix(mods, a_g, False))
    ok = verify_witness(mods.M, mods.N, w)
    eye = FieldMatrix.identity(a_f.field, prob.n)
    assert ok == (mat_mul(a_g, a_f) == eye), "interleaving check disagrees with the inverse-matrix criterion"
    return ok


def top_corner_matrices(mods: CIModules, witness) -> tuple:
    """``(a_f, a_g)`` read from a witness at ``(2m, 2m)`` and ``(2m+1, 2m+1)``.

    Raises AssertionError if the two corners disagree.
    """
    m = mods.problem.m
    lo, hi = (2 * m, 2 * m), (2 * m + 1, 2 * m + 1)
    out = []
    for mor in (witness.f, witness.g):
        a, b = mor[lo].data, mor[hi].data
        if not np.array_equal(a, b):
            raise AssertionError("corner matrices differ")
        # stored as target x source; the coefficient convention is source x target
        out.append(FieldMatrix(mods.M.field, a.T.copy()))
    return tuple(out)


def enumerate_problems(max_n: int, max_m: int) -> Iterable[CIProblem]:
    """All CI problems with ``n <= max_n`` and ``|P| + |Q| <= max_m`` (sets, sorted order)."""
    for n in range(1, max_n + 1):
        cells = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
        for mp in range(0, max_m + 1):
            for P in itertools.combinations(cells, mp):
                for mq in range(0, max_m - mp + 1):
                    for Q in itertools.combinations(cells, mq):
                        yield CIProblem(n, P, Q)
