"""3-CNF formulas and their compilation to pairs of modules over Z^{L->C}.

Two gadgets are available.

``gadget="literal"`` is the unrepaired construction: literal
chains ``K -> K -> K^2`` in N, clause chains ``0 -> K^3 -> K^3`` in N and
``H_s`` sending the literal's own polarity to ``e_s`` and the other one to
zero. Naturality of ``g`` across ``(x, 3) -> (c, 3)`` then forces the
opposite polarity coefficient of every variable occurring in a clause to
vanish, so formulas using a variable with both signs can be satisfiable
without the modules being 1-interleaved (see ``literal_gadget_counterexample``).

``gadget="repaired"`` (the default) gives each clause three extra "junk"
coordinates at t=3 that absorb the other polarity: N_c is ``K^3`` at t=2,
included into ``K^6`` at t=3, and ``H_s`` sends the literal's polarity to
``e_s`` and the other to ``e_{3+s}``. The clause test moves one step down:
M_c is K on t=1..4 and the identity ``g_(c,2) f_(c,1) = 1`` holds exactly when
the restriction of ``g_(c,3)`` to the first three coordinates, which is the
row of literal values, is nonzero.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import FormatError, InterleaveKitError
from .fields import GF2
from .modules import VecModule, require_valid
from .posets import LCPoset

T_MAX = 5


@dataclass(frozen=True)
class CNFFormula:
    """Clauses are triples of nonzero ints (sign = polarity), sorted by variable."""

    num_vars: int
    clauses: tuple

    def __post_init__(self):
        out = []
        for cl in self.clauses:
            lits = tuple(sorted((int(v) for v in cl), key=abs))
            vars_ = [abs(v) for v in lits]
            if len(lits) != 3 or len(set(vars_)) != 3:
                raise FormatError(f"clause {list(cl)} must have exactly 3 distinct variables")
            if any(v == 0 or abs(v) > self.num_vars for v in lits):
                raise FormatError(f"clause {list(cl)} uses a variable outside 1..{self.num_vars}")
            out.append(lits)
        object.__setattr__(self, "clauses", tuple(out))

    def evaluate(self, truth) -> bool:
        return all(any((truth[abs(v)] if v > 0 else not truth[abs(v)]) for v in cl) for cl in self.clauses)


Assignment = dict


def parse_dimacs(text: str) -> CNFFormula:
    header = None
    clauses, cur = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            parts = line.split()
            if header is not None or len(parts) != 4 or parts[1] != "cnf":
                raise FormatError(f"line {lineno}: bad header {line!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise FormatError(f"line {lineno}: bad header {line!r}") from None
            continue
        if header is None:
            raise FormatError(f"line {lineno}: clause before header")
        for tok in line.split():
            try:
                v = int(tok)
            except ValueError:
                raise FormatError(f"line {lineno}: bad literal {tok!r}") from None
            if v == 0:
                clauses.append(cur)
                cur = []
            else:
                cur.append(v)
    if header is None:
        raise FormatError("missing 'p cnf' header")
    if cur:
        raise FormatError("last clause is not terminated by 0")
    if len(clauses) != header[1]:
        raise FormatError(f"header announces {header[1]} clauses, found {len(clauses)}")
    return CNFFormula(header[0], tuple(clauses))


def serialize_dimacs(psi: CNFFormula) -> str:
    lines = [f"p cnf {psi.num_vars} {len(psi.clauses)}"]
    lines += [" ".join(str(v) for v in cl) + " 0" for cl in psi.clauses]
    return "\n".join(lines) + "\n"


def literal_label(i: int) -> str:
    return f"x{i}"


def clause_label(k: int) -> str:
    return f"c{k}"


def sat_to_modules(psi: CNFFormula, gadget: str = "repaired") -> tuple:
    """The pair ``(M, N)`` over GF(2); 1-interleaved iff ``psi`` is satisfiable."""
    if gadget not in ("repaired", "literal"):
        raise ValueError(f"unknown gadget {gadget!r}")
    lits = [literal_label(i) for i in range(1, psi.num_vars + 1)]
    cls = [clause_label(k) for k in range(1, len(psi.clauses) + 1)]
    P = LCPoset(lits, cls, 1, T_MAX)
    one = np.ones((1, 1), dtype=np.int64)
    dm, dn, mm, mn = {}, {}, {}, {}
    for x in lits:
        for t in range(1, 5):
            dm[(x, t)] = 1
        for t in range(1, 4):
            mm[((x, t), (x, t + 1))] = one
        dn[(x, 1)], dn[(x, 2)], dn[(x, 3)] = 1, 1, 2
        mn[((x, 1), (x, 2))] = one
        mn[((x, 2), (x, 3))] = np.array([[1], [1]])
    repaired = gadget == "repaired"
    wide = 6 if repaired else 3
    for k, (c, cl) in enumerate(zip(cls, psi.clauses)):
        m_from = 1 if repaired else 2
        for t in range(m_from, 5):
            dm[(c, t)] = 1
        for t in range(m_from, 4):
            mm[((c, t), (c, t + 1))] = one
        dn[(c, 2)], dn[(c, 3)] = 3, wide
        mn[((c, 2), (c, 3))] = np.eye(wide, 3, dtype=np.int64)
        in_clause = {literal_label(abs(v)): (s, v > 0) for s, v in enumerate(cl)}
        for x in lits:
            hit = in_clause.get(x)
            for t in (3, 4):
                mm[((x, t), (c, t))] = one if hit else np.zeros((1, 1), dtype=np.int64)
            H = np.zeros((wide, 2), dtype=np.int64)
            if hit:
                s, positive = hit
                own, other = (0, 1) if positive else (1, 0)
                H[s, own] = 1
                if repaired:
                    H[3 + s, other] = 1
            mn[((x, 3), (c, 3))] = H
    K = GF2
    M = require_valid(VecModule(P, K, dm, mm))
    N = require_valid(VecModule(P, K, dn, mn))
    return M, N


@dataclass(frozen=True)
class SatDecision:
    satisfiable: bool
    witness: object = None
    assignment: Optional[dict] = None


def extract_assignment(witness, psi: CNFFormula) -> dict:
    """Read ``x_i`` true iff the first entry of ``g`` at ``(x_i, 3)`` is 1."""
    truth = {}
    for i in range(1, psi.num_vars + 1):
        mat = witness.g.get((literal_label(i), 3))
        if mat is None or mat.shape != (1, 2):
            raise InterleaveKitError(f"witness has no 1x2 component at ({literal_label(i)}, 3)")
        truth[i] = bool(mat.data[0, 0])
    return truth


def decide_sat_via_interleaving(
    psi: CNFFormula, *, gadget: str = "repaired", cap: Optional[int] = None, threads: int = 1
) -> SatDecision:
    from .solver import is_delta_interleaved

    M, N = sat_to_modules(psi, gadget)
    w = is_delta_interleaved(M, N, 1, cap=cap, threads=threads)
    if w is None:
        return SatDecision(False)
    truth = extract_assignment(w, psi)
    if gadget == "repaired" and not psi.evaluate(truth):
        raise AssertionError("extracted assignment does not satisfy the formula")
    return SatDecision(True, w, truth)


def sat_bruteforce(psi: CNFFormula, max_vars: int = 20) -> Optional[dict]:
    """First satisfying assignment counting up in binary with ``x_1`` as the low bit."""
    n = psi.num_vars
    if n > max_vars:
        raise InterleaveKitError(f"{n} variables exceed the truth-table cap {max_vars}")
    for k in range(1 << n):
        truth = {i: bool(k >> (i - 1) & 1) for i in range(1, n + 1)}
        if psi.evaluate(truth):
            return truth
    return None


def random_formula(rng: random.Random, max_vars: int = 6, max_clauses: int = 5) -> CNFFormula:
    n = rng.randint(3, max_vars)
    cls = []
    for _ in range(rng.randint(0, max_clauses)):
        vs = rng.sample(range(1, n + 1), 3)
        cls.append(tuple(v if rng.random() < 0.5 else -v for v in vs))
    return CNFFormula(n, tuple(cls))


def literal_gadget_counterexample() -> CNFFormula:
    """Satisfiable (take x2 true) but uses x1 with both signs."""
    return CNFFormula(3, ((1, 2, 3), (-1, 2, 3)))
