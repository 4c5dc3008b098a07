"""Set-valued modules: merge trees over [n] and multigraph reduction over [n]^2."""
from __future__ import annotations

import itertools
from collections import Counter, defaultdict
from dataclasses import dataclass, field as dc_field
from typing import Optional

from .errors import InvalidModuleError


# ---------------------------------------------------------------------------
# one-parameter modules and merge trees


@dataclass(frozen=True)
class SetModule1D:
    """``sets[k-1]`` is ``M_k``; ``maps[k-1]`` sends ``M_k`` into ``M_{k+1}``."""

    n: int
    sets: tuple
    maps: tuple

    def __post_init__(self):
        sets = tuple(tuple(s) for s in self.sets)
        maps = tuple(dict(m) for m in self.maps)
        if len(sets) != self.n or len(maps) != max(self.n - 1, 0):
            raise InvalidModuleError("need n sets and n-1 maps")
        for k, s in enumerate(sets):
            if len(set(s)) != len(s):
                raise InvalidModuleError(f"repeated element in M_{k + 1}")
        for k, m in enumerate(maps):
            if set(m) != set(sets[k]):
                raise InvalidModuleError(f"map {k + 1}->{k + 2} is not total on M_{k + 1}")
            tgt = set(sets[k + 1])
            if any(v not in tgt for v in m.values()):
                raise InvalidModuleError(f"map {k + 1}->{k + 2} leaves M_{k + 2}")
        object.__setattr__(self, "sets", sets)
        object.__setattr__(self, "maps", maps)

    @property
    def cardinality(self) -> int:
        return sum(len(s) for s in self.sets)

    def level_sizes(self) -> tuple:
        return tuple(len(s) for s in self.sets)

    def parent_index(self) -> tuple:
        """Per step ``k``, the position in ``M_{k+1}`` of each element's image."""
        cached = self.__dict__.get("_parents")
        if cached is None:
            cached = []
            for k, f in enumerate(self.maps):
                pos = {y: i for i, y in enumerate(self.sets[k + 1])}
                cached.append(tuple(pos[f[x]] for x in self.sets[k]))
            cached = tuple(cached)
            object.__setattr__(self, "_parents", cached)
        return cached


@dataclass
class RootedTree:
    """Nodes ``0..size-1``; ``parent[root] == -1``."""

    parent: list
    root: int
    labels: list = dc_field(default_factory=list)

    def __post_init__(self):
        if self.parent[self.root] != -1 or sum(1 for p in self.parent if p == -1) != 1:
            raise InvalidModuleError("a rooted tree needs exactly one root")

    @property
    def size(self) -> int:
        return len(self.parent)

    def children(self) -> list:
        ch = [[] for _ in self.parent]
        for v, p in enumerate(self.parent):
            if p >= 0:
                ch[p].append(v)
        return ch


def merge_tree_of(m: SetModule1D) -> RootedTree:
    """Elements plus a root ``r``; ``x in M_k`` hangs below its image, ``M_n`` below ``r``."""
    ids = {}
    labels = ["r"]
    for k, s in enumerate(m.sets, start=1):
        for x in s:
            ids[(k, x)] = len(labels)
            labels.append((k, x))
    parent = [-1] * len(labels)
    for k, s in enumerate(m.sets, start=1):
        for x in s:
            parent[ids[(k, x)]] = ids[(k + 1, m.maps[k - 1][x])] if k < m.n else 0
    return RootedTree(parent, 0, labels)


def _ahu_labels(t: RootedTree) -> tuple:
    """Per-node integer labels equal on isomorphic subtrees at the same depth."""
    ch = t.children()
    depth = [0] * t.size
    order = [t.root]
    for v in order:
        for c in ch[v]:
            depth[c] = depth[v] + 1
            order.append(c)
    if len(order) != t.size:
        raise InvalidModuleError("tree is not connected to its root")
    levels = defaultdict(list)
    for v in order:
        levels[depth[v]].append(v)
    label = [0] * t.size
    for d in sorted(levels, reverse=True):
        sigs = {v: tuple(sorted(label[c] for c in ch[v])) for v in levels[d]}
        rank = {s: i for i, s in enumerate(sorted(set(sigs.values())))}
        for v in levels[d]:
            label[v] = rank[sigs[v]]
    return label, ch


def tree_canonical_code(t: RootedTree) -> str:
    """Balanced-parenthesis code; equal codes iff the rooted trees are isomorphic."""
    label, ch = _ahu_labels(t)
    out = []
    stack = [(t.root, False)]
    while stack:
        v, done = stack.pop()
        if done:
            out.append(")")
            continue
        out.append("(")
        stack.append((v, True))
        # push in reverse so the smallest label is emitted first
        for c in sorted(ch[v], key=lambda c: label[c], reverse=True):
            stack.append((c, False))
    return "".join(out)


def merge_iso(m: SetModule1D, n: SetModule1D) -> bool:
    """AHU labelling of both merge trees at once, one level at a time.

    Children of ``x in M_k`` are its preimages in ``M_{k-1}``, so depth is
    the level and only two levels are alive at any moment.
    """
    if m.level_sizes() != n.level_sizes():
        return False
    pm, pn = m.parent_index(), n.parent_index()
    lab_m = lab_n = ()
    for k, size in enumerate(m.level_sizes()):
        sig_m = _level_signatures(size, pm[k - 1] if k else (), lab_m)
        sig_n = _level_signatures(size, pn[k - 1] if k else (), lab_n)
        if sorted(sig_m) != sorted(sig_n):
            return False
        table = {}
        lab_m = [table.setdefault(s, len(table)) for s in sig_m]
        lab_n = [table.setdefault(s, len(table)) for s in sig_n]
    return True


def _level_signatures(size: int, parents, below) -> list:
    kids = [[] for _ in range(size)]
    for par, lab in zip(parents, below):
        kids[par].append(lab)
    return [tuple(sorted(v)) for v in kids]


# ---------------------------------------------------------------------------
# two-parameter modules


def _steps(n: int):
    for a in range(1, n + 1):
        for b in range(1, n + 1):
            if a < n:
                yield (a, b), (a + 1, b)
            if b < n:
                yield (a, b), (a, b + 1)


@dataclass(frozen=True)
class SetModule2D:
    """A functor ``[n]^2 -> Set``: ``sets[(a, b)]`` and unit-step ``maps[(p, q)]``."""

    n: int
    sets: dict
    maps: dict

    def __post_init__(self):
        n = self.n
        sets = {(a, b): tuple(self.sets.get((a, b), ())) for a in range(1, n + 1) for b in range(1, n + 1)}
        extra = set(self.sets) - set(sets)
        if extra:
            raise InvalidModuleError(f"points outside [{n}]^2: {sorted(extra)}")
        maps = {}
        for p, q in _steps(n):
            m = dict(self.maps.get((p, q), {}))
            if set(m) != set(sets[p]) or any(v not in sets[q] for v in m.values()):
                raise InvalidModuleError(f"map {p}->{q} is not a total function into M_{q}")
            maps[(p, q)] = m
        bad = set(self.maps) - set(maps)
        if bad:
            raise InvalidModuleError(f"maps on non-unit steps: {sorted(bad)}")
        for (a, b) in sets:
            if a < n and b < n:
                h, v = (a + 1, b), (a, b + 1)
                top = (a + 1, b + 1)
                for x in sets[(a, b)]:
                    if maps[(h, top)][maps[((a, b), h)][x]] != maps[(v, top)][maps[((a, b), v)][x]]:
                        raise InvalidModuleError(f"square at {(a, b)} does not commute on {x!r}")
        for p, s in sets.items():
            if len(set(s)) != len(s):
                raise InvalidModuleError(f"repeated element at {p}")
        object.__setattr__(self, "sets", sets)
        object.__setattr__(self, "maps", maps)

    @property
    def cardinality(self) -> int:
        return sum(len(s) for s in self.sets.values())

    @property
    def normalized(self) -> bool:
        return bool(self.sets[(1, 1)])

    def sizes(self) -> dict:
        return {p: len(s) for p, s in self.sets.items()}


MARKER = "__marker__"


def pad(m: SetModule2D) -> SetModule2D:
    """Add a disjoint constant singleton summand (a fresh marker at every point)."""
    sets = {p: tuple(s) + (MARKER,) for p, s in m.sets.items()}
    maps = {k: {**v, MARKER: MARKER} for k, v in m.maps.items()}
    return SetModule2D(m.n, sets, maps)


@dataclass
class Multigraph:
    """Vertices ``0..size-1``; ``mult[(u, v)]`` with ``u < v`` is the edge multiplicity."""

    size: int
    mult: dict
    labels: list = dc_field(default_factory=list)

    def __post_init__(self):
        for (u, v), k in self.mult.items():
            if not (0 <= u < v < self.size) or k < 1:
                raise InvalidModuleError(f"bad edge {(u, v)} x{k}")

    @property
    def edge_count(self) -> int:
        return sum(self.mult.values())

    def adjacency(self) -> list:
        adj = [dict() for _ in range(self.size)]
        for (u, v), k in self.mult.items():
            adj[u][v] = k
            adj[v][u] = k
        return adj


def setmod2_to_multigraph(m: SetModule2D) -> Multigraph:
    """Elements plus ``T``; map edges, and ``n(a-1)+b`` edges from ``x in M_(a,b)`` to ``T``.

    Modules empty at (1, 1) are padded first; the edge bound relies on it.
    """
    if not m.normalized:
        m = pad(m)
    n = m.n
    labels = ["T"]
    ids = {}
    for p in sorted(m.sets):
        for x in m.sets[p]:
            ids[(p, x)] = len(labels)
            labels.append((p, x))
    mult = {}
    for (p, q), f in m.maps.items():
        for x, y in f.items():
            u, v = sorted((ids[(p, x)], ids[(q, y)]))
            mult[(u, v)] = mult.get((u, v), 0) + 1
    for (p, x), u in ids.items():
        a, b = p
        mult[(0, u)] = n * (a - 1) + b
    g = Multigraph(len(labels), mult, labels)
    c = m.cardinality
    assert g.edge_count <= (2 + c) * c * c, "edge bound violated"
    return g


def _refine(adjs: list, colors: list) -> list:
    """Joint colour refinement over several graphs until the partition is stable."""
    while True:
        sigs = []
        for adj, col in zip(adjs, colors):
            sigs.append(
                [(col[v], tuple(sorted(Counter((col[u], k) for u, k in adj[v].items()).items()))) for v in range(len(adj))]
            )
        table = {s: i for i, s in enumerate(sorted({s for sg in sigs for s in sg}))}
        new = [[table[s] for s in sg] for sg in sigs]
        if sum(len(set(c)) for c in new) == sum(len(set(c)) for c in colors) and all(
            len(set(c)) == len(set(n_)) for c, n_ in zip(colors, new)
        ):
            return new
        colors = new


def multigraph_isomorphism(g: Multigraph, h: Multigraph, pinned: Optional[dict] = None) -> Optional[dict]:
    """An isomorphism ``g -> h`` as a vertex map, or None.

    ``pinned`` forces some vertices of ``g`` onto given vertices of ``h``.
    """
    if g.size != h.size or sorted(g.mult.values()) != sorted(h.mult.values()):
        return None
    ag, ah = g.adjacency(), h.adjacency()
    cg, ch = [0] * g.size, [0] * h.size
    for k, (u, v) in enumerate((pinned or {}).items(), start=1):
        cg[u], ch[v] = k, k
    if g.size <= 2:
        return _exhaustive_iso(g, h, ag, ah, pinned or {})
    return _search(ag, ah, cg, ch)


def _search(ag, ah, cg, ch) -> Optional[dict]:
    cg, ch = _refine([ag, ah], [cg, ch])
    if Counter(cg) != Counter(ch):
        return None
    classes = defaultdict(list)
    for v, c in enumerate(cg):
        classes[c].append(v)
    open_ = [c for c in sorted(classes) if len(classes[c]) > 1]
    if not open_:
        where = {c: v for v, c in enumerate(ch)}
        f = {v: where[c] for v, c in enumerate(cg)}
        return f if _is_iso(ag, ah, f) else None
    target = min(open_, key=lambda c: (len(classes[c]), c))
    v = classes[target][0]
    fresh = max(max(cg), max(ch)) + 1
    for w in [u for u, c in enumerate(ch) if c == target]:
        ng, nh = list(cg), list(ch)
        ng[v], nh[w] = fresh, fresh
        got = _search(ag, ah, ng, nh)
        if got is not None:
            return got
    return None


def _is_iso(ag, ah, f: dict) -> bool:
    for u, nb in enumerate(ag):
        fu = f[u]
        if len(nb) != len(ah[fu]):
            return False
        for v, k in nb.items():
            if ah[fu].get(f[v]) != k:
                return False
    return True


def _exhaustive_iso(g, h, ag, ah, pinned) -> Optional[dict]:
    for perm in itertools.permutations(range(h.size)):
        f = dict(enumerate(perm))
        if all(f[u] == v for u, v in pinned.items()) and _is_iso(ag, ah, f):
            return f
    return None


def multigraph_iso(g: Multigraph, h: Multigraph) -> bool:
    return multigraph_isomorphism(g, h) is not None


def natural_iso_exhaustive(m: SetModule2D, n: SetModule2D) -> Optional[dict]:
    """Pointwise bijections commuting with every step map, by brute force."""
    if m.n != n.n or m.sizes() != n.sizes():
        return None
    pts = sorted(m.sets)
    choices = [list(itertools.permutations(n.sets[p])) for p in pts]
    for combo in itertools.product(*choices):
        f = {p: dict(zip(m.sets[p], img)) for p, img in zip(pts, combo)}
        if all(f[q][mp[x]] == n.maps[(p, q)][f[p][x]] for (p, q), mp in m.maps.items() for x in mp):
            return f
    return None


def setmod2_iso(m: SetModule2D, n: SetModule2D) -> bool:
    """Isomorphism of ``[n]^2 -> Set`` functors through the multigraph reduction."""
    if m.n != n.n or m.sizes() != n.sizes():
        return False
    if not (m.normalized and n.normalized):
        m, n = pad(m), pad(n)
    if m.cardinality <= 2:
        return natural_iso_exhaustive(m, n) is not None
    g, h = setmod2_to_multigraph(m), setmod2_to_multigraph(n)
    # pinning T to T keeps the found isomorphism level preserving
    f = multigraph_isomorphism(g, h, pinned={0: 0})
    if f is None:
        return False
    n_ = m.n
    for u in range(1, g.size):
        (a, b), _ = g.labels[u]
        (a2, b2), _ = h.labels[f[u]]
        assert n_ * (a - 1) + b == n_ * (a2 - 1) + b2, "isomorphism does not respect levels"
    return True
