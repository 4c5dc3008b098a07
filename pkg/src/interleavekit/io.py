"""Canonical JSON documents for modules, barcodes, CI problems, set modules and witnesses.

Every ``dump_*`` writes sorted keys on one line plus a newline, so parsing a
canonical file and dumping it again gives identical bytes.
"""
from __future__ import annotations

import json

from .barcode import Barcode
from .ci import CIProblem
from .errors import FormatError
from .fields import FieldMatrix, PrimeField
from .modules import VecModule
from .posets import GridPoset, LCPoset
from .setmods import SetModule1D, SetModule2D
from .solver import InterleavingWitness


def _dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(", ", ": ")) + "\n"


def _loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"not a JSON document: {exc}") from None


def _keys(doc, required: set, optional: set = frozenset(), what: str = "document") -> dict:
    if not isinstance(doc, dict):
        raise FormatError(f"{what} must be an object")
    extra = set(doc) - required - set(optional)
    if extra:
        raise FormatError(f"unknown field(s) in {what}: {sorted(extra)}")
    missing = required - set(doc)
    if missing:
        raise FormatError(f"missing field(s) in {what}: {sorted(missing)}")
    return doc


def _int(x, what: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise FormatError(f"{what} must be an integer, got {x!r}")
    return x


def _int_list(x, what: str) -> list:
    if not isinstance(x, list):
        raise FormatError(f"{what} must be a list")
    return [_int(v, what) for v in x]


# ---------------------------------------------------------------------------
# modules


def _poset_doc(P) -> dict:
    if isinstance(P, GridPoset):
        return {"grid": list(P.dims), "origin": list(P.origin)}
    return {
        "literals": list(P.literals),
        "clauses": list(P.clauses),
        "t": [P.t_min, P.t_max],
        "cross_from": P.cross_from,
    }


def _poset_from(doc):
    if isinstance(doc, dict) and "grid" in doc:
        _keys(doc, {"grid"}, {"origin"}, "poset")
        dims = _int_list(doc["grid"], "grid")
        origin = _int_list(doc.get("origin", [0] * len(dims)), "origin")
        if len(origin) != len(dims) or any(d < 1 for d in dims):
            raise FormatError("grid dims must be positive and match the origin")
        return GridPoset(dims, origin)
    _keys(doc, {"literals", "clauses", "t"}, {"cross_from"}, "poset")
    t = _int_list(doc["t"], "t")
    if len(t) != 2:
        raise FormatError("t must be [t_min, t_max]")
    labels = doc["literals"] + doc["clauses"]
    if not all(isinstance(x, str) for x in labels):
        raise FormatError("labels must be strings")
    try:
        return LCPoset(doc["literals"], doc["clauses"], t[0], t[1], _int(doc.get("cross_from", 3), "cross_from"))
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def _pt_out(pt) -> list:
    return list(pt)


def _pt_in(x, P):
    if not isinstance(x, list):
        raise FormatError(f"point must be a list, got {x!r}")
    if isinstance(P, LCPoset):
        if len(x) != 2 or not isinstance(x[0], str):
            raise FormatError(f"LC point must be [label, t], got {x!r}")
        pt = (x[0], _int(x[1], "t"))
    else:
        pt = tuple(_int(v, "coordinate") for v in x)
    if pt not in P:
        raise FormatError(f"point {x!r} is outside the poset")
    return pt


def module_to_doc(m: VecModule) -> dict:
    P = m.poset
    maps = sorted(m.stored_maps().items(), key=lambda kv: (P.index[kv[0][0]], P.index[kv[0][1]]))
    return {
        "field": {"p": m.field.p},
        "poset": _poset_doc(P),
        "spaces": [[_pt_out(pt), m.dim(pt)] for pt in m.support],
        "maps": [[_pt_out(a), _pt_out(b), [int(v) for v in arr.reshape(-1)]] for (a, b), arr in maps],
    }


def module_from_doc(doc) -> VecModule:
    _keys(doc, {"field", "poset", "spaces", "maps"}, what="module")
    fd = _keys(doc["field"], {"p"}, what="field")
    try:
        field = PrimeField(_int(fd["p"], "field.p"))
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    P = _poset_from(doc["poset"])
    dims = {}
    for item in doc["spaces"]:
        if not isinstance(item, list) or len(item) != 2:
            raise FormatError(f"space entry must be [point, dim], got {item!r}")
        pt = _pt_in(item[0], P)
        if pt in dims:
            raise FormatError(f"space at {item[0]!r} given twice")
        dims[pt] = _int(item[1], "dim")
        if dims[pt] < 0:
            raise FormatError("dimensions must be non-negative")
    maps = {}
    for item in doc["maps"]:
        if not isinstance(item, list) or len(item) != 3:
            raise FormatError(f"map entry must be [from, to, entries], got {item!r}")
        a, b = _pt_in(item[0], P), _pt_in(item[1], P)
        entries = _int_list(item[2], "entries")
        if len(entries) != dims.get(a, 0) * dims.get(b, 0):
            raise FormatError(f"map {item[0]}->{item[1]} needs {dims.get(a, 0) * dims.get(b, 0)} entries")
        if (a, b) in maps:
            raise FormatError(f"map {item[0]}->{item[1]} given twice")
        maps[(a, b)] = entries
    try:
        return VecModule(P, field, dims, maps)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def dump_module(m: VecModule) -> str:
    return _dumps(module_to_doc(m))


def load_module(text: str) -> VecModule:
    return module_from_doc(_loads(text))


# ---------------------------------------------------------------------------
# barcodes and CI problems


def dump_barcode(b) -> str:
    b = b if isinstance(b, Barcode) else Barcode(b)
    return _dumps([[a, c] for a, c in b.bars])


def load_barcode(text: str) -> Barcode:
    doc = _loads(text)
    if not isinstance(doc, list):
        raise FormatError("a barcode is a list of [a, b] pairs")
    bars = []
    for item in doc:
        pair = _int_list(item, "bar")
        if len(pair) != 2 or pair[0] > pair[1]:
            raise FormatError(f"bad bar {item!r}")
        bars.append(tuple(pair))
    return Barcode(bars)


def dump_ci(prob: CIProblem) -> str:
    return _dumps({"n": prob.n, "P": [list(x) for x in prob.P], "Q": [list(x) for x in prob.Q]})


def load_ci(text: str) -> CIProblem:
    doc = _keys(_loads(text), {"n", "P", "Q"}, what="CI problem")
    try:
        return CIProblem(
            _int(doc["n"], "n"),
            [tuple(_int_list(x, "entry")) for x in doc["P"]],
            [tuple(_int_list(x, "entry")) for x in doc["Q"]],
        )
    except (ValueError, TypeError) as exc:
        raise FormatError(str(exc)) from None


# ---------------------------------------------------------------------------
# set modules


def dump_setmodule(m) -> str:
    if isinstance(m, SetModule1D):
        sets = [[[k], list(s)] for k, s in enumerate(m.sets, start=1)]
        maps = [[[k], [k + 1], sorted([x, y] for x, y in f.items())] for k, f in enumerate(m.maps, start=1)]
    else:
        sets = [[list(p), list(m.sets[p])] for p in sorted(m.sets)]
        maps = [[list(p), list(q), sorted([x, y] for x, y in f.items())] for (p, q), f in sorted(m.maps.items())]
    return _dumps({"n": m.n, "sets": sets, "maps": maps})


def load_setmodule(text: str):
    """A ``SetModule1D`` when points are ``[k]``, a ``SetModule2D`` when ``[a, b]``."""
    doc = _keys(_loads(text), {"n", "sets", "maps"}, what="set module")
    n = _int(doc["n"], "n")
    sets, maps = {}, {}
    arity = set()
    for item in doc["sets"]:
        if not isinstance(item, list) or len(item) != 2 or not isinstance(item[1], list):
            raise FormatError(f"set entry must be [point, names], got {item!r}")
        pt = tuple(_int_list(item[0], "point"))
        arity.add(len(pt))
        if not all(isinstance(x, str) for x in item[1]):
            raise FormatError("element names must be strings")
        sets[pt] = item[1]
    for item in doc["maps"]:
        if not isinstance(item, list) or len(item) != 3:
            raise FormatError(f"map entry must be [from, to, pairs], got {item!r}")
        p, q = tuple(_int_list(item[0], "point")), tuple(_int_list(item[1], "point"))
        arity.update((len(p), len(q)))
        pairs = item[2]
        if not all(isinstance(e, list) and len(e) == 2 for e in pairs):
            raise FormatError("map pairs must be [element, image]")
        maps[(p, q)] = {x: y for x, y in pairs}
    if len(arity) > 1 or arity - {1, 2}:
        raise FormatError("points must all be [k] or all be [a, b]")
    try:
        if arity == {2}:
            return SetModule2D(n, sets, maps)
        ordered = [sets.get((k,), []) for k in range(1, n + 1)]
        if set(sets) - {(k,) for k in range(1, n + 1)}:
            raise FormatError("1-D points must lie in [1, n]")
        steps = [maps.get(((k,), (k + 1,)), {}) for k in range(1, n)]
        if set(maps) - {((k,), (k + 1,)) for k in range(1, n)}:
            raise FormatError("1-D maps must go from [k] to [k+1]")
        return SetModule1D(n, ordered, steps)
    except FormatError:
        raise
    except ValueError as exc:
        raise FormatError(str(exc)) from None


# ---------------------------------------------------------------------------
# witnesses and reduction manifests


def _mor_doc(mor: dict, P) -> list:
    items = sorted(mor.items(), key=lambda kv: P.index[kv[0]])
    return [[_pt_out(pt), mat.rows, mat.cols, list(mat.entries)] for pt, mat in items]


def dump_witness(w: InterleavingWitness, m: VecModule) -> str:
    return _dumps({"delta": w.delta, "field": {"p": m.field.p}, "f": _mor_doc(w.f, m.poset), "g": _mor_doc(w.g, m.poset)})


def load_witness(text: str, m: VecModule) -> InterleavingWitness:
    doc = _keys(_loads(text), {"delta", "field", "f", "g"}, what="witness")
    field = PrimeField(_int(_keys(doc["field"], {"p"}, what="field")["p"], "field.p"))
    out = {}
    for side in ("f", "g"):
        mor = {}
        for item in doc[side]:
            if not isinstance(item, list) or len(item) != 4:
                raise FormatError("witness entry must be [point, rows, cols, entries]")
            pt = _pt_in(item[0], m.poset)
            r, c = _int(item[1], "rows"), _int(item[2], "cols")
            entries = _int_list(item[3], "entries")
            if len(entries) != r * c:
                raise FormatError("entry count does not match the shape")
            mor[pt] = FieldMatrix(field, entries, (r, c))
        out[side] = mor
    return InterleavingWitness(_int(doc["delta"], "delta"), out["f"], out["g"])


def dump_manifest(doc: dict) -> str:
    return _dumps(doc)
