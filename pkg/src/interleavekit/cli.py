"""Command line entry point.

Decision verbs exit 0 for yes, 1 for no and 2 for errors (including an
exhausted search budget, which is never reported as "no").
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from typing import Optional, Sequence

from . import io
from .barcode import barcode
from .bottleneck import bottleneck_distance, interleaving_distance_1d
from .ci import ci_solve_bruteforce, ci_solve_matching, ci_to_modules
from .errors import EnumerationCapError, FormatError, InterleaveKitError
from .fields import PrimeField
from .sat import decide_sat_via_interleaving, literal_label, clause_label, parse_dimacs, sat_to_modules
from .setmods import SetModule1D, SetModule2D, merge_iso, setmod2_iso
from .solver import are_isomorphic, interleaving_distance, is_delta_interleaved

YES, NO, ERROR = 0, 1, 2


class CLIError(Exception):
    pass


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise CLIError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _outdir(path: str) -> str:
    os.makedirs(path, exist_ok=True)
    return path


def _decision(flag: bool) -> int:
    print("yes" if flag else "no")
    return YES if flag else NO


def _matrix_lines(mat) -> str:
    return "\n".join(" ".join(str(v) for v in row) for row in mat.tolist())


# ---------------------------------------------------------------------------
# verbs


def cmd_barcode(a) -> int:
    sys.stdout.write(io.dump_barcode(barcode(io.load_module(_read(a.module)))))
    return YES


def cmd_bottleneck(a) -> int:
    print(bottleneck_distance(io.load_barcode(_read(a.first)), io.load_barcode(_read(a.second))))
    return YES


def cmd_dist1d(a) -> int:
    print(interleaving_distance_1d(io.load_module(_read(a.first)), io.load_module(_read(a.second))))
    return YES


def cmd_interleave(a) -> int:
    m, n = io.load_module(_read(a.first)), io.load_module(_read(a.second))
    w = is_delta_interleaved(m, n, a.delta, cap=a.cap, threads=a.threads)
    if w is not None:
        if a.output:
            _write(a.output, io.dump_witness(w, m))
        else:
            sys.stdout.write(io.dump_witness(w, m))
    return _decision(w is not None)


def cmd_dist(a) -> int:
    m, n = io.load_module(_read(a.first)), io.load_module(_read(a.second))
    print(interleaving_distance(m, n, cap=a.cap, threads=a.threads))
    return YES


def cmd_iso(a) -> int:
    m, n = io.load_module(_read(a.first)), io.load_module(_read(a.second))
    return _decision(are_isomorphic(m, n, cap=a.cap, threads=a.threads))


def cmd_ci_solve(a) -> int:
    prob = io.load_ci(_read(a.problem))
    try:
        field = PrimeField(a.p)
    except ValueError as exc:
        raise CLIError(str(exc)) from None
    if a.method == "matching":
        sol = ci_solve_matching(prob, field)
    else:
        sol = ci_solve_bruteforce(prob, field, budget=a.cap, threads=a.threads)
    if sol is None:
        print("no")
        return NO
    print("yes")
    print("M =")
    print(_matrix_lines(sol.m))
    print("M^-1 =")
    print(_matrix_lines(sol.m_inv))
    return YES


def cmd_ci_reduce(a) -> int:
    prob = io.load_ci(_read(a.problem))
    mods = ci_to_modules(prob, PrimeField(a.p))
    out = _outdir(a.output)
    _write(os.path.join(out, "M.json"), io.dump_module(mods.M))
    _write(os.path.join(out, "N.json"), io.dump_module(mods.N))
    _write(os.path.join(out, "manifest.json"), io.dump_manifest(mods.manifest()))
    return YES


def cmd_sat_decide(a) -> int:
    psi = parse_dimacs(_read(a.cnf))
    got = decide_sat_via_interleaving(psi, gadget=a.gadget, cap=a.cap, threads=a.threads)
    if not got.satisfiable:
        print("UNSAT")
        return NO
    print("SAT")
    lits = [i if got.assignment[i] else -i for i in range(1, psi.num_vars + 1)]
    print("v " + " ".join(str(v) for v in lits + [0]))
    return YES


def cmd_sat_reduce(a) -> int:
    psi = parse_dimacs(_read(a.cnf))
    M, N = sat_to_modules(psi, a.gadget)
    out = _outdir(a.output)
    _write(os.path.join(out, "M.json"), io.dump_module(M))
    _write(os.path.join(out, "N.json"), io.dump_module(N))
    manifest = {
        "gadget": a.gadget,
        "delta": 1,
        "literals": {literal_label(i): i for i in range(1, psi.num_vars + 1)},
        "clauses": {clause_label(k): list(cl) for k, cl in enumerate(psi.clauses, start=1)},
    }
    _write(os.path.join(out, "manifest.json"), io.dump_manifest(manifest))
    return YES


def cmd_setiso(a) -> int:
    m, n = io.load_setmodule(_read(a.first)), io.load_setmodule(_read(a.second))
    if not (isinstance(m, SetModule2D) and isinstance(n, SetModule2D)):
        raise FormatError("setiso expects two-parameter set modules (points [a, b])")
    return _decision(setmod2_iso(m, n))


def cmd_mergeiso(a) -> int:
    m, n = io.load_setmodule(_read(a.first)), io.load_setmodule(_read(a.second))
    if not (isinstance(m, SetModule1D) and isinstance(n, SetModule1D)):
        raise FormatError("mergeiso expects one-parameter set modules (points [k])")
    return _decision(merge_iso(m, n))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=1, help="worker threads for exhaustive searches")
    common.add_argument("--cap", type=int, default=None, help="candidate budget (default from the environment)")
    common.add_argument("-v", "--verbose", action="store_true")

    ap = argparse.ArgumentParser(prog="interleavekit", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="verb", required=True, metavar="VERB")

    def verb(name, fn, help_, parent=sub):
        p = parent.add_parser(name, parents=[common], help=help_)
        p.set_defaults(fn=fn)
        return p

    p = verb("barcode", cmd_barcode, "barcode of a 1-D module")
    p.add_argument("module")
    for name, fn, help_ in (
        ("bottleneck", cmd_bottleneck, "bottleneck distance of two barcode files"),
        ("dist1d", cmd_dist1d, "interleaving distance of 1-D modules via barcodes"),
        ("dist", cmd_dist, "interleaving distance via the generic solver"),
        ("iso", cmd_iso, "decide module isomorphism"),
        ("setiso", cmd_setiso, "decide isomorphism of [n]^2 set modules"),
        ("mergeiso", cmd_mergeiso, "decide isomorphism of merge trees"),
    ):
        p = verb(name, fn, help_)
        p.add_argument("first")
        p.add_argument("second")
    p = verb("interleave", cmd_interleave, "decide delta-interleaving, emit a witness")
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("-o", "--output", help="witness file (default: standard output)")
    p.add_argument("first")
    p.add_argument("second")

    ci = sub.add_parser("ci", help="constrained invertibility problems")
    cisub = ci.add_subparsers(dest="ci_verb", required=True, metavar="VERB")
    p = verb("solve", cmd_ci_solve, "solve a CI problem", cisub)
    p.add_argument("problem")
    p.add_argument("--p", type=int, default=2, help="field characteristic")
    p.add_argument("--method", choices=("brute", "matching"), default="brute")
    p = verb("reduce", cmd_ci_reduce, "write the module pair of a CI problem", cisub)
    p.add_argument("problem")
    p.add_argument("--p", type=int, default=2)
    p.add_argument("-o", "--output", required=True, metavar="DIR")

    sat = sub.add_parser("sat", help="3-CNF gadget")
    satsub = sat.add_subparsers(dest="sat_verb", required=True, metavar="VERB")
    for name, fn, help_ in (
        ("decide", cmd_sat_decide, "decide satisfiability through the interleaving solver"),
        ("reduce", cmd_sat_reduce, "write the module pair of a formula"),
    ):
        p = verb(name, fn, help_, satsub)
        p.add_argument("cnf")
        p.add_argument("--gadget", choices=("repaired", "literal"), default="repaired")
        if name == "reduce":
            p.add_argument("-o", "--output", required=True, metavar="DIR")
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        return args.fn(args)
    except EnumerationCapError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
    except FormatError as exc:
        print(f"format error: {exc}", file=sys.stderr)
    except CLIError as exc:
        print(f"error: {exc}", file=sys.stderr)
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
    except InterleaveKitError as exc:
        print(f"error: {exc}", file=sys.stderr)
    return ERROR


if __name__ == "__main__":
    sys.exit(main())
