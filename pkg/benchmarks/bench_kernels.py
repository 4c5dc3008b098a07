"""Compare the compiled core against the numpy fallback on the hot kernels.

    python benchmarks/bench_kernels.py [--repeat 5] [--json out.json]

Each workload runs a full scan with no early exit, so both backends do the
same amount of work. Results also have to agree or the script exits 1.
"""
import argparse
import json
import sys
import timeit

import numpy as np

from interleavekit import kernels
from interleavekit.ci import char_family


def workloads(seed: int = 0) -> dict:
    rng = np.random.default_rng(seed)
    mats = [rng.integers(0, 3, size=(12, 12)) for _ in range(200)]

    # 2^12 combinations of a 12 x 8 system; b outside every span keeps the scan going
    stack = rng.integers(0, 2, size=(12, 12, 8))
    stack[:, -1, :] = 0
    b = np.zeros(12, dtype=np.int64)
    b[-1] = 1

    # char_family(3) has no solution over GF(2): all 2^12 fillings are tried
    prob = char_family(3)
    n = prob.n
    forced = {(i - 1) * n + (j - 1) for i, j in prob.P}
    free = np.array([c for c in range(n * n) if c not in forced], dtype=np.int64)
    q = np.array(sorted((i - 1) * n + (j - 1) for i, j in prob.Q), dtype=np.int64)

    return {
        "rref 200x(12x12) GF(3)": lambda mod: [mod.rref(a, 3) for a in mats],
        "first_consistent 4096 x (12x8) GF(2)": lambda mod: mod.first_consistent(stack, b, 2, 0, 2**12),
        "ci_first_solution n=5, 4096 fillings": lambda mod: mod.ci_first_solution(n, free, q, 2, 0, 2 ** free.size),
    }


def _normalize(result):
    if isinstance(result, list):
        return [(np.asarray(r) % 3).tolist() + [np.asarray(piv).tolist()] for r, piv in result]
    return int(result)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5, help="timing repeats; the minimum is reported")
    ap.add_argument("--json", help="also write the table as JSON")
    args = ap.parse_args(argv)

    mods = kernels.backends()
    print(f"backends: {', '.join(sorted(mods))} (selected: {kernels.BACKEND})")
    rows = []
    for name, fn in workloads().items():
        times, outs = {}, {}
        for key, mod in sorted(mods.items()):
            outs[key] = _normalize(fn(mod))
            times[key] = min(timeit.repeat(lambda: fn(mod), number=1, repeat=args.repeat))
        if len({json.dumps(v) for v in outs.values()}) != 1:
            print(f"{name}: backends disagree", file=sys.stderr)
            return 1
        speedup = times["numpy"] / times["cython"] if "cython" in times else None
        rows.append({"workload": name, **{f"{k}_s": v for k, v in times.items()}, "speedup": speedup})
        cells = "  ".join(f"{k} {v * 1e3:9.2f} ms" for k, v in times.items())
        print(f"{name:40s} {cells}" + (f"  x{speedup:.1f}" if speedup else ""))
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)
    return 0


if __name__ == "__main__":
    sys.exit(main())
