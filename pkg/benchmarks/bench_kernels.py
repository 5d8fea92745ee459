"""Compare the compiled and pure-Python kernels on the three hot paths.

    python benchmarks/bench_kernels.py [--depth 14] [--n 200000] [--reps 2000]
"""
import argparse
import json
import time

import numpy as np

from ballistic import _pykernel

try:
    from ballistic import _ckernel
except ImportError:
    _ckernel = None


def _best(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench(kernel, args, speeds, prefixes):
    out = {}
    out["xi_fast"] = _best(lambda: kernel.xi_fast(speeds), args.repeat)

    def renewals():
        for pre in prefixes:
            kernel.renewal(pre, len(pre) - 1)

    out["renewal"] = _best(renewals, args.repeat)
    out["enum_left"] = _best(lambda: kernel.enum_left(args.depth), 1)
    out["enum_right"] = _best(lambda: kernel.enum_right(args.depth - 1), 1)
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--depth", type=int, default=14)
    ap.add_argument("--n", type=int, default=200_000)
    ap.add_argument("--reps", type=int, default=2000)
    ap.add_argument("--p", type=float, default=0.3)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    probs = [(1 - args.p) / 2, args.p, (1 - args.p) / 2]
    speeds = rng.choice([-1, 0, 1], size=args.n, p=probs).astype(np.int8)
    speeds[0] = 0
    prefixes = []
    for _ in range(args.reps):
        pre = rng.choice([-1, 0, 1], size=4096, p=probs).astype(np.int8)
        pre[0] = 0
        prefixes.append(pre)

    rows = {"python": bench(_pykernel, args, speeds, prefixes)}
    if _ckernel is not None:
        rows["cython"] = bench(_ckernel, args, speeds, prefixes)
    if args.json:
        print(json.dumps(rows))
        return
    names = list(rows["python"])
    print(f"{'kernel':<10}" + "".join(f"{n:>14}" for n in names))
    for impl, r in rows.items():
        print(f"{impl:<10}" + "".join(f"{r[n]:>13.4f}s" for n in names))
    if "cython" in rows:
        print(f"{'speedup':<10}" + "".join(
            f"{rows['python'][n] / rows['cython'][n]:>13.1f}x" for n in names))
    print(f"(xi_fast n={args.n}, renewal reps={args.reps}, enumeration depth={args.depth})")


if __name__ == "__main__":
    main()
