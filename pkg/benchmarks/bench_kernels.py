"""Compare the compiled kernels with the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5] [--json out.json]

Each compiled kernel runs on the same inputs as its numpy counterpart; the
table reports the best-of-N wall time, the speedup and the max deviation
between results. (Series multiplication has no compiled version: numpy's
convolution is faster.)
"""
import argparse
import json
import sys
import timeit

import numpy as np

from meroclass import _kernels_py as py

try:
    from meroclass import _ckernels as cy
except ImportError:
    cy = None


def cases(rng):
    n = 512
    a = rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)
    a[0] = 4.0
    # geometric decay keeps the reciprocal's coefficients bounded
    decaying = a * 0.5 ** np.arange(n + 1)
    zs = 0.9 * np.exp(2j * np.pi * rng.random(20_000))
    t = 2 * np.pi * np.arange(2049) / 2048
    curve = np.exp(1j * t) * (1 + 0.3 * np.cos(3 * t))
    curve[-1] = curve[0]
    scale = np.ones_like(curve)
    pts = 0.5 * (rng.normal(size=2000) + 1j * rng.normal(size=2000))
    cz = rng.normal(size=20_000) + 1j * rng.normal(size=20_000)
    return {
        "series_reciprocal (N=512)": ("series_reciprocal", (decaying, n)),
        "horner (deg 512, 20k pts)": ("horner", (a[:513] / 10, zs)),
        "winding_numbers (2048 seg, 2k pts)": ("winding_numbers", (curve, scale, pts)),
        "find_collision (20k pts)": ("find_collision", (cz, cz**2, 1e-9, 1e-6)),
    }


def deviation(x, y):
    if x is None or y is None:
        return 0.0 if x is y else float("inf")
    if isinstance(x, tuple):
        return 0.0 if set(x) == set(y) else float("inf")
    return float(np.max(np.abs(np.asarray(x) - np.asarray(y))))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", help="also write results to this file")
    args = ap.parse_args(argv)
    if cy is None:
        print("compiled extension not built; nothing to compare", file=sys.stderr)
        return 1
    rng = np.random.default_rng(args.seed)
    rows = []
    print(f"{'kernel':38s} {'python [ms]':>12s} {'cython [ms]':>12s} {'speedup':>8s} {'max dev':>10s}")
    for label, (name, inputs) in cases(rng).items():
        fp, fc = getattr(py, name), getattr(cy, name)
        tp = min(timeit.repeat(lambda: fp(*inputs), number=1, repeat=args.repeat))
        tc = min(timeit.repeat(lambda: fc(*inputs), number=1, repeat=args.repeat))
        dev = deviation(fp(*inputs), fc(*inputs))
        rows.append({"kernel": label, "python_s": tp, "cython_s": tc, "speedup": tp / tc, "max_dev": dev})
        print(f"{label:38s} {1e3 * tp:12.3f} {1e3 * tc:12.3f} {tp / tc:8.1f} {dev:10.2e}")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(rows, fh, indent=2)
    return 0


if __name__ == "__main__":
    sys.exit(main())
