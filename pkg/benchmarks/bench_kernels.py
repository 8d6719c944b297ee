"""Compare the compiled and pure-Python kernels on identical inputs.

    python benchmarks/bench_kernels.py [--repeat 3] [--rows 200000]
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from liquidproxy import kernels


def cases(rows: int):
    rng = np.random.default_rng(0)
    n = 50
    maps = rng.integers(0, n, size=(rows, n), dtype=np.int64)
    values = rng.integers(0, 2, size=(rows, n), dtype=np.uint8)
    small = max(1, rows // 20)
    return [
        ("count_fixpoint_free_proxy(6)", lambda k: k.count_fixpoint_free_proxy(6)),
        ("count_all_hung_default(5)", lambda k: k.count_all_hung_default(5)),
        (f"count_fixpoint_free_rows({rows}x{n})", lambda k: k.count_fixpoint_free_rows(maps)),
        (f"count_all_hung_rows({small}x{n})",
         lambda k: k.count_all_hung_rows(maps[:small], values[:small])),
    ]


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--rows", type=int, default=200_000)
    args = ap.parse_args(argv)
    if kernels.compiled is None:
        raise SystemExit("compiled kernels unavailable; build with `pip install -e . --no-build-isolation`")
    print(f"{'kernel':40s} {'cython s':>10s} {'python s':>10s} {'speedup':>8s}")
    for name, fn in cases(args.rows):
        assert fn(kernels.compiled) == fn(kernels.python), name
        tc = min(timeit.repeat(lambda: fn(kernels.compiled), number=1, repeat=args.repeat))
        tp = min(timeit.repeat(lambda: fn(kernels.python), number=1, repeat=args.repeat))
        print(f"{name:40s} {tc:10.4f} {tp:10.4f} {tp / tc:8.1f}x")


if __name__ == "__main__":
    main()
