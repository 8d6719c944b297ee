"""Pure-Python versions of the compiled kernels (same signatures, same results)."""
from __future__ import annotations

import itertools

import numpy as np


def _has_fixpoint(row) -> bool:
    return any(row[i] == i for i in range(len(row)))


def _cycles(row) -> list[list[int]]:
    n = len(row)
    color = [-1] * n
    out = []
    for s in range(n):
        x = s
        while color[x] == -1:
            color[x] = s
            x = row[x]
        if color[x] != s:
            continue
        cyc = [x]
        y = row[x]
        while y != x:
            cyc.append(y)
            y = row[y]
        out.append(cyc)
    return out


def _all_hung(row, val) -> bool:
    for cyc in _cycles(row):
        if len(cyc) % 2 or 2 * sum(int(val[i]) for i in cyc) != len(cyc):
            return False
    return True


def count_fixpoint_free_rows(maps: np.ndarray) -> int:
    # vectorised over rows; equivalent to the per-row scan
    maps = np.asarray(maps)
    idx = np.arange(maps.shape[1])
    return int(np.count_nonzero(~(maps == idx).any(axis=1)))


def count_all_hung_rows(maps: np.ndarray, values: np.ndarray) -> int:
    return sum(1 for row, val in zip(maps.tolist(), values.tolist()) if _all_hung(row, val))


def count_fixpoint_free_proxy(n: int) -> int:
    """Enumerate all (n+1)**n single-issue proxy profiles; count those without a guru."""
    count = 0
    for opts in itertools.product(range(n + 1), repeat=n):
        succ = [i if o < 2 else (o - 2 if o - 2 < i else o - 1) for i, o in enumerate(opts)]
        if not _has_fixpoint(succ):
            count += 1
    return count


def count_all_hung_default(n: int) -> int:
    """Enumerate all 2**n * n**n default profiles; count those whose cycles are all even and hung."""
    count = 0
    for succ in itertools.product(range(n), repeat=n):
        cycles = _cycles(succ)
        if any(len(c) % 2 for c in cycles):
            continue
        masks = [(sum(1 << i for i in c), len(c)) for c in cycles]
        for v in range(1 << n):
            if all(2 * bin(v & cm).count("1") == ln for cm, ln in masks):
                count += 1
    return count
