"""Delegable proxy with default values.

Every agent submits a value *and* a trustee (possibly itself) for each
issue. Cycles of the trustee map, not only self-loops, become opinion
sources: each cycle speaks with the majority of its members' defaults and
carries the weight of every agent whose delegation path reaches it.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence

from .aggregation import BudgetExceeded, default_budget, majority_value
from .proxy import DelegationGraph


class DefaultEntry(NamedTuple):
    value: int
    trustee: int


def validate_default_profile(profile: Sequence[Sequence[DefaultEntry]]) -> None:
    n = len(profile)
    if n == 0:
        raise ValueError("empty profile")
    m = len(profile[0])
    for i, op in enumerate(profile):
        if len(op) != m:
            raise ValueError(f"agent {i} has {len(op)} entries, expected {m}")
        for p, (v, d) in enumerate(op):
            if v not in (0, 1):
                raise ValueError(f"agent {i}, issue {p}: value must be 0 or 1")
            if not 0 <= d < n:
                raise ValueError(f"agent {i}, issue {p}: unknown trustee {d}")


@dataclass
class CycleDecomposition:
    graph: DelegationGraph
    cycles: list[tuple[int, ...]]
    accept: list[int]
    reject: list[int]
    weight: list[int]

    def verdict(self, k: int) -> int | None:
        return majority_value(self.accept[k], self.reject[k])

    def hung(self, k: int) -> bool:
        return self.accept[k] == self.reject[k]


def decompose(profile: Sequence[Sequence[DefaultEntry]], p: int) -> CycleDecomposition:
    g = DelegationGraph([op[p][1] for op in profile])
    acc, rej = [], []
    for cyc in g.cycles:
        a = sum(profile[i][p][0] for i in cyc)
        acc.append(a)
        rej.append(len(cyc) - a)
    return CycleDecomposition(g, g.cycles, acc, rej, list(g.basin_sizes))


def pv_maj_default(profile: Sequence[Sequence[DefaultEntry]]) -> tuple:
    """Cycle-weighted proxy majority; hung cycles back neither side."""
    out = []
    for p in range(len(profile[0])):
        dec = decompose(profile, p)
        acc = sum(w for k, w in enumerate(dec.weight) if dec.verdict(k) == 1)
        rej = sum(w for k, w in enumerate(dec.weight) if dec.verdict(k) == 0)
        out.append(majority_value(acc, rej))
    return tuple(out)


def translate_t_prime(profile: Sequence[Sequence[DefaultEntry]]) -> tuple:
    """Each agent takes the majority default of the cycle it reaches (``None`` if hung)."""
    m = len(profile[0])
    cols = []
    for p in range(m):
        dec = decompose(profile, p)
        cols.append([dec.verdict(b) for b in dec.graph.basin])
    return tuple(tuple(cols[p][i] for p in range(m)) for i in range(len(profile)))


def plain_equivalent(profile: Sequence[Sequence[DefaultEntry]]):
    """The plain proxy profile obtained when self-trustees vote their default and others delegate."""
    from .proxy import Delegate
    return tuple(tuple(v if d == i else Delegate(d) for v, d in op) for i, op in enumerate(profile))


def default_profiles(n: int, m: int, budget: int | None = None) -> Iterator[tuple]:
    budget = default_budget() if budget is None else budget
    size = (2 * n) ** (n * m)
    if size > budget:
        raise BudgetExceeded(f"{size} default profiles exceeds budget {budget}")
    entries = [DefaultEntry(v, d) for v in (0, 1) for d in range(n)]
    return itertools.product(itertools.product(entries, repeat=m), repeat=n)
