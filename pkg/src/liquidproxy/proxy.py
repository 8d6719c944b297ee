"""Delegable proxy voting: delegation graphs, gurus, weights and proxy aggregators.

A proxy opinion assigns to every issue either a value (``0``/``1``) or a
:class:`Delegate` naming the trustee. Each issue's delegations form an
endomap on the agents (voters map to themselves), whose fixpoints are the
gurus.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterator, NamedTuple, Sequence

from .aggregation import (Aggregator, BudgetExceeded, QuotaSpec, Structure, ceil_frac,
                          default_budget, majority, majority_value)
from .logic import Constraint, Literal


class Delegate(NamedTuple):
    to: int

    def __repr__(self) -> str:
        return f"->{self.to}"


class ProxyProfileError(ValueError):
    pass


def is_value(entry) -> bool:
    return not isinstance(entry, Delegate)


def validate_profile(profile: Sequence[Sequence]) -> None:
    n = len(profile)
    if n == 0:
        raise ProxyProfileError("empty profile")
    m = len(profile[0])
    for i, op in enumerate(profile):
        if len(op) != m:
            raise ProxyProfileError(f"agent {i} has {len(op)} entries, expected {m}")
        for p, e in enumerate(op):
            if isinstance(e, Delegate):
                if e.to == i:
                    raise ProxyProfileError(f"agent {i} delegates to itself on issue {p}")
                if not 0 <= e.to < n:
                    raise ProxyProfileError(f"agent {i} delegates to unknown agent {e.to}")
            elif e not in (0, 1):
                raise ProxyProfileError(f"agent {i}, issue {p}: bad entry {e!r}")


def endomap(profile: Sequence[Sequence], p: int) -> list[int]:
    return [e.to if isinstance(e, Delegate) else i for i, e in enumerate(op[p] for op in profile)]


class DelegationGraph:
    """The functional graph of one issue, with gurus, cycles and weights precomputed."""

    def __init__(self, succ: Sequence[int]):
        self.succ = tuple(succ)
        n = len(self.succ)
        if any(not 0 <= j < n for j in self.succ):
            raise ValueError("endomap must map agents into 0..n-1")
        self.n = n
        # cycle decomposition by pointer chasing; state 0 unseen, 1 on stack, 2 done
        state = [0] * n
        cycle_of = [-1] * n
        cycles: list[tuple[int, ...]] = []
        for start in range(n):
            path = []
            x = start
            while state[x] == 0:
                state[x] = 1
                path.append(x)
                x = self.succ[x]
            if state[x] == 1:
                k = path.index(x)
                cyc = tuple(path[k:])
                for a in cyc:
                    cycle_of[a] = len(cycles)
                cycles.append(cyc)
                path = path[:k]
            target = cycle_of[x]
            for a in path:
                cycle_of[a] = target
            for a in path:
                state[a] = 2
            for a in cycles[target] if target >= 0 else ():
                state[a] = 2
        self.cycles = cycles
        self.basin = tuple(cycle_of)
        on_cycle = [False] * n
        for cyc in cycles:
            for a in cyc:
                on_cycle[a] = True
        self.on_cycle = tuple(on_cycle)

    @classmethod
    def from_profile(cls, profile: Sequence[Sequence], p: int) -> "DelegationGraph":
        return cls(endomap(profile, p))

    @cached_property
    def depth(self) -> tuple[int, ...]:
        """Distance from each agent to the nearest agent on a cycle."""
        out = [-1] * self.n
        for i in range(self.n):
            if self.on_cycle[i]:
                out[i] = 0

        def d(i: int) -> int:
            chain = []
            while out[i] < 0:
                chain.append(i)
                i = self.succ[i]
            base = out[i]
            for k, a in enumerate(reversed(chain), 1):
                out[a] = base + k
            return out[chain[0]] if chain else base

        for i in range(self.n):
            d(i)
        return tuple(out)

    @property
    def max_depth(self) -> int:
        return max(self.depth)

    @cached_property
    def gurus(self) -> tuple[int | None, ...]:
        """Guru of every agent: the fixpoint its delegation path ends in, else ``None``."""
        return tuple(c[0] if len(c) == 1 else None for c in (self.cycles[b] for b in self.basin))

    def guru(self, i: int) -> int | None:
        return self.gurus[i]

    @property
    def guru_set(self) -> list[int]:
        return [c[0] for c in self.cycles if len(c) == 1]

    @property
    def void(self) -> bool:
        return not self.guru_set

    @cached_property
    def weights(self) -> tuple[int, ...]:
        """Indegree of each agent in the reflexive-transitive closure of the delegation relation."""
        w = [0] * self.n
        for j in range(self.n):
            seen = set()
            x = j
            while x not in seen:
                seen.add(x)
                w[x] += 1
                x = self.succ[x]
        return tuple(w)

    def weight(self, i: int) -> int:
        return self.weights[i]

    @cached_property
    def basin_sizes(self) -> tuple[int, ...]:
        """Number of agents whose delegation path reaches each cycle."""
        sizes = [0] * len(self.cycles)
        for b in self.basin:
            sizes[b] += 1
        return tuple(sizes)

    def distance(self, j: int, i: int) -> int | None:
        """Length of the delegation path from ``j`` to ``i``, if ``i`` is reachable."""
        seen = set()
        x, k = j, 0
        while x not in seen:
            if x == i:
                return k
            seen.add(x)
            x = self.succ[x]
            k += 1
        return None

    def viscous_weight(self, i: int) -> Fraction:
        """Distance-decayed weight: self counts 1, a delegator at distance l counts 1/l."""
        total = Fraction(0)
        for j in range(self.n):
            d = self.distance(j, i)
            if d is not None:
                total += 1 if d == 0 else Fraction(1, d)
        return total


def build_graph(profile: Sequence[Sequence], p: int) -> DelegationGraph:
    return DelegationGraph.from_profile(profile, p)


def graphs(profile: Sequence[Sequence]) -> list[DelegationGraph]:
    return [DelegationGraph.from_profile(profile, p) for p in range(len(profile[0]))]


# -- translations ------------------------------------------------------------

def translate_t(profile: Sequence[Sequence]) -> tuple:
    """Replace every entry by the value of the agent's guru (``None`` when guru-less)."""
    m = len(profile[0])
    cols = []
    for p in range(m):
        g = DelegationGraph.from_profile(profile, p)
        cols.append([None if k is None else profile[k][p] for k in g.gurus])
    return tuple(tuple(cols[p][i] for p in range(m)) for i in range(len(profile)))


def abstainer_cycles(profile: Sequence[Sequence[int | None]], p: int) -> list[int]:
    return [i for i, o in enumerate(profile) if o[p] is None]


def embed_s(profile: Sequence[Sequence[int | None]], dummy: bool = False) -> tuple:
    """Encode an incomplete profile as a proxy profile.

    Abstainers on an issue delegate round-robin among themselves (in agent
    order), so each abstention becomes a guru-less cycle. An issue with a
    single abstainer cannot be encoded without self-delegation; with
    ``dummy=True`` extra agents abstaining everywhere are appended (one if
    every issue already has an abstainer, otherwise two).
    """
    profile = [tuple(o) for o in profile]
    m = len(profile[0])
    counts = [sum(1 for o in profile if o[p] is None) for p in range(m)]
    if any(c == 1 for c in counts):
        if not dummy:
            bad = [p for p, c in enumerate(counts) if c == 1]
            raise ProxyProfileError(f"issues {bad} have a single abstainer; enable the dummy extension")
        extra = 1 if min(counts) >= 1 else 2
        profile += [(None,) * m] * extra
    out = [list(o) for o in profile]
    for p in range(m):
        ab = abstainer_cycles(profile, p)
        for k, i in enumerate(ab):
            out[i][p] = Delegate(ab[(k + 1) % len(ab)])
    return tuple(tuple(o) for o in out)


# -- proxy aggregators -------------------------------------------------------

def guru_tally(graph: DelegationGraph, values: Sequence, weight=None) -> tuple:
    """Total weight of gurus accepting and rejecting, given the column of entries."""
    acc = rej = 0
    for g in graph.guru_set:
        w = graph.weights[g] if weight is None else weight(graph, g)
        if values[g] == 1:
            acc += w
        else:
            rej += w
    return acc, rej


def pv_majority(profile: Sequence[Sequence]) -> tuple:
    out = []
    for p in range(len(profile[0])):
        g = DelegationGraph.from_profile(profile, p)
        out.append(majority_value(*guru_tally(g, [o[p] for o in profile])))
    return tuple(out)


def pv_quota(spec: QuotaSpec) -> Aggregator:
    """Proxy quota rule: guru weights against the quotas of the represented electorate."""
    def rule(profile):
        out = []
        for p in range(spec.m):
            g = DelegationGraph.from_profile(profile, p)
            acc, rej = guru_tally(g, [o[p] for o in profile])
            total = acc + rej
            if total == 0:
                out.append(None)
            elif acc >= ceil_frac(spec.q1[p], total):
                out.append(1)
            elif rej >= ceil_frac(spec.q0[p], total):
                out.append(0)
            else:
                out.append(None)
        return tuple(out)
    return Aggregator(f"pv-quota[{spec}]", rule)


def pv_viscous_majority(profile: Sequence[Sequence]) -> tuple:
    out = []
    for p in range(len(profile[0])):
        g = DelegationGraph.from_profile(profile, p)
        acc, rej = guru_tally(g, [o[p] for o in profile], weight=lambda gr, i: gr.viscous_weight(i))
        out.append(majority_value(acc, rej))
    return tuple(out)


PV_MAJ = Aggregator("pv-maj", pv_majority)
PV_VISCOUS = Aggregator("pv-viscous-maj", pv_viscous_majority)


def compose_t(agg: Callable) -> Aggregator:
    """The proxy aggregator ``agg`` applied after the guru translation."""
    name = getattr(agg, "name", getattr(agg, "__name__", "F"))
    return Aggregator(f"{name}.t", lambda profile: tuple(agg(translate_t(profile))))


# -- individual rationality --------------------------------------------------

def effective_literals(profile: Sequence[Sequence], i: int,
                       graphs_: Sequence[DelegationGraph] | None = None) -> list[Literal]:
    gs = graphs_ if graphs_ is not None else graphs(profile)
    lits = []
    for p, g in enumerate(gs):
        k = g.gurus[i]
        if k is not None:
            lits.append(Literal(p, bool(profile[k][p])))
    return lits


def individually_rational(profile: Sequence[Sequence], i: int, gamma: Constraint,
                          graphs_: Sequence[DelegationGraph] | None = None) -> bool:
    """Guru values of agent ``i`` are consistent with gamma and closed under consequence."""
    lits = effective_literals(profile, i, graphs_)
    values = [None] * gamma.m
    for lit in lits:
        values[lit.issue] = int(lit.positive)
    return gamma.is_rational(values)


def profile_rational(profile: Sequence[Sequence], gamma: Constraint) -> bool:
    gs = graphs(profile)
    return all(individually_rational(profile, i, gamma, gs) for i in range(len(profile)))


# -- enumeration ---------------------------------------------------------------

def entry_options(n: int, i: int) -> list:
    return [0, 1] + [Delegate(j) for j in range(n) if j != i]


def proxy_space_size(n: int, m: int) -> int:
    return (n + 1) ** (n * m)


def proxy_profiles(n: int, m: int, budget: int | None = None) -> Iterator[tuple]:
    """Every proxy profile of ``n`` agents on ``m`` issues."""
    budget = default_budget() if budget is None else budget
    size = proxy_space_size(n, m)
    if size > budget:
        raise BudgetExceeded(f"{size} proxy profiles exceeds budget {budget}")
    per_agent = [list(itertools.product(entry_options(n, i), repeat=m)) for i in range(n)]
    return itertools.product(*per_agent)


@dataclass
class OmovReport:
    holds: bool
    checked: int
    skipped_irrational: int
    witness: dict | None = None

    def as_dict(self) -> dict:
        return {"holds": self.holds, "checked": self.checked,
                "skipped_irrational": self.skipped_irrational, "witness": self.witness}


def one_man_one_vote_check(pv: Callable, agg: Callable, structure: Structure,
                           budget: int | None = None, stop_at_first: bool = True) -> OmovReport:
    """Does ``pv(O) == agg(t(O))`` on every individually rational proxy profile?"""
    gamma = structure.gamma
    checked = skipped = 0
    witness = None
    for prof in proxy_profiles(structure.n, structure.m, budget):
        if not gamma.is_tautology and not profile_rational(prof, gamma):
            skipped += 1
            continue
        checked += 1
        lhs = tuple(pv(prof))
        rhs = tuple(agg(translate_t(prof)))
        if lhs != rhs and witness is None:
            witness = {"profile": [[repr(e) if isinstance(e, Delegate) else e for e in o] for o in prof],
                       "pv": lhs, "f_of_t": rhs}
            if stop_at_first:
                break
    return OmovReport(witness is None, checked, skipped, witness)


def incomplete_profiles(n: int, m: int, budget: int | None = None) -> Iterator[tuple]:
    budget = default_budget() if budget is None else budget
    if 3 ** (n * m) > budget:
        raise BudgetExceeded(f"{3 ** (n * m)} profiles exceeds budget {budget}")
    return itertools.product(itertools.product((0, 1, None), repeat=m), repeat=n)


def meets_embedding_precondition(profile: Sequence[Sequence[int | None]]) -> bool:
    m = len(profile[0])
    return all(sum(1 for o in profile if o[p] is None) != 1 for p in range(m))


__all__ = [
    "Delegate", "DelegationGraph", "ProxyProfileError", "build_graph", "graphs", "translate_t",
    "embed_s", "pv_majority", "pv_quota", "pv_viscous_majority", "PV_MAJ", "PV_VISCOUS",
    "compose_t", "individually_rational", "profile_rational", "proxy_profiles",
    "one_man_one_vote_check", "incomplete_profiles", "meets_embedding_precondition",
    "validate_profile", "endomap", "majority",
]
