"""Individually rational Boolean DeGroot processes (BDPs).

At every round each agent looks at the opinions its trustees currently
hold (one trustee per issue, possibly itself). If those trustee values,
taken together, satisfy the constraint the agent copies all of them;
otherwise it keeps its whole opinion. Updates are synchronous.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

from .aggregation import BudgetExceeded, default_budget, majority
from .logic import Constraint
from .proxy import DelegationGraph

BinaryProfile = tuple  # tuple[tuple[int, ...], ...], agents x issues


class Inconclusive(RuntimeError):
    """The process neither stabilized nor recurred within the step limit."""


class InconsistentStart(ValueError):
    pass


@dataclass(frozen=True)
class DelegationStructure:
    """One trustee endomap per issue."""
    maps: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        maps = tuple(tuple(r) for r in self.maps)
        object.__setattr__(self, "maps", maps)
        if not maps:
            raise ValueError("need at least one issue")
        n = len(maps[0])
        for p, r in enumerate(maps):
            if len(r) != n or any(not 0 <= j < n for j in r):
                raise ValueError(f"issue {p}: trustee map must send 0..{n - 1} into itself")

    @property
    def n(self) -> int:
        return len(self.maps[0])

    @property
    def m(self) -> int:
        return len(self.maps)

    def graph(self, p: int) -> DelegationGraph:
        return DelegationGraph(self.maps[p])

    def diameter_bound(self) -> int:
        """Max over issues of the longest distance from an agent to a cycle."""
        return max(self.graph(p).max_depth for p in range(self.m))


def bdp_step(profile: BinaryProfile, G: DelegationStructure, gamma: Constraint) -> BinaryProfile:
    out = []
    for i, own in enumerate(profile):
        influence = tuple(profile[G.maps[p][i]][p] for p in range(G.m))
        out.append(influence if gamma.is_model(influence) else own)
    return tuple(out)


@dataclass
class BdpOutcome:
    stabilized: bool
    steps: int | None = None
    limit: BinaryProfile | None = None
    period: int | None = None
    preperiod: int | None = None
    orbit: list = field(default_factory=list, repr=False)
    inconclusive: bool = False

    def periodic_entries(self) -> set[tuple[int, int]]:
        """(agent, issue) pairs whose value changes along the recurring cycle of profiles."""
        if self.stabilized or self.period is None:
            return set()
        loop = self.orbit[self.preperiod:self.preperiod + self.period]
        n, m = len(loop[0]), len(loop[0][0])
        return {(i, p) for i in range(n) for p in range(m) if len({o[i][p] for o in loop}) > 1}

    def as_dict(self, include_orbit: bool = False) -> dict:
        d = {"stabilized": self.stabilized, "steps": self.steps,
             "limit": [list(o) for o in self.limit] if self.limit else None,
             "period": self.period, "preperiod": self.preperiod,
             "inconclusive": self.inconclusive}
        if not self.stabilized and self.period:
            d["periodic_entries"] = sorted(self.periodic_entries())
        if include_orbit:
            d["orbit"] = [[list(o) for o in prof] for prof in self.orbit]
        return d


def run(profile: Sequence[Sequence[int]], G: DelegationStructure, gamma: Constraint,
        max_steps: int = 10_000, check: bool = True) -> BdpOutcome:
    """Iterate until a fixed profile, a recurrence, or ``max_steps`` rounds."""
    if max_steps < 1:
        raise ValueError("max_steps must be positive")
    cur = tuple(tuple(o) for o in profile)
    if len(cur) != G.n or any(len(o) != G.m for o in cur):
        raise ValueError("profile shape does not match the delegation structure")
    if check:
        bad = [i for i, o in enumerate(cur) if not gamma.is_model(o)]
        if bad:
            raise InconsistentStart(f"agents {bad} start with opinions violating the constraint")
    seen = {cur: 0}
    orbit = [cur]
    for t in range(max_steps):
        nxt = bdp_step(cur, G, gamma)
        if nxt == cur:
            return BdpOutcome(True, t, cur, orbit=orbit)
        if nxt in seen:
            first = seen[nxt]
            return BdpOutcome(False, period=t + 1 - first, preperiod=first, orbit=orbit)
        seen[nxt] = t + 1
        orbit.append(nxt)
        cur = nxt
    return BdpOutcome(False, orbit=orbit, inconclusive=True)


def theorem3_condition(G: DelegationStructure, profile: Sequence[Sequence[int]]) -> bool:
    """Every delegation cycle of every issue is unanimous on that issue."""
    for p in range(G.m):
        for cyc in G.graph(p).cycles:
            if len({profile[i][p] for i in cyc}) > 1:
                return False
    return True


def transform_then_aggregate(profile, G: DelegationStructure, gamma: Constraint,
                             aggregator: Callable = majority, max_steps: int = 10_000) -> tuple:
    """Run the process, treat entries still oscillating as abstentions, then aggregate."""
    out = run(profile, G, gamma, max_steps)
    if out.stabilized:
        return tuple(aggregator(out.limit))
    if out.inconclusive:
        raise Inconclusive(f"no fixed point or recurrence within {max_steps} steps")
    moving = out.periodic_entries()
    last = out.orbit[-1]
    opinions = tuple(tuple(None if (i, p) in moving else last[i][p] for p in range(G.m))
                     for i in range(G.n))
    return tuple(aggregator(opinions))


def all_structures(n: int, m: int) -> Iterator[DelegationStructure]:
    maps = list(itertools.product(range(n), repeat=n))
    for combo in itertools.product(maps, repeat=m):
        yield DelegationStructure(combo)


def all_binary_profiles(n: int, m: int) -> Iterator[BinaryProfile]:
    return itertools.product(itertools.product((0, 1), repeat=m), repeat=n)


def verify_theorem4(n: int, m: int, budget: int | None = None) -> dict:
    """With an empty constraint: stabilization iff every cycle is unanimous (exhaustive).

    Also checks the step bound whenever the cycle condition holds.
    """
    budget = default_budget() if budget is None else budget
    size = n ** (n * m) * 2 ** (n * m)
    if size > budget:
        raise BudgetExceeded(f"{size} (graph, profile) pairs exceeds budget {budget}")
    gamma = Constraint.tautology(m)
    pairs = agree = bound_ok = stabilized = 0
    discrepancies = []
    horizon = 2 ** (n * m) + 1
    for G in all_structures(n, m):
        bound = G.diameter_bound()
        for prof in all_binary_profiles(n, m):
            pairs += 1
            out = run(prof, G, gamma, max_steps=horizon)
            cond = theorem3_condition(G, prof)
            stabilized += out.stabilized
            if out.stabilized == cond:
                agree += 1
            else:
                discrepancies.append({"maps": G.maps, "profile": prof, "stabilized": out.stabilized})
            if cond and out.stabilized and out.steps <= bound:
                bound_ok += 1
            elif cond:
                discrepancies.append({"maps": G.maps, "profile": prof, "steps": out.steps, "bound": bound})
    return {"claim": "thm4", "n": n, "m": m, "pairs": pairs, "agree": agree,
            "stabilized": stabilized, "bound_checked": bound_ok,
            "holds": not discrepancies, "discrepancies": discrepancies[:10]}
