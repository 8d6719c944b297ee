"""Binary aggregation with abstentions: quota rules, undecisiveness and axiom checkers.

An incomplete opinion is a tuple over issues with entries ``0``, ``1`` or
``None`` (abstention); a profile is a tuple of opinions, one per agent.
All property checkers quantify over the full space of profiles of
consistent and closed opinions, enumerated lexicographically, so the
reported witness is always the first counterexample in that order.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Sequence

from .logic import Constraint

Opinion = tuple  # tuple[int | None, ...]
Profile = tuple  # tuple[Opinion, ...]

DEFAULT_BUDGET = 10 ** 7

PROPERTIES = ("unanimous", "anonymous", "monotonic", "independent", "neutral",
              "responsive", "unbiased", "rational", "oligarchic")


class BudgetExceeded(RuntimeError):
    """The requested exhaustive enumeration is larger than the budget allows."""


class QuotaError(ValueError):
    """Quotas outside (0, 1] or jointly allowing acceptance and rejection."""


def default_budget() -> int:
    return int(os.environ.get("LIQUIDPROXY_BUDGET", DEFAULT_BUDGET))


@dataclass(frozen=True)
class Structure:
    """A binary aggregation structure: ``n`` agents, issues and constraint ``gamma``."""
    n: int
    gamma: Constraint

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need at least one agent")

    @property
    def m(self) -> int:
        return self.gamma.m

    @classmethod
    def independent(cls, n: int, m: int) -> "Structure":
        return cls(n, Constraint.tautology(m))

    def space_size(self) -> int:
        return len(self.gamma.rational_opinions) ** self.n

    def profiles(self, budget: int | None = None) -> Iterator[Profile]:
        """Every profile of individually rational opinions, lexicographically."""
        budget = default_budget() if budget is None else budget
        size = self.space_size()
        if size > budget:
            raise BudgetExceeded(f"{size} profiles exceeds budget {budget}")
        return itertools.product(self.gamma.rational_opinions, repeat=self.n)


# -- tallies -----------------------------------------------------------------

def tally(profile: Sequence[Opinion], p: int) -> tuple[int, int]:
    """(number accepting, number rejecting) issue ``p``."""
    acc = rej = 0
    for o in profile:
        v = o[p]
        if v == 1:
            acc += 1
        elif v == 0:
            rej += 1
    return acc, rej


def column(profile: Sequence[Opinion], p: int) -> tuple:
    return tuple(o[p] for o in profile)


def ceil_frac(q: Fraction, k: int) -> int:
    """Exact ceiling of ``q * k``."""
    return -((-q.numerator * k) // q.denominator)


# -- quota specs ---------------------------------------------------------------

def _as_fraction(x) -> Fraction:
    if isinstance(x, float):
        raise QuotaError(f"quota {x!r} must be given exactly (int, Fraction or 'a/b' string)")
    return Fraction(x)


@dataclass(frozen=True)
class QuotaSpec:
    """Per-issue acceptance quotas ``q1`` and rejection quotas ``q0``."""
    q1: tuple[Fraction, ...]
    q0: tuple[Fraction, ...]

    def __post_init__(self):
        q1 = tuple(_as_fraction(x) for x in self.q1)
        q0 = tuple(_as_fraction(x) for x in self.q0)
        object.__setattr__(self, "q1", q1)
        object.__setattr__(self, "q0", q0)
        if len(q1) != len(q0) or not q1:
            raise QuotaError("q1 and q0 must cover the same non-empty issue set")
        for p, (a, r) in enumerate(zip(q1, q0)):
            if not (0 < a <= 1 and 0 < r <= 1):
                raise QuotaError(f"quotas for issue {p} must lie in (0, 1]: q1={a}, q0={r}")
            if not (a > 1 - r and r > 1 - a):
                raise QuotaError(f"issue {p}: q1={a}, q0={r} allow both acceptance and rejection")

    @classmethod
    def uniform(cls, q1, q0, m: int) -> "QuotaSpec":
        return cls((q1,) * m, (q0,) * m)

    @classmethod
    def symmetric(cls, q, m: int) -> "QuotaSpec":
        return cls.uniform(q, q, m)

    @property
    def m(self) -> int:
        return len(self.q1)

    @property
    def is_uniform(self) -> bool:
        return len(set(self.q1)) == 1 and len(set(self.q0)) == 1

    @property
    def is_symmetric(self) -> bool:
        return self.q1 == self.q0

    def thresholds(self, p: int, voters: int) -> tuple[int, int]:
        return ceil_frac(self.q1[p], voters), ceil_frac(self.q0[p], voters)

    def behaviour(self, p: int, n: int) -> tuple[tuple[int, int], ...]:
        """Integer thresholds for every electorate size 1..n; equal behaviour means equal rule."""
        return tuple(self.thresholds(p, k) for k in range(1, n + 1))

    def effectively_uniform(self, n: int) -> bool:
        return len({self.behaviour(p, n) for p in range(self.m)}) == 1

    def effectively_symmetric(self, n: int) -> bool:
        return all(a == b for p in range(self.m) for a, b in self.behaviour(p, n))

    def __str__(self) -> str:
        if self.is_uniform:
            return f"q1={self.q1[0]},q0={self.q0[0]}"
        return f"q1={[str(x) for x in self.q1]},q0={[str(x) for x in self.q0]}"


def majority_quota_band(n: int) -> tuple[Fraction, Fraction]:
    """Open-closed interval ``(1/2, (n+1)/(2n)]`` of symmetric quotas that realise majority."""
    if n < 1:
        raise ValueError("n must be positive")
    return Fraction(1, 2), Fraction(n + 1, 2 * n)


def exact_majority_band(n: int) -> tuple[Fraction, Fraction]:
    """Largest interval ``(1/2, hi]`` of symmetric quotas whose rule equals ``maj`` for ``n`` voters.

    Only odd electorate sizes constrain the upper end, so ``hi`` is
    ``(t+1)/(2t)`` for the largest odd ``t <= n``; it exceeds ``(n+1)/(2n)``
    whenever ``n`` is even.
    """
    if n < 1:
        raise ValueError("n must be positive")
    t = n if n % 2 else n - 1
    return Fraction(1, 2), Fraction(t + 1, 2 * t)


def in_majority_band(q: Fraction, n: int) -> bool:
    lo, hi = majority_quota_band(n)
    return lo < q <= hi


# -- aggregators -------------------------------------------------------------

@dataclass(frozen=True)
class Aggregator:
    name: str
    func: Callable[[Profile], Opinion] = field(repr=False, compare=False)

    def __call__(self, profile: Profile) -> Opinion:
        return self.func(profile)


def majority_value(acc: int, rej: int) -> int | None:
    if acc > rej:
        return 1
    if rej > acc:
        return 0
    return None


def majority(profile: Sequence[Opinion]) -> Opinion:
    """Issue-wise strict majority of the non-abstaining voters; ties give ``None``."""
    m = len(profile[0])
    return tuple(majority_value(*tally(profile, p)) for p in range(m))


def quota_value(spec: QuotaSpec, p: int, acc: int, rej: int) -> int | None:
    voters = acc + rej
    if voters == 0:
        return None
    t1, t0 = spec.thresholds(p, voters)
    if acc >= t1:
        return 1
    if rej >= t0:
        return 0
    return None


def quota_rule(spec: QuotaSpec) -> Aggregator:
    def rule(profile: Sequence[Opinion]) -> Opinion:
        return tuple(quota_value(spec, p, *tally(profile, p)) for p in range(spec.m))
    return Aggregator(f"quota[{spec}]", rule)


MAJ = Aggregator("maj", majority)


def constant_abstain(m: int) -> Aggregator:
    return Aggregator("const-*", lambda profile: (None,) * m)


def dictatorship(d: int) -> Aggregator:
    return Aggregator(f"dictator[{d}]", lambda profile: tuple(profile[d]))


def check_opinion(opinion: Sequence[int | None], gamma: Constraint) -> dict:
    consistent, closed = gamma.opinion_status(opinion)
    return {"consistent": consistent, "closed": closed}


def undecisiveness(agg: Callable, structure: Structure, p: int, budget: int | None = None) -> int:
    """Number of individually rational profiles on which ``agg`` abstains on issue ``p``."""
    return sum(1 for prof in structure.profiles(budget) if agg(prof)[p] is None)


def undecisiveness_all(agg: Callable, structure: Structure, budget: int | None = None) -> list[int]:
    counts = [0] * structure.m
    for prof in structure.profiles(budget):
        out = agg(prof)
        for p, v in enumerate(out):
            if v is None:
                counts[p] += 1
    return counts


# -- property checkers -------------------------------------------------------

@dataclass
class PropertyResult:
    prop: str
    holds: bool
    witness: dict | None = None

    def __bool__(self) -> bool:
        return self.holds

    def as_dict(self) -> dict:
        return {"property": self.prop, "holds": self.holds, "witness": _jsonable(self.witness)}


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, frozenset, set)):
        return [_jsonable(v) for v in x]
    if x is None:
        return "*"
    if isinstance(x, Fraction):
        return str(x)
    return x


def _outputs(agg, structure, budget):
    return [(prof, tuple(agg(prof))) for prof in structure.profiles(budget)]


def _unanimous(agg, structure, budget, table):
    for prof, out in table:
        for p in range(structure.m):
            col = column(prof, p)
            if len(set(col)) == 1 and out[p] != col[0]:
                return {"issue": p, "profile": prof, "output": out}
    return None


def _anonymous(agg, structure, budget, table):
    # adjacent transpositions generate every permutation
    outputs = dict(table)
    for prof, out in table:
        for i in range(structure.n - 1):
            swapped = list(prof)
            swapped[i], swapped[i + 1] = swapped[i + 1], swapped[i]
            swapped = tuple(swapped)
            if outputs[swapped] != out:
                return {"profile": prof, "permuted": swapped,
                        "output": out, "permuted_output": outputs[swapped]}
    return None


def _monotonic(agg, structure, budget, table):
    outputs = dict(table)
    ops = structure.gamma.rational_opinions
    for prof, out in table:
        for i in range(structure.n):
            for alt in ops:
                if alt == prof[i]:
                    continue
                other = prof[:i] + (alt,) + prof[i + 1:]
                new = outputs[other]
                for p in range(structure.m):
                    old_v, new_v = prof[i][p], alt[p]
                    if out[p] == 1 and old_v != 1 and new_v in (1, None) and new[p] != 1:
                        return {"issue": p, "agent": i, "profile": prof, "changed": other,
                                "output": out, "changed_output": new}
                    if out[p] == 0 and old_v != 0 and new_v in (0, None) and new[p] != 0:
                        return {"issue": p, "agent": i, "profile": prof, "changed": other,
                                "output": out, "changed_output": new}
    return None


def _independent(agg, structure, budget, table):
    for p in range(structure.m):
        seen: dict[tuple, tuple] = {}
        for prof, out in table:
            col = column(prof, p)
            if col in seen:
                first, first_out = seen[col]
                if first_out[p] != out[p]:
                    return {"issue": p, "profile": first, "other": prof,
                            "output": first_out, "other_output": out}
            else:
                seen[col] = (prof, out)
    return None


def _neutral(agg, structure, budget, table):
    for prof, out in table:
        for p, q in itertools.combinations(range(structure.m), 2):
            if column(prof, p) == column(prof, q) and out[p] != out[q]:
                return {"issues": (p, q), "profile": prof, "output": out}
    return None


def _responsive(agg, structure, budget, table):
    for p in range(structure.m):
        values = {out[p] for _, out in table}
        if 1 not in values or 0 not in values:
            return {"issue": p, "attained": sorted(values, key=lambda v: (v is None, v))}
    return None


def _swap(col):
    return tuple(None if v is None else 1 - v for v in col)


def _unbiased(agg, structure, budget, table):
    for p in range(structure.m):
        by_col: dict[tuple, list] = {}
        for prof, out in table:
            by_col.setdefault(column(prof, p), []).append((prof, out))
        for prof, out in table:
            for other, other_out in by_col.get(_swap(column(prof, p)), ()):
                if (out[p] == 1) != (other_out[p] == 0):
                    return {"issue": p, "profile": prof, "reversed": other,
                            "output": out, "reversed_output": other_out}
    return None


def _rational(agg, structure, budget, table):
    for prof, out in table:
        consistent, closed = structure.gamma.opinion_status(out)
        if not (consistent and closed):
            return {"profile": prof, "output": out, "consistent": consistent, "closed": closed}
    return None


def oligarchs(agg, structure: Structure, p: int, budget: int | None = None,
              table=None) -> list[frozenset[int]]:
    """Every non-empty coalition that is a ``p``-oligarchy for ``agg``."""
    table = table if table is not None else _outputs(agg, structure, budget)
    found = []
    for size in range(1, structure.n + 1):
        for group in itertools.combinations(range(structure.n), size):
            ok = True
            for prof, out in table:
                for x in (0, 1):
                    if (out[p] == x) != all(prof[i][p] == x for i in group):
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                found.append(frozenset(group))
    return found


def _oligarchic(agg, structure, budget, table):
    common = None
    for p in range(structure.m):
        groups = set(oligarchs(agg, structure, p, table=table))
        common = groups if common is None else common & groups
        if not common:
            return {"issue": p, "reason": "no coalition is an oligarchy on every issue so far"}
    return None


_CHECKERS = {
    "unanimous": _unanimous,
    "anonymous": _anonymous,
    "monotonic": _monotonic,
    "independent": _independent,
    "neutral": _neutral,
    "responsive": _responsive,
    "unbiased": _unbiased,
    "rational": _rational,
    "oligarchic": _oligarchic,
}


def check_property(agg: Callable, prop: str, structure: Structure,
                   budget: int | None = None, table=None) -> PropertyResult:
    """Decide one aggregator property by exhaustive enumeration of the profile space."""
    try:
        checker = _CHECKERS[prop]
    except KeyError:
        raise ValueError(f"unknown property {prop!r}; choose from {PROPERTIES}") from None
    if table is None:
        table = _outputs(agg, structure, budget)
    witness = checker(agg, structure, budget, table)
    return PropertyResult(prop, witness is None, witness)


def check_properties(agg: Callable, structure: Structure, props: Sequence[str] = PROPERTIES,
                     budget: int | None = None) -> dict[str, PropertyResult]:
    table = _outputs(agg, structure, budget)
    return {prop: check_property(agg, prop, structure, budget, table) for prop in props}


# -- claim drivers -------------------------------------------------------------

def verify_lemma1(structure: Structure, grid: Sequence[Fraction],
                  budget: int | None = None) -> dict:
    """Undecisiveness of symmetric uniform quota rules over ``grid``.

    Checks that the minimisers are exactly the quotas inside the majority
    band and that those rules coincide with ``maj`` on every profile.
    """
    profiles = list(structure.profiles(budget))
    maj_out = [majority(prof) for prof in profiles]
    rows = []
    for q in grid:
        spec = QuotaSpec.symmetric(q, structure.m)
        rule = quota_rule(spec)
        outs = [rule(prof) for prof in profiles]
        und = [sum(1 for o in outs if o[p] is None) for p in range(structure.m)]
        rows.append({"q": q, "undecisiveness": und,
                     "in_band": in_majority_band(Fraction(q), structure.n),
                     "equals_maj": outs == maj_out})
    ok = True
    argmin = []
    for p in range(structure.m):
        best = min(r["undecisiveness"][p] for r in rows)
        winners = [r["q"] for r in rows if r["undecisiveness"][p] == best]
        argmin.append(winners)
        band = [r["q"] for r in rows if r["in_band"]]
        ok &= sorted(winners) == sorted(band)
    ok &= all(r["equals_maj"] for r in rows if r["in_band"])
    return {"claim": "lemma1", "n": structure.n, "m": structure.m, "holds": ok,
            "argmin": argmin, "rows": rows, "profiles": len(profiles)}


def verify_prop1(structure: Structure, budget: int | None = None) -> dict:
    """Majority is rational on simple agendas; elsewhere search for a witness."""
    from .logic import is_simple
    simple = is_simple(structure.gamma)
    result = check_property(MAJ, "rational", structure, budget)
    return {"claim": "prop1", "simple": simple, "maj_rational": result.holds,
            "holds": result.holds or not simple,
            "witness": result.witness}
