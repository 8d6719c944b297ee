"""Propositional constraints over a finite issue set.

Formulas are small immutable trees over the connectives ``!`` and ``&``;
the parser also accepts ``|``, ``->`` and ``<->`` and desugars them.
Every semantic service (consistency, entailment, agenda classification)
is answered by exhaustive model enumeration. The models of a constraint
are stored as a bitset over all ``2**m`` valuations, valuation ``v``
being the integer whose bit ``i`` is the truth value of issue ``i``.

Text syntax::

    formula  := iff
    iff      := impl ( "<->" impl )*
    impl     := or ( "->" impl )?          (right associative)
    or       := and ( "|" and )*
    and      := unary ( "&" unary )*
    unary    := "!" unary | atom | "T" | "F" | "(" formula ")"
    atom     := issue label, or "p<k>" for issue index k
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, NamedTuple, Sequence

MAX_ISSUES = 20


class EnumerationLimitError(ValueError):
    """Raised when an agenda is too large for exhaustive model enumeration."""


class FormulaSyntaxError(ValueError):
    pass


# -- formula trees ---------------------------------------------------------

@dataclass(frozen=True)
class Top:
    def __str__(self) -> str:
        return "T"


@dataclass(frozen=True)
class Atom:
    issue: int

    def __str__(self) -> str:
        return f"p{self.issue}"


@dataclass(frozen=True)
class Not:
    arg: "Formula"

    def __str__(self) -> str:
        return f"!{self.arg}"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return f"({self.left} & {self.right})"


Formula = Top | Atom | Not | And
TOP = Top()


def neg(f: Formula) -> Formula:
    return f.arg if isinstance(f, Not) else Not(f)


def conj(*fs: Formula) -> Formula:
    fs = [f for f in fs if not isinstance(f, Top)]
    if not fs:
        return TOP
    out = fs[0]
    for f in fs[1:]:
        out = And(out, f)
    return out


def disj(a: Formula, b: Formula) -> Formula:
    return Not(And(Not(a), Not(b)))


def implies(a: Formula, b: Formula) -> Formula:
    return Not(And(a, Not(b)))


def iff(a: Formula, b: Formula) -> Formula:
    return And(implies(a, b), implies(b, a))


def atoms(f: Formula) -> set[int]:
    if isinstance(f, Atom):
        return {f.issue}
    if isinstance(f, Not):
        return atoms(f.arg)
    if isinstance(f, And):
        return atoms(f.left) | atoms(f.right)
    return set()


def evaluate(f: Formula, valuation: Sequence[int]) -> bool:
    """Truth value of ``f`` under a total 0/1 valuation (tree walk)."""
    if isinstance(f, Top):
        return True
    if isinstance(f, Atom):
        return bool(valuation[f.issue])
    if isinstance(f, Not):
        return not evaluate(f.arg, valuation)
    return evaluate(f.left, valuation) and evaluate(f.right, valuation)


# -- parser ----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(<->|->|[!&|()]|[A-Za-z_][A-Za-z0-9_]*)")
_INDEXED = re.compile(r"p(\d+)$")


def _tokenize(text: str) -> list[str]:
    tokens, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character at {pos}: {text[pos:]!r}")
        tokens.append(m.group(1))
        pos = m.end()
    return tokens


def collect_labels(text: str) -> list[str]:
    """Identifiers of ``text`` in order of first appearance (constants excluded)."""
    seen: list[str] = []
    for tok in _tokenize(text):
        if tok[0].isalpha() or tok[0] == "_":
            if tok not in ("T", "F") and tok not in seen:
                seen.append(tok)
    return seen


def parse_formula(text: str, labels: Sequence[str] | None = None) -> Formula:
    """Parse ``text`` into a formula over the issues named by ``labels``.

    An identifier resolves to the issue with that label; failing that,
    ``p<k>`` resolves to issue ``k``. With ``labels=None`` the labels are
    the identifiers of ``text`` in order of first appearance.
    """
    if labels is None:
        labels = collect_labels(text)
    index = {lab: i for i, lab in enumerate(labels)}
    tokens = _tokenize(text)
    pos = 0

    def peek() -> str | None:
        return tokens[pos] if pos < len(tokens) else None

    def take(expected: str | None = None) -> str:
        nonlocal pos
        tok = peek()
        if tok is None or (expected is not None and tok != expected):
            raise FormulaSyntaxError(f"expected {expected or 'token'} at token {pos} in {text!r}")
        pos += 1
        return tok

    def p_iff() -> Formula:
        f = p_impl()
        while peek() == "<->":
            take()
            f = iff(f, p_impl())
        return f

    def p_impl() -> Formula:
        f = p_or()
        if peek() == "->":
            take()
            return implies(f, p_impl())
        return f

    def p_or() -> Formula:
        f = p_and()
        while peek() == "|":
            take()
            f = disj(f, p_and())
        return f

    def p_and() -> Formula:
        f = p_unary()
        while peek() == "&":
            take()
            f = And(f, p_unary())
        return f

    def p_unary() -> Formula:
        tok = take()
        if tok == "!":
            return Not(p_unary())
        if tok == "(":
            f = p_iff()
            take(")")
            return f
        if tok == "T":
            return TOP
        if tok == "F":
            return Not(TOP)
        if tok in index:
            return Atom(index[tok])
        m = _INDEXED.match(tok)
        if m and int(m.group(1)) < len(labels):
            return Atom(int(m.group(1)))
        raise FormulaSyntaxError(f"unknown issue {tok!r} (issues: {list(labels)})")

    if not tokens:
        raise FormulaSyntaxError("empty formula")
    f = p_iff()
    if pos != len(tokens):
        raise FormulaSyntaxError(f"trailing input after token {pos} in {text!r}")
    return f


def format_formula(f: Formula, labels: Sequence[str] | None = None) -> str:
    def name(i: int) -> str:
        return labels[i] if labels is not None else f"p{i}"

    if isinstance(f, Top):
        return "T"
    if isinstance(f, Atom):
        return name(f.issue)
    if isinstance(f, Not):
        return "!" + format_formula(f.arg, labels)
    return f"({format_formula(f.left, labels)} & {format_formula(f.right, labels)})"


# -- literals and constraints ---------------------------------------------

class Literal(NamedTuple):
    """``+p`` when ``positive`` else ``-p``."""
    issue: int
    positive: bool

    def negate(self) -> "Literal":
        return Literal(self.issue, not self.positive)

    def __str__(self) -> str:
        return ("" if self.positive else "!") + f"p{self.issue}"


def agenda(m: int) -> list[Literal]:
    """The agenda of ``m`` issues: ``p0, !p0, p1, !p1, ...``."""
    return [Literal(i, s) for i in range(m) for s in (True, False)]


def literals_of(values: Sequence[int | None]) -> list[Literal]:
    """Literals expressed by a partial 0/1 assignment (``None`` = abstain)."""
    return [Literal(i, bool(v)) for i, v in enumerate(values) if v is not None]


def _atom_mask(i: int, m: int) -> int:
    # bit v set iff valuation v has issue i true: a block pattern tiled 2**(m-i-1) times
    half = 1 << i
    period = half << 1
    pattern = ((1 << half) - 1) << half
    repeat = ((1 << (1 << m)) - 1) // ((1 << period) - 1)
    return pattern * repeat


@lru_cache(maxsize=64)
def _atom_masks(m: int) -> tuple[int, ...]:
    return tuple(_atom_mask(i, m) for i in range(m))


def _models_mask(f: Formula, m: int) -> int:
    full = (1 << (1 << m)) - 1
    masks = _atom_masks(m)

    def go(g: Formula) -> int:
        if isinstance(g, Top):
            return full
        if isinstance(g, Atom):
            return masks[g.issue]
        if isinstance(g, Not):
            return full & ~go(g.arg)
        return go(g.left) & go(g.right)

    return go(f)


class Constraint:
    """An integrity constraint ``gamma`` on ``m`` issues, with its models precomputed."""

    def __init__(self, formula: Formula, m: int, labels: Sequence[str] | None = None):
        if m < 1:
            raise ValueError("need at least one issue")
        if m > MAX_ISSUES:
            raise EnumerationLimitError(f"{m} issues exceeds the enumeration cap of {MAX_ISSUES}")
        bad = [a for a in atoms(formula) if a >= m]
        if bad:
            raise ValueError(f"formula mentions issues {bad} outside 0..{m - 1}")
        self.formula = formula
        self.m = m
        self.labels = list(labels) if labels is not None else [f"p{i}" for i in range(m)]
        self.full = (1 << (1 << m)) - 1
        self.mask = _models_mask(formula, m)
        self._lit_cache: dict[tuple[Literal, ...], int] = {}

    @classmethod
    def parse(cls, text: str, labels: Sequence[str] | None = None, m: int | None = None) -> "Constraint":
        if labels is None:
            if m is not None:
                labels = [f"p{i}" for i in range(m)]
            else:
                labels = collect_labels(text)
                if not labels:
                    raise ValueError("cannot infer issues from a formula without atoms; pass m")
        if m is None:
            m = len(labels)
        return cls(parse_formula(text, labels), m, labels)

    @classmethod
    def tautology(cls, m: int) -> "Constraint":
        return cls(TOP, m)

    def __repr__(self) -> str:
        return f"Constraint({format_formula(self.formula, self.labels)!r}, m={self.m})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Constraint) and (self.m, self.mask) == (other.m, other.mask)

    def __hash__(self) -> int:
        return hash((self.m, self.mask))

    def text(self) -> str:
        return format_formula(self.formula, self.labels)

    def literal_mask(self, lit: Literal) -> int:
        a = _atom_masks(self.m)[lit.issue]
        return a if lit.positive else self.full & ~a

    def restrict(self, lits: Iterable[Literal]) -> int:
        """Bitset of models of gamma satisfying every literal in ``lits``."""
        key = tuple(sorted(set(lits)))
        hit = self._lit_cache.get(key)
        if hit is not None:
            return hit
        mask = self.mask
        for lit in key:
            mask &= self.literal_mask(lit)
        if len(self._lit_cache) < 1 << 16:
            self._lit_cache[key] = mask
        return mask

    def consistent(self, lits: Iterable[Literal]) -> bool:
        return self.restrict(lits) != 0

    def entails(self, lits: Iterable[Literal], target: Literal) -> bool:
        return self.restrict(lits) & ~self.literal_mask(target) == 0

    def is_model(self, valuation: Sequence[int]) -> bool:
        v = sum(1 << i for i, x in enumerate(valuation) if x)
        return bool(self.mask >> v & 1)

    @cached_property
    def is_tautology(self) -> bool:
        return self.mask == self.full

    def models(self) -> list[tuple[int, ...]]:
        bits = bin(self.mask)[:1:-1]
        return [tuple((v >> i) & 1 for i in range(self.m))
                for v, b in enumerate(bits) if b == "1"]

    # opinions ---------------------------------------------------------

    def opinion_status(self, values: Sequence[int | None]) -> tuple[bool, bool]:
        """(consistent, closed) for a partial 0/1 assignment."""
        lits = literals_of(values)
        restricted = self.restrict(lits)
        if restricted == 0:
            return False, True
        for i, v in enumerate(values):
            if v is None:
                pos = _atom_masks(self.m)[i]
                if restricted & ~pos == 0 or restricted & pos == 0:
                    return True, False
        return True, True

    def is_rational(self, values: Sequence[int | None]) -> bool:
        consistent, closed = self.opinion_status(values)
        return consistent and closed

    @cached_property
    def rational_opinions(self) -> tuple[tuple[int | None, ...], ...]:
        """Every consistent and closed incomplete opinion, in lexicographic order (0 < 1 < *)."""
        return tuple(o for o in itertools.product((0, 1, None), repeat=self.m) if self.is_rational(o))


# -- module-level operations ---------------------------------------------

def models(gamma: Formula, m: int) -> list[tuple[int, ...]]:
    """All total valuations of ``m`` issues satisfying ``gamma``."""
    return Constraint(gamma, m).models()


def consistent_with(gamma: Constraint, lits: Iterable[Literal]) -> bool:
    return gamma.consistent(lits)


def entails(gamma: Constraint, lits: Iterable[Literal], target: Literal) -> bool:
    return gamma.entails(lits, target)


def minimal_inconsistent_sets(gamma: Constraint, max_size: int | None = None,
                              literals: Sequence[Literal] | None = None) -> list[frozenset[Literal]]:
    """Minimally gamma-inconsistent subsets of the agenda, smallest first.

    Supersets of sets already found are pruned; an inconsistent set that
    contains no smaller inconsistent set found so far is minimal because
    every size below it was enumerated completely.
    """
    lits = list(literals) if literals is not None else agenda(gamma.m)
    if max_size is None:
        max_size = len(lits)
    found: list[frozenset[Literal]] = []
    for size in range(1, max_size + 1):
        for combo in itertools.combinations(lits, size):
            s = frozenset(combo)
            if any(x <= s for x in found):
                continue
            if not gamma.consistent(s):
                found.append(s)
    return found


def is_simple(gamma: Constraint) -> bool:
    return all(len(x) < 3 for x in minimal_inconsistent_sets(gamma))


def is_evenly_negatable(gamma: Constraint) -> bool:
    for x in minimal_inconsistent_sets(gamma):
        xs = sorted(x)
        for k in range(2, len(xs) + 1, 2):
            for y in itertools.combinations(xs, k):
                flipped = [l.negate() if l in y else l for l in xs]
                if gamma.consistent(flipped):
                    return True
    return False


def partial_assignments(m: int) -> Iterator[tuple[Literal, ...]]:
    """Every sign-consistent subset of the agenda."""
    for values in itertools.product((0, 1, None), repeat=m):
        yield tuple(literals_of(values))


def conditional_entailments(gamma: Constraint) -> set[tuple[Literal, Literal]]:
    """Pairs ``(a, b)`` with ``a |=^c b``.

    ``a |=^c b`` holds when some auxiliary set X is consistent with ``a``
    and with ``!b`` while ``{a} + X + gamma`` entails ``b``. Sign-inconsistent
    X are never consistent with anything, so X ranges over partial assignments.
    """
    lits = agenda(gamma.m)
    rel: set[tuple[Literal, Literal]] = set()
    for xs in partial_assignments(gamma.m):
        base = gamma.restrict(xs)
        if base == 0:
            continue
        for a in lits:
            with_a = base & gamma.literal_mask(a)
            if with_a == 0:
                continue
            for b in lits:
                if (a, b) in rel:
                    continue
                bm = gamma.literal_mask(b)
                if base & ~bm and with_a & ~bm == 0:
                    rel.add((a, b))
    return rel


def is_path_connected(gamma: Constraint) -> bool:
    """Every ordered pair of distinct agenda literals is joined by a conditional-entailment chain."""
    lits = agenda(gamma.m)
    rel = conditional_entailments(gamma)
    succ: dict[Literal, set[Literal]] = {a: set() for a in lits}
    for a, b in rel:
        succ[a].add(b)
    for a in lits:
        reach, stack = {a}, [a]
        while stack:
            for b in succ[stack.pop()]:
                if b not in reach:
                    reach.add(b)
                    stack.append(b)
        if len(reach) < len(lits):
            return False
    return True


def classify_agenda(gamma: Constraint) -> dict:
    mis = minimal_inconsistent_sets(gamma)
    return {
        "gamma": gamma.text(),
        "issues": gamma.labels,
        "models": len(gamma.models()),
        "simple": all(len(x) < 3 for x in mis),
        "evenly_negatable": is_evenly_negatable(gamma),
        "path_connected": is_path_connected(gamma),
        "minimal_inconsistent_sets": [
            sorted((("" if l.positive else "!") + gamma.labels[l.issue]) for l in x) for x in mis
        ],
    }
