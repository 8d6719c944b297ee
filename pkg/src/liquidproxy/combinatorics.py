"""Exact counts and Monte Carlo estimates for random delegation graphs.

Two impartial cultures are used. For plain proxy voting each agent picks
uniformly among ``n + 1`` options on an issue (two values or one of the
``n - 1`` other agents). With default values each agent picks a value and
a trustee (possibly itself), ``2 * n`` options.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np

from . import kernels

RNG_NAME = "numpy.random.PCG64 via SeedSequence.spawn"
_CHUNK_CELLS = 1 << 21


@lru_cache(maxsize=None)
def f(n: int, m: int) -> int:
    """Number of ways to arrange ``n`` labelled elements as trees rooted on ``m`` of them."""
    if n < 0 or m < 0:
        raise ValueError("arguments must be non-negative")
    if m == 0:
        return 1 if n == 0 else 0
    if m > n:
        return 0
    return math.comb(n, m) * sum(m ** k * f(n - m, k) for k in range(n - m + 1))


def total_graphs(n: int) -> int:
    """Sum of f(n, k) * k! over cycle sizes k; equals n**n."""
    return sum(f(n, k) * math.factorial(k) for k in range(1, n + 1))


def check_identity_total(n: int) -> bool:
    if n < 1:
        raise ValueError("n must be positive")
    return total_graphs(n) == n ** n


def even_cycle_permutations(k: int) -> int:
    """Permutations of ``k`` elements with only even cycles, as the closed form k!/2^k C(k, k/2)."""
    if k % 2:
        return 0
    return math.factorial(k) * math.comb(k, k // 2) // 2 ** k


def closed_form_hung_count(n: int) -> int:
    """The published closed form sum_{k even} f(n,k) * k!/2^k * C(k,k/2)^2.

    It omits the free values of the agents outside the cycles and treats the
    hung condition as a single split over all cycle members, so it agrees
    with enumeration only for n <= 2; see :func:`all_hung_count` for the
    exact count.
    """
    total = 0
    for k in range(2, n + 1, 2):
        # k! * C(k,k/2)^2 is divisible by 2^k
        total += f(n, k) * math.factorial(k) * math.comb(k, k // 2) ** 2 // 2 ** k
    return total


@lru_cache(maxsize=None)
def hung_cycle_arrangements(k: int) -> int:
    """Pairs (permutation of k elements, 0/1 values) with every cycle even and split half-half."""
    if k == 0:
        return 1
    total = 0
    # fix the cycle through the first element: pick its other l-1 members and their order
    for length in range(2, k + 1, 2):
        ways = math.comb(k - 1, length - 1) * math.factorial(length - 1) * math.comb(length, length // 2)
        total += ways * hung_cycle_arrangements(k - length)
    return total


def all_hung_count(n: int) -> int:
    """Default profiles on one issue where every cycle is even and hung (every voter abstains after t')."""
    return sum(f(n, k) * hung_cycle_arrangements(k) * 2 ** (n - k) for k in range(1, n + 1))


def default_space(n: int) -> int:
    return 2 ** n * n ** n


@dataclass(frozen=True)
class HungCount:
    n: int
    count: int
    probability: Fraction

    @property
    def value(self) -> float:
        return float(self.probability)


def count_hung_even(n: int) -> HungCount:
    """Published closed-form count and its probability over the 2^n n^n default profiles."""
    if n < 1:
        raise ValueError("n must be positive")
    c = closed_form_hung_count(n)
    return HungCount(n, c, Fraction(c, default_space(n)))


def prob_all_abstain_default(n: int) -> HungCount:
    """Exact probability that t' leaves every voter abstaining, by the corrected count."""
    if n < 1:
        raise ValueError("n must be positive")
    c = all_hung_count(n)
    return HungCount(n, c, Fraction(c, default_space(n)))


@dataclass(frozen=True)
class GuruFreeProb:
    """Probability ((n-1)/(n+1))^n that a random single-issue proxy profile has no guru."""
    n: int

    @cached_property
    def exact(self) -> Fraction:
        return Fraction(self.n - 1, self.n + 1) ** self.n

    @property
    def value(self) -> float:
        n = self.n
        if n <= 4096:
            return float(self.exact)
        return math.exp(n * math.log1p(-2 / (n + 1)))


def prob_guru_free(n: int) -> GuruFreeProb:
    if n < 1:
        raise ValueError("n must be positive")
    return GuruFreeProb(n)


# -- Monte Carlo ---------------------------------------------------------------

@dataclass(frozen=True)
class McConfig:
    samples: int
    seed: int
    workers: int = 1

    def __post_init__(self):
        if self.samples < 1 or self.workers < 1:
            raise ValueError("samples and workers must be positive")

    def shares(self) -> list[int]:
        base, extra = divmod(self.samples, self.workers)
        return [base + (w < extra) for w in range(self.workers)]

    def streams(self) -> list[np.random.SeedSequence]:
        return np.random.SeedSequence(self.seed).spawn(self.workers)


@dataclass(frozen=True)
class McEstimate:
    hits: int
    samples: int
    seed: int
    workers: int

    @property
    def estimate(self) -> float:
        return self.hits / self.samples

    @property
    def stderr(self) -> float:
        p = self.estimate
        return math.sqrt(p * (1 - p) / self.samples)

    def as_dict(self) -> dict:
        return {"estimate": self.estimate, "stderr": self.stderr, "hits": self.hits,
                "samples": self.samples, "seed": self.seed, "workers": self.workers,
                "rng": RNG_NAME, "backend": kernels.BACKEND}


def _proxy_maps(rng: np.random.Generator, rows: int, n: int) -> np.ndarray:
    # option 0/1 casts a value (self-loop); option 2+k delegates to the k-th other agent
    opts = rng.integers(0, n + 1, size=(rows, n))
    agents = np.arange(n)
    k = opts - 2
    trustee = np.where(k < agents, k, k + 1)
    return np.where(opts < 2, agents, trustee).astype(np.int64)


def _guru_free_worker(args) -> int:
    n, share, seq = args
    rng = np.random.Generator(np.random.PCG64(seq))
    rows_per_chunk = max(1, _CHUNK_CELLS // n)
    hits, left = 0, share
    while left:
        rows = min(rows_per_chunk, left)
        hits += kernels.count_fixpoint_free_rows(_proxy_maps(rng, rows, n))
        left -= rows
    return hits


def _all_hung_worker(args) -> int:
    n, share, seq = args
    rng = np.random.Generator(np.random.PCG64(seq))
    rows_per_chunk = max(1, _CHUNK_CELLS // n)
    hits, left = 0, share
    while left:
        rows = min(rows_per_chunk, left)
        maps = rng.integers(0, n, size=(rows, n), dtype=np.int64)
        values = rng.integers(0, 2, size=(rows, n), dtype=np.uint8)
        hits += kernels.count_all_hung_rows(maps, values)
        left -= rows
    return hits


def _run(worker, n: int, cfg: McConfig) -> McEstimate:
    jobs = [(n, share, seq) for share, seq in zip(cfg.shares(), cfg.streams()) if share]
    if cfg.workers == 1:
        hits = [worker(job) for job in jobs]
    else:
        with ProcessPoolExecutor(cfg.workers) as pool:
            hits = list(pool.map(worker, jobs))
    return McEstimate(sum(hits), cfg.samples, cfg.seed, cfg.workers)


def mc_guru_free(n: int, cfg: McConfig) -> McEstimate:
    """Fraction of sampled single-issue proxy profiles whose delegation graph has no guru."""
    if n < 2:
        raise ValueError("n must be at least 2")
    return _run(_guru_free_worker, n, cfg)


def mc_all_abstain_default(n: int, cfg: McConfig) -> McEstimate:
    """Fraction of sampled default profiles whose cycles are all even and hung."""
    if n < 1:
        raise ValueError("n must be positive")
    return _run(_all_hung_worker, n, cfg)
