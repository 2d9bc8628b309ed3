"""Exhaustive small-case search for f(n,q) and m(n,q), and random-word thresholds."""
from __future__ import annotations

import itertools
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import binomtest

from .bounds import f_upper
from .match import contains_zimin
from .words import Word

DEFAULT_NODE_BUDGET = 5_000_000


class BudgetExceeded(RuntimeError):
    pass


@dataclass
class SearchResult:
    n: int
    q: int
    longest_found: Word
    exact: bool
    value: int | None  # f(n,q) when exact
    nodes: int
    seconds: float
    extensions_checked: bool = False

    def __str__(self):
        v = self.value if self.exact else f">= {len(self.longest_found) + 1}"
        return f"f({self.n},{self.q}) = {v}"


class _Dfs:
    """Canonical-form DFS over Z_n-free words; first occurrences appear in id order."""

    def __init__(self, n: int, q: int, budget: int, max_len: int | None = None):
        self.n, self.q, self.budget, self.max_len = n, q, budget, max_len
        self.nodes = 0
        self.counts: list = []  # canonical words per (length, distinct symbols)
        self.best: tuple = ()
        self.ceiling = None
        up = f_upper(n, q) if n >= 2 else None
        if up is not None and up.is_exact:
            self.ceiling = up.exact

    def run(self):
        # the empty word always avoids Z_n for n >= 1
        self._visit((), 0)
        stack = [((), 0)]
        while stack:
            w, k = stack.pop()
            if self.max_len is not None and len(w) >= self.max_len:
                continue
            for a in range(min(k + 1, self.q)):
                v = w + (a,)
                self.nodes += 1
                if self.nodes > self.budget:
                    raise BudgetExceeded(self.nodes)
                # the parent is Z_n-free, so any copy found here ends at the new symbol
                if self.n <= 1 or contains_zimin(v, self.n):
                    continue
                k2 = k + (a == k)
                self._visit(v, k2)
                stack.append((v, k2))

    def _visit(self, w: tuple, k: int):
        L = len(w)
        if self.ceiling is not None and L >= self.ceiling:
            raise AssertionError(f"Z_{self.n}-free word of length {L} beats the proven ceiling")
        while len(self.counts) <= L:
            self.counts.append([0] * (self.q + 1))
        self.counts[L][k] += 1
        if L > len(self.best):
            self.best = w


def exact_f(n: int, q: int, budget: int = DEFAULT_NODE_BUDGET) -> SearchResult:
    """Longest Z_n-free word over ``q`` symbols by exhaustive canonical DFS."""
    if n < 1 or q < 1:
        raise ValueError("need n >= 1 and q >= 1")
    t0 = time.perf_counter()
    dfs = _Dfs(n, q, budget)
    exact = True
    try:
        dfs.run()
    except BudgetExceeded:
        exact = False
    best = Word.of(dfs.best, q)
    if contains_zimin(best, n):
        raise AssertionError("search returned a word containing Z_n")
    checked = False
    if exact:
        checked = all(contains_zimin(Word.of(best.symbols + (a,), q), n) for a in range(q))
        if not checked:
            raise AssertionError("maximal word has a Z_n-free extension")
    return SearchResult(n, q, best, exact, len(best) + 1 if exact else None, dfs.nodes,
                        time.perf_counter() - t0, checked)


def orbit_size(q: int, k: int) -> int:
    """Relabelings of a word using ``k`` of ``q`` symbols: ``q!/(q-k)!``."""
    return math.perm(q, k)


def count_avoiding(n: int, q: int, max_len: int, budget: int = DEFAULT_NODE_BUDGET) -> list:
    """``m(n,q,l)`` for ``l = 0..max_len`` via canonical DFS times orbit sizes."""
    dfs = _Dfs(n, q, budget, max_len=max_len)
    dfs.run()
    out = []
    for L in range(max_len + 1):
        row = dfs.counts[L] if L < len(dfs.counts) else [0] * (q + 1)
        out.append(sum(c * orbit_size(q, k) for k, c in enumerate(row)))
    return out


def count_avoiding_naive(n: int, q: int, max_len: int) -> list:
    """Oracle: test every word of every length."""
    return [sum(not contains_zimin(w, n) for w in itertools.product(range(q), repeat=L))
            if L else 1 for L in range(max_len + 1)]


# ---------------------------------------------------------------- Monte Carlo

@dataclass
class ThresholdEstimate:
    n: int
    q: int
    lengths: list
    trials: int
    seed: int
    hits: list = field(default_factory=list)
    probs: list = field(default_factory=list)
    ci: list = field(default_factory=list)  # (lo, hi) exact 95% intervals

    @property
    def median_crossing(self) -> int | None:
        """Smallest sampled length with empirical probability at least 1/2."""
        for L, p in zip(self.lengths, self.probs):
            if p >= 0.5:
                return L
        return None

    def monotone_within_ci(self) -> bool:
        """No longer length is confidently below a shorter one."""
        for i, (lo_i, _) in enumerate(self.ci):
            for _, hi_j in self.ci[i + 1:]:
                if lo_i > hi_j:
                    return False
        return True


def _trial_block(args):
    n, q, L, trials, seed_seq = args
    rng = np.random.default_rng(seed_seq)
    hits = 0
    for _ in range(trials):
        w = rng.integers(0, q, size=L)
        if contains_zimin(Word.of(w.tolist(), q), n):
            hits += 1
    return hits


def estimate_threshold(n: int, q: int, lengths, trials: int, seed: int = 0,
                       jobs: int = 1) -> ThresholdEstimate:
    """Fraction of uniform random words of each length that contain Z_n.

    Each length gets its own child of ``SeedSequence(seed)``, so results do not
    depend on ``jobs``.
    """
    lengths = sorted(int(L) for L in lengths)
    est = ThresholdEstimate(n, q, lengths, trials, seed)
    if trials <= 0 or not lengths:
        return est
    seqs = np.random.SeedSequence(seed).spawn(len(lengths))
    tasks = [(n, q, L, trials, s) for L, s in zip(lengths, seqs)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            est.hits = list(ex.map(_trial_block, tasks))
    else:
        est.hits = [_trial_block(t) for t in tasks]
    for h in est.hits:
        est.probs.append(h / trials)
        ci = binomtest(h, trials).proportion_ci(confidence_level=0.95, method="exact")
        est.ci.append((ci.low, ci.high))
    return est
