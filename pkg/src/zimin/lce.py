"""Longest-common-extension queries via suffix array, LCP array and a sparse table."""
from __future__ import annotations

from typing import Sequence

import numpy as np


def suffix_array(symbols: Sequence[int]) -> np.ndarray:
    """Prefix doubling; O(N log^2 N) with numpy sorts."""
    n = len(symbols)
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    rank = np.asarray(symbols, dtype=np.int64)
    k = 1
    while True:
        second = np.full(n, -1, dtype=np.int64)
        if k < n:
            second[: n - k] = rank[k:]
        sa = np.lexsort((second, rank))
        r1, r2 = rank[sa], second[sa]
        bump = np.empty(n, dtype=np.int64)
        bump[0] = 0
        bump[1:] = (r1[1:] != r1[:-1]) | (r2[1:] != r2[:-1])
        new_rank = np.empty(n, dtype=np.int64)
        new_rank[sa] = np.cumsum(bump)
        rank = new_rank
        if rank[sa[-1]] == n - 1 or k >= n:
            return sa
        k *= 2


def lcp_array(symbols: Sequence[int], sa: np.ndarray) -> np.ndarray:
    """Kasai et al.; ``lcp[r]`` = LCP of suffixes ``sa[r-1]`` and ``sa[r]`` (``lcp[0] = 0``)."""
    n = len(symbols)
    rank = [0] * n
    for r, p in enumerate(sa.tolist()):
        rank[p] = r
    sa_l = sa.tolist()
    lcp = [0] * n
    h = 0
    for i in range(n):
        r = rank[i]
        if r > 0:
            j = sa_l[r - 1]
            while i + h < n and j + h < n and symbols[i + h] == symbols[j + h]:
                h += 1
            lcp[r] = h
            if h:
                h -= 1
        else:
            h = 0
    return np.asarray(lcp, dtype=np.int64)


class LceTable:
    """Exact LCE oracle for one word.

    ``lce(i, j)`` is the length of the longest common prefix of the suffixes
    starting at ``i`` and ``j``.  Queries are O(1) after O(N log N) build.
    """

    def __init__(self, word):
        self.word = word
        syms = [int(s) for s in word]
        self.n = n = len(syms)
        self.sa = suffix_array(syms)
        self.rank = np.empty(n, dtype=np.int64)
        self.rank[self.sa] = np.arange(n, dtype=np.int64)
        self.lcp = lcp_array(syms, self.sa)
        # sparse table over lcp for range minimum
        levels = [self.lcp]
        span = 1
        while 2 * span <= n:
            prev = levels[-1]
            levels.append(np.minimum(prev[:-span], prev[span:]))
            span *= 2
        self._sparse = [lv.tolist() for lv in levels]
        self._rank = self.rank.tolist()

    def __len__(self):
        return self.n

    def lce(self, i: int, j: int) -> int:
        n = self.n
        if i == j:
            return n - i
        if i >= n or j >= n:
            return 0
        a, b = self._rank[i], self._rank[j]
        if a > b:
            a, b = b, a
        # min over lcp[a+1 .. b]
        lo, length = a + 1, b - a
        k = length.bit_length() - 1
        row = self._sparse[k]
        x, y = row[lo], row[b - (1 << k) + 1]
        return x if x < y else y

    __call__ = lce


def build_lce(w) -> LceTable:
    return LceTable(w)


def naive_lce(w: Sequence[int], i: int, j: int) -> int:
    n = len(w)
    k = 0
    while i + k < n and j + k < n and w[i + k] == w[j + k]:
        k += 1
    return k
