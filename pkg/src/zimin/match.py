"""Zimin-word containment, general pattern containment and unavoidability.

Zimin containment uses a level-by-level minimal-end dynamic program.  For a
word ``w`` of length N and level ``m`` let

* ``s_m(i)`` be the end of the Z_m copy discovered from anchor ``i`` (the copy
  starts at some position ``>= i``), or ``None``;
* ``e_m(i) = min(s_m(i'), i' >= i)``, the least end of any Z_m copy starting
  at or after ``i``.

``s_1(i) = i``.  For the next level put ``l = e_m(i) - i + 1`` and let ``j`` be
the first occurrence of ``P = w[i:i+l]`` with ``j >= i + l + 1``; then
``s_{m+1}(i) = j + l - 1``.

Why this is exact.  ``P`` ends with a Z_m copy ``X`` starting at ``c >= i``.
The second occurrence of ``P`` repeats ``X`` at ``c + (j - i)``, and the gap
between the two copies of ``X`` is nonempty because ``j > i + l``, so
``X (gap) X`` is a Z_{m+1} copy ending at ``j + l - 1``.  This is the closure
fact: if ``P = pre . X`` contains a Z_m copy then any ``P Y P`` contains the
Z_{m+1} copy ``X (Y' ) X``.  Conversely a Z_{m+1} copy ``X Y X`` starting at
``a >= i`` has ``|X| >= l(a)``, so the prefix of length ``l(a)`` of ``X``
reappears at ``a + |X| + |Y| >= a + l(a) + 1``, giving ``s_{m+1}(a) <=`` the
copy's end.  Hence ``e_{m+1}`` is exactly the least end of a Z_{m+1} copy
starting at or after ``i``, and ``w`` contains Z_{m+1} iff ``e_{m+1}(0)`` is
not ``None``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

from .lce import LceTable
from .words import LETTERS, Word, WordError, as_word, zimin


# ---------------------------------------------------------------- Zimin DP

@dataclass
class MinEndTable:
    """``s[m-1][i]``, ``e[m-1][i]`` as in the module docstring (``None`` is infinity).

    ``jump[m-1][i]`` is the second-occurrence start ``j`` used for ``s_m(i)``
    and ``arg[m-1][i]`` the anchor attaining ``e_m(i)``.
    """

    n: int
    s: list = field(default_factory=list)
    e: list = field(default_factory=list)
    arg: list = field(default_factory=list)
    jump: list = field(default_factory=list)

    @property
    def levels(self) -> int:
        return len(self.s)

    def contains(self, m: int) -> bool:
        if m > self.levels:
            return False
        e = self.e[m - 1]
        return bool(e) and e[0] is not None


def _suffix_min(s: list) -> tuple[list, list]:
    n = len(s)
    e = [None] * n
    arg = [None] * n
    best = None
    best_i = None
    for i in range(n - 1, -1, -1):
        v = s[i]
        if v is not None and (best is None or v <= best):
            best, best_i = v, i
        e[i] = best
        arg[i] = best_i
    return e, arg


def _text_of(w) -> str:
    if isinstance(w, Word):
        return w.text
    if isinstance(w, str):
        return as_word(w).text
    return "".join(map(chr, w))


def min_end_table(w, n: int, method: str = "find", full: bool = False) -> MinEndTable:
    """Run the minimal-end DP up to level ``n``.

    ``method="find"`` locates second occurrences with substring search;
    ``method="lce"`` uses explicit LCE queries (quadratic, used as a
    cross-check).  Unless ``full`` is set the table stops at the first level
    with no copy.
    """
    if n < 1:
        raise ValueError(f"zimin level must be >= 1, got {n}")
    text = _text_of(w)
    N = len(text)
    tab = MinEndTable(n)
    s = list(range(N))
    e, arg = _suffix_min(s)
    tab.s.append(s)
    tab.e.append(e)
    tab.arg.append(arg)
    tab.jump.append([None] * N)
    lce = LceTable([ord(c) for c in text]) if method == "lce" else None
    if method not in ("find", "lce"):
        raise ValueError(f"unknown method {method!r}")
    for _m in range(2, n + 1):
        if not full and (N == 0 or e[0] is None):
            break
        s = [None] * N
        jump = [None] * N
        for i in range(N):
            ei = e[i]
            if ei is None:
                break
            ell = ei - i + 1
            start = i + ell + 1
            if start + ell > N:
                continue
            if lce is None:
                j = text.find(text[i:i + ell], start)
            else:
                j = -1
                for jj in range(start, N - ell + 1):
                    if lce.lce(i, jj) >= ell:
                        j = jj
                        break
            if j >= 0:
                s[i] = j + ell - 1
                jump[i] = j
        e, arg = _suffix_min(s)
        tab.s.append(s)
        tab.e.append(e)
        tab.arg.append(arg)
        tab.jump.append(jump)
    return tab


def contains_zimin(w, n: int, method: str = "find") -> bool:
    """True iff some subword of ``w`` is an image of Z_n under nonempty substitution."""
    return min_end_table(w, n, method).contains(n)


def scan_free(w, n: int):
    """Least ``e`` such that ``w[0..e]`` contains Z_n, or ``None`` if ``w`` is free."""
    tab = min_end_table(w, n)
    if not tab.contains(n):
        return None
    return tab.e[n - 1][0]


# ---------------------------------------------------------------- witnesses

@dataclass(frozen=True)
class ZiminLevel:
    """One level of a nested Z_m copy ``X Y X``; all intervals inclusive."""

    m: int
    start: int
    end: int
    x_left: tuple[int, int]
    y: tuple[int, int]
    x_right: tuple[int, int]


@dataclass(frozen=True)
class ZiminWitness:
    n: int
    levels: tuple  # ZiminLevel for m = n, n-1, ..., 2
    base: tuple[int, int]  # the Z_1 interval (innermost left X)

    @property
    def interval(self) -> tuple[int, int]:
        if self.levels:
            return self.levels[0].start, self.levels[0].end
        return self.base

    def describe(self, w=None) -> str:
        out = []
        for lv in self.levels:
            line = (f"Z_{lv.m} [{lv.start},{lv.end}] = X[{lv.x_left[0]},{lv.x_left[1]}] "
                    f"Y[{lv.y[0]},{lv.y[1]}] X[{lv.x_right[0]},{lv.x_right[1]}]")
            out.append(line)
        out.append(f"Z_1 [{self.base[0]},{self.base[1]}]")
        return "\n".join(out)


def _build_copy(tab: MinEndTable, m: int, i: int):
    """Reconstruct the Z_m copy recorded for anchor ``i`` (ends at ``s_m(i)``)."""
    if m == 1:
        return (i, i), []
    # X is the Z_{m-1} copy ending at e_{m-1}(i), found from anchor c
    c = tab.arg[m - 2][i]
    (x0, x1), inner = _build_copy(tab, m - 1, c)
    j = tab.jump[m - 1][i]
    shift = j - i
    end = tab.s[m - 1][i]
    assert x1 == tab.e[m - 2][i] and end == x1 + shift
    level = ZiminLevel(m, x0, end, (x0, x1), (x1 + 1, x0 + shift - 1), (x0 + shift, end))
    return (x0, end), [level] + inner


def find_zimin(w, n: int) -> ZiminWitness | None:
    """Witness for the Z_n copy with least end, or ``None``."""
    tab = min_end_table(w, n)
    if not tab.contains(n):
        return None
    anchor = tab.arg[n - 1][0]
    (a, b), levels = _build_copy(tab, n, anchor)
    base = levels[-1].x_left if levels else (a, b)
    return ZiminWitness(n, tuple(levels), base)


def validate_witness(w, wit: ZiminWitness) -> bool:
    """Re-check a witness against the word without using the DP."""
    syms = as_word(w).symbols if not isinstance(w, Word) else w.symbols
    N = len(syms)
    if len(wit.levels) != wit.n - 1:
        return False
    prev_x = None
    for k, lv in enumerate(wit.levels):
        if lv.m != wit.n - k:
            return False
        (a, b), (ya, yb), (c, d) = lv.x_left, lv.y, lv.x_right
        if not (0 <= lv.start == a <= b and b + 1 == ya <= yb and yb + 1 == c <= d == lv.end < N):
            return False
        if syms[a:b + 1] != syms[c:d + 1]:
            return False
        if prev_x is not None and prev_x != (lv.start, lv.end):
            return False
        prev_x = lv.x_left
    base = wit.base
    if not 0 <= base[0] <= base[1] < N:
        return False
    if prev_x is not None and prev_x != base:
        return False
    return True


# ---------------------------------------------------------------- patterns

@dataclass(frozen=True)
class Pattern:
    """A word over variables ``0..k-1``, kept apart from :class:`Word` on purpose."""

    symbols: tuple
    k: int

    def __post_init__(self):
        if not self.symbols:
            raise WordError("pattern must be nonempty")
        if set(self.symbols) != set(range(self.k)):
            raise WordError("pattern variable ids must be dense 0..k-1")

    @classmethod
    def of(cls, symbols: Sequence) -> "Pattern":
        """Relabel arbitrary hashable symbols densely by first occurrence."""
        ids: dict = {}
        out = tuple(ids.setdefault(s, len(ids)) for s in symbols)
        return cls(out, len(ids))

    @classmethod
    def from_str(cls, text: str) -> "Pattern":
        return cls.of(text.strip())

    @classmethod
    def from_word(cls, w: Word) -> "Pattern":
        return cls.of(w.symbols)

    def __len__(self):
        return len(self.symbols)

    def __str__(self):
        if self.k <= 26:
            return "".join(LETTERS[s] for s in self.symbols)
        return " ".join(map(str, self.symbols))


def zimin_pattern(n: int) -> Pattern:
    return Pattern.from_word(zimin(n))


class Status(enum.Enum):
    FOUND = "found"
    ABSENT = "absent"
    UNDECIDED = "undecided"


class UndecidedError(RuntimeError):
    """Raised when a search that ran out of budget is used as a boolean."""


@dataclass
class PatternResult:
    status: Status
    start: int | None = None
    images: dict | None = None  # variable -> (start, end) inclusive
    nodes: int = 0
    budget: int | None = None

    def __bool__(self):
        if self.status is Status.UNDECIDED:
            raise UndecidedError(f"search undecided within budget of {self.budget} nodes")
        return self.status is Status.FOUND

    @property
    def decided(self) -> bool:
        return self.status is not Status.UNDECIDED


class _OutOfBudget(Exception):
    pass


DEFAULT_BUDGET = 20_000_000


def _split_blocks(pat: tuple, singleton: list):
    """Maximal runs of repeated variables and the singleton counts around them.

    Returns ``(gaps, blocks)`` with ``len(gaps) == len(blocks) + 1``; ``gaps[i]``
    singletons precede ``blocks[i]`` and ``gaps[-1]`` trail the last block.
    """
    gaps, blocks = [0], []
    cur: list = []
    for v in pat:
        if singleton[v]:
            if cur:
                blocks.append(tuple(cur))
                gaps.append(0)
                cur = []
            gaps[-1] += 1
        else:
            cur.append(v)
    if cur:
        blocks.append(tuple(cur))
        gaps.append(0)
    return gaps, blocks


def contains_pattern(w, P: Pattern, budget: int | None = DEFAULT_BUDGET) -> PatternResult:
    """Backtracking search for an occurrence of ``P`` in ``w``.

    Variables occurring once in ``P`` only need a nonempty gap, so the search
    binds the repeated variables (in order of first appearance) to distinct
    factors of ``w``, shortest first.  After each binding every maximal run of
    bound variables inside a block must itself be a factor of ``w``; these
    factor tests are memoised.  A full binding is accepted by leftmost greedy
    matching of the blocks, which is optimal because consecutive blocks are
    separated by at least one free gap.  ``nodes`` counts bindings tried.
    """
    if not isinstance(P, Pattern):
        raise TypeError("contains_pattern expects a Pattern; wrap words with Pattern.from_word")
    text = _text_of(w)
    N = len(text)
    pat = P.symbols
    counts = [0] * P.k
    for v in pat:
        counts[v] += 1
    singleton = [c == 1 for c in counts]
    gaps, blocks = _split_blocks(pat, singleton)
    order = []
    for v in pat:
        if not singleton[v] and v not in order:
            order.append(v)

    # Binding order is fixed, so which runs become fully bound at each depth
    # is known in advance.
    runs_at, anchor_at, plan_at = [], [], []
    for k, v in enumerate(order):
        before = set(order[:k])
        bound = before | {v}
        runs, anchors = [], []
        for blk in blocks:
            for off, u in enumerate(blk):
                if u != v:
                    continue
                lo, hi = off, off
                while lo > 0 and blk[lo - 1] in bound:
                    lo -= 1
                while hi + 1 < len(blk) and blk[hi + 1] in bound:
                    hi += 1
                if hi > lo and blk[lo:hi + 1] not in runs:
                    runs.append(blk[lo:hi + 1])
                left = blk[lo:off] if all(x in before for x in blk[lo:off]) else ()
                right = blk[off + 1:hi + 1] if all(x in before for x in blk[off + 1:hi + 1]) else ()
                for run, side in ((left, "left"), (right, "right")):
                    if run and (run, side) not in anchors:
                        anchors.append((run, side))
        runs_at.append(runs)
        anchor_at.append(anchors)
        plan = []
        for bi, blk in enumerate(blocks):
            if all(u in bound for u in blk):
                plan.append((blk, 0, gaps[bi + 1]))
            else:
                fixed = tuple(u for u in blk if u in bound)
                plan.append((fixed, len(blk) - len(fixed), gaps[bi + 1]))
        plan_at.append(plan)

    images: list = [None] * P.k
    by_length: dict = {}
    nodes = 0
    n_single = sum(gaps)

    def cat(run) -> str:
        return "".join([images[u] for u in run])

    def all_factors(ln: int):
        c = by_length.get(ln)
        if c is None:
            c = by_length[ln] = list(dict.fromkeys(text[i:i + ln] for i in range(N - ln + 1)))
        return c

    def occurrences(r: str) -> list:
        out = []
        j = text.find(r)
        while j >= 0:
            out.append(j)
            j = text.find(r, j + 1)
        return out

    def candidates(k: int, max_len: int):
        """Distinct images for ``order[k]``, shortest first, then by first position.

        When the variable sits next to an already bound run, only the symbols
        beside occurrences of that run are candidates.
        """
        if not anchor_at[k]:
            for ln in range(1, max_len + 1):
                yield from all_factors(ln)
            return
        # the longest adjacent bound string has the fewest occurrences
        r, side = max(((cat(run), side) for run, side in anchor_at[k]), key=lambda t: len(t[0]))
        occ = occurrences(r)
        for ln in range(1, max_len + 1):
            if side == "left":
                at = [j + len(r) for j in occ if j + len(r) + ln <= N]
            else:
                at = [j - ln for j in occ if j - ln >= 0]
            if not at:
                break
            yield from dict.fromkeys(text[a:a + ln] for a in at)

    def feasible(k: int) -> bool:
        for run in runs_at[k]:
            if cat(run) not in text:
                return False
        # fully bound blocks must fit in order; unbound variables count as one symbol
        pos = gaps[0]
        for fixed, loose, gap in plan_at[k]:
            if loose:
                pos += loose + sum([len(images[u]) for u in fixed]) + gap
            else:
                s_ = cat(fixed)
                j = text.find(s_, pos)
                if j < 0:
                    return False
                pos = j + len(s_) + gap
        return pos <= N

    def greedy():
        pos = gaps[0]
        spans = []
        for bi, blk in enumerate(blocks):
            s_ = "".join(images[u] for u in blk)
            j = text.find(s_, pos)
            if j < 0:
                return None
            spans.append(j)
            pos = j + len(s_) + gaps[bi + 1]
        if pos > N:
            return None
        return spans

    def search(k: int, used: int):
        nonlocal nodes
        if k == len(order):
            return greedy()
        v = order[k]
        c = counts[v]
        # every other repeated variable not yet bound needs at least 1 symbol per use
        rest = sum(counts[u] for u in order[k + 1:])
        max_len = (N - used - rest - n_single) // c
        for img in candidates(k, max_len):
            nodes += 1
            if budget is not None and nodes > budget:
                raise _OutOfBudget
            images[v] = img
            if feasible(k):
                spans = search(k + 1, used + c * len(img))
                if spans is not None:
                    return spans
            images[v] = None
        images[v] = None
        return None

    try:
        if N < len(pat):
            spans = None
        elif not order:
            spans = []
        else:
            spans = search(0, 0)
    except _OutOfBudget:
        return PatternResult(Status.UNDECIDED, None, None, nodes, budget)
    if spans is None:
        return PatternResult(Status.ABSENT, None, None, nodes, budget)
    return PatternResult(Status.FOUND, *_assemble(pat, gaps, blocks, spans, images), nodes, budget)


def _assemble(pat, gaps, blocks, spans, images):
    """Turn greedy block positions into a start index and per-variable spans.

    Singletons get length 1, except the last one of each gap, which absorbs
    the slack up to the next block.
    """
    start = spans[0] - gaps[0] if blocks else 0
    out = {}
    pos, p = start, 0
    for i, g in enumerate(gaps):
        total = spans[i] - pos if i < len(blocks) else g
        for r in range(g):
            ln = 1 if r < g - 1 else total - (g - 1)
            out[pat[p]] = (pos, pos + ln - 1)
            pos += ln
            p += 1
        if i < len(blocks):
            for u in blocks[i]:
                ln = len(images[u])
                out.setdefault(u, (pos, pos + ln - 1))
                pos += ln
                p += 1
    return start, out


def image_of(w, P: Pattern, result: PatternResult) -> list:
    """Expand a FOUND result into the list of symbol blocks it substitutes."""
    syms = list(as_word(w).symbols) if not isinstance(w, Word) else list(w.symbols)
    return [syms[a:b + 1] for a, b in (result.images[v] for v in P.symbols)]


MAX_UNAVOIDABLE_VARS = 12


def is_unavoidable(P: Pattern, budget: int | None = DEFAULT_BUDGET) -> PatternResult:
    """Zimin's criterion: ``P`` is unavoidable iff Z_k contains it, k = #variables."""
    if P.k > MAX_UNAVOIDABLE_VARS:
        raise ValueError(f"at most {MAX_UNAVOIDABLE_VARS} variables supported, got {P.k}")
    return contains_pattern(zimin(P.k), P, budget)


def reduces_by_free_sets(P: Pattern) -> bool:
    """Independent unavoidability test by repeated deletion of free variables.

    A variable ``x`` is free when, in the bipartite graph joining ``a^L`` to
    ``b^R`` for every factor ``ab`` of the pattern, ``x^L`` and ``x^R`` lie in
    different components.  The pattern is unavoidable iff some sequence of
    such deletions empties it.
    """
    from functools import lru_cache

    def free_vars(seq):
        parent = {}

        def find(a):
            parent.setdefault(a, a)
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for a, b in zip(seq, seq[1:]):
            ra, rb = find(("L", a)), find(("R", b))
            if ra != rb:
                parent[ra] = rb
        return [x for x in sorted(set(seq)) if find(("L", x)) != find(("R", x))]

    @lru_cache(maxsize=None)
    def reducible(alive: frozenset) -> bool:
        seq = tuple(v for v in P.symbols if v in alive)
        if not seq:
            return True
        return any(reducible(alive - {x}) for x in free_vars(seq))

    return reducible(frozenset(range(P.k)))
