"""Stepping up from Z_n-free families to Z_{n+1}-free words.

S-families carry a distinguished letter ``d`` whose removal leaves Z_{n-1}-free
pieces; B-families are binary and use long runs of ones as separators.  Both
step-up operations take any ordered list of distinct members: only pairwise
distinctness and individual membership are needed, so subfamilies work.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field

import numpy as np

from .constructions import random_interval_word
from .match import contains_zimin, find_zimin
from .words import Alphabet, Word, as_word


class StepUpError(ValueError):
    pass


def _word(symbols, q: int) -> Word:
    return Word(tuple(symbols), Alphabet(q, "chars" if q <= 26 else "ints"))


# ---------------------------------------------------------------- S-families

@dataclass(frozen=True)
class SFamilyEntry:
    word: Word
    n: int
    q: int
    d: int


@dataclass
class SMembership:
    ok: bool
    avoids: bool
    bad_piece: tuple | None = None  # (start, end) of a d-free piece containing Z_{n-1}
    reason: str = ""

    def __bool__(self):
        return self.ok


def d_free_pieces(w, d: int) -> list:
    """Maximal subwords avoiding ``d``, as inclusive ``(start, end)``."""
    syms = as_word(w).symbols
    out, start = [], 0
    for i, s in enumerate(syms + (d,)):
        if s == d:
            if i > start:
                out.append((start, i - 1))
            start = i + 1
    return out


def check_s_membership(w, n: int, q: int, d: int) -> SMembership:
    w = as_word(w)
    if any(s >= q for s in w.symbols) or not 0 <= d < q:
        return SMembership(False, False, None, f"symbols must lie in 0..{q - 1}")
    if contains_zimin(w, n):
        return SMembership(False, False, None, f"word contains Z_{n}")
    if n >= 2:
        syms = w.symbols
        for a, b in d_free_pieces(w, d):
            if contains_zimin(syms[a:b + 1], n - 1):
                return SMembership(False, True, (a, b), f"d-free piece [{a},{b}] contains Z_{n - 1}")
    return SMembership(True, True)


def step_up_s(entries, verify: bool = False) -> SFamilyEntry:
    """``u_1 d u_2 d ... d u_M``: odd entries get ``c -> c1``, even ones ``c -> c0``.

    Symbol ids: ``c0`` reuses the old distinguished id, ``c1 = q`` and the new
    distinguished letter is ``q + 1``.
    """
    entries = list(entries)
    if len(entries) < 2:
        raise StepUpError("need at least two entries")
    e0 = entries[0]
    for e in entries:
        if (e.n, e.q, e.d) != (e0.n, e0.q, e0.d):
            raise StepUpError("entries must share level, alphabet and distinguished letter")
        if len(e.word) == 0:
            raise StepUpError("empty words are not family members")
    if len({e.word for e in entries}) != len(entries):
        raise StepUpError("entries must be pairwise distinct")
    q, c = e0.q, e0.d
    c0, c1, d = c, q, q + 1
    out: list = []
    for i, e in enumerate(entries, 1):
        if i > 1:
            out.append(d)
        sub = c1 if i % 2 else c0
        out.extend(sub if s == c else s for s in e.word.symbols)
    res = SFamilyEntry(_word(out, q + 2), e0.n + 1, q + 2, d)
    if verify:
        chk = check_s_membership(res.word, res.n, res.q, res.d)
        if not chk:
            raise StepUpError(f"stepped-up word failed membership: {chk.reason}")
    return res


def split_s(entry: SFamilyEntry) -> list:
    """Inverse of :func:`step_up_s` up to the c0/c1 renaming."""
    syms = entry.word.symbols
    out, cur = [], []
    for s in syms:
        if s == entry.d:
            out.append(tuple(cur))
            cur = []
        else:
            cur.append(s)
    out.append(tuple(cur))
    return out


def sample_s3_entries(q: int, count: int, num_intervals: int, seed=0, max_tries: int = 10_000,
                      t: int | None = None, S: int | None = None) -> list:
    """Distinct S(3, q) members drawn from the distinguished interval model.

    Draws are rejected until ``check_s_membership`` passes.
    """
    rng = np.random.default_rng(seed)
    found: dict = {}
    for _ in range(max_tries):
        w = random_interval_word(q, num_intervals, distinguished=True, t=t, S=S, rng=rng)
        if w in found:
            continue
        if check_s_membership(w, 3, q, q - 1):
            found[w] = SFamilyEntry(w, 3, q, q - 1)
            if len(found) == count:
                break
    if len(found) < count:
        raise StepUpError(f"only {len(found)} of {count} S(3,{q}) members after {max_tries} draws")
    return list(found.values())


# ---------------------------------------------------------------- B-families

@dataclass(frozen=True)
class BFamilyEntry:
    word: Word
    n: int

    @property
    def length(self) -> int:
        return len(self.word)


@dataclass
class BReport:
    n: int
    props: list = field(default_factory=list)  # five booleans
    detail: list = field(default_factory=list)  # violation info per property, None if fine

    @property
    def ok(self) -> bool:
        return all(self.props)

    def __bool__(self):
        return self.ok

    def __str__(self):
        marks = " ".join(f"{i + 1}:{'ok' if p else 'FAIL'}" for i, p in enumerate(self.props))
        return f"B({self.n}) {marks}"


def ones(k: int) -> tuple:
    return (1,) * k


def bump_runs(syms, run: int) -> tuple:
    """Add a one to each maximal run of ones of length exactly ``run``."""
    out: list = []
    i, n = 0, len(syms)
    while i < n:
        if syms[i] == 1:
            j = i
            while j < n and syms[j] == 1:
                j += 1
            out.extend(ones(j - i + (1 if j - i == run else 0)))
            i = j
        else:
            out.append(syms[i])
            i += 1
    return tuple(out)


def _as_text(syms) -> str:
    return "".join(map(str, syms))


def free_of_run_pieces(syms, k: int) -> list:
    """Maximal subwords containing no ``1_k``, as inclusive ``(start, end)``."""
    text = _as_text(syms)
    starts = [m.start() for m in re.finditer(f"(?=1{{{k}}})", text)]
    n = len(syms)
    if not starts:
        return [(0, n - 1)] if n else []
    out = [(0, starts[0] + k - 2)]
    for a, b in zip(starts, starts[1:]):
        out.append((a + 1, b + k - 2))
    out.append((starts[-1] + 1, n - 1))
    return [(a, b) for a, b in dict.fromkeys(out) if a <= b]


def check_b_properties(w, n: int) -> BReport:
    """The five B(n) conditions; ``detail[k]`` locates a failure of property k+1."""
    syms = as_word(w).symbols if not isinstance(w, tuple) else w
    if any(s not in (0, 1) for s in syms):
        raise ValueError("B-family words are binary")
    rep = BReport(n)
    # 1. begins and ends with zero
    ok1 = bool(syms) and syms[0] == 0 and syms[-1] == 0
    rep.props.append(ok1)
    rep.detail.append(None if ok1 else (0, len(syms) - 1))
    # 2. no 1_{2n+1}
    pos = _as_text(syms).find("1" * (2 * n + 1))
    rep.props.append(pos < 0)
    rep.detail.append(None if pos < 0 else (pos, pos + 2 * n))
    padded = ones(2 * n) + tuple(syms) + ones(2 * n)
    # 3. pieces of the padded word free of 1_{2n} avoid Z_{n-1}
    bad3 = None
    if n >= 2:
        for a, b in free_of_run_pieces(padded, 2 * n):
            if contains_zimin(padded[a:b + 1], n - 1):
                bad3 = (a - 2 * n, b - 2 * n)
                break
    rep.props.append(bad3 is None)
    rep.detail.append(bad3)
    # 4. padded word avoids Z_n
    wit = find_zimin(padded, n)
    rep.props.append(wit is None)
    rep.detail.append(None if wit is None else tuple(x - 2 * n for x in wit.interval))
    # 5. bumped runs, longer padding
    bumped = ones(2 * n + 1) + bump_runs(tuple(syms), 2 * n) + ones(2 * n + 1)
    wit = find_zimin(bumped, n)
    rep.props.append(wit is None)
    rep.detail.append(None if wit is None else wit.interval)
    return rep


def b_base() -> list:
    """All 16 binary words of length 6 that begin and end with 0, as B(6) members."""
    return [BFamilyEntry(_word((0,) + mid + (0,), 2), 6)
            for mid in itertools.product((0, 1), repeat=4)]


def step_up_b(entries, verify: bool = False) -> BFamilyEntry:
    """``u_1 1_{2n+2} u_2 ... 1_{2n+2} u_b`` with even ``u_i`` run-bumped."""
    entries = list(entries)
    if len(entries) < 2:
        raise StepUpError("need at least two entries")
    n = entries[0].n
    if n < 6:
        raise StepUpError(f"stepping up B-families needs n >= 6, got {n}")
    if any(e.n != n for e in entries):
        raise StepUpError("entries must share a level")
    if len({len(e.word) for e in entries}) != 1:
        raise StepUpError("entries must have equal length")
    if len({e.word for e in entries}) != len(entries):
        raise StepUpError("entries must be pairwise distinct")
    sep = ones(2 * n + 2)
    out: list = []
    for i, e in enumerate(entries, 1):
        if i > 1:
            out.extend(sep)
        syms = e.word.symbols
        out.extend(syms if i % 2 else bump_runs(syms, 2 * n))
    res = BFamilyEntry(_word(out, 2), n + 1)
    if verify:
        rep = check_b_properties(res.word, n + 1)
        if not rep:
            raise StepUpError(f"stepped-up word failed: {rep}")
    return res


def split_b(entry: BFamilyEntry) -> list:
    """Recover the ``u_i`` of a level-n word built by :func:`step_up_b`.

    The separator is ``1_{2n}``; inputs have no longer runs than ``1_{2n-1}``
    after bumping, so separators are exactly the runs of ``2n`` ones.
    """
    sep = "1" * (2 * entry.n)
    text = _as_text(entry.word.symbols)
    parts = re.split(f"(?<=0){sep}(?=0)", text)
    return [tuple(int(c) for c in p) for p in parts]


def distinct_orderings(entries, count: int, step=step_up_b) -> list:
    """Step up ``count`` distinct orderings of ``entries`` (lexicographic permutation order)."""
    out: dict = {}
    for perm in itertools.permutations(entries):
        res = step(perm)
        out.setdefault(res.word, res)
        if len(out) == count:
            break
    return list(out.values())
