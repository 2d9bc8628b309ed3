"""Acceptance criteria, one test per criterion.

The conftest prints a PASS/FAIL line per criterion in the terminal summary.
Time limits are wall-clock ceilings measured inside each test.
"""
import itertools
import math
import time

from zimin.bounds import (f3_lower, f3_upper_improved, f3_upper_rs, t2_count, threshold_length,
                          two_minimal_words, verify_base_inequality)
from zimin.constructions import (check_property_p, check_strong_connectivity, crt_construct,
                                 crt_letter_at, crt_schedule, euler_construct_improved,
                                 euler_construct_p, improved_digraph, out_neighbours, plain_digraph)
from zimin.explorer import estimate_threshold, exact_f
from zimin.match import (Pattern, Status, contains_pattern, contains_zimin, is_unavoidable,
                         zimin_pattern)
from zimin.stepup import (b_base, check_b_properties, check_s_membership, distinct_orderings,
                          sample_s3_entries, step_up_b, step_up_s)
from zimin.words import Word

CHARS = "abcdefghijklmnopqrstuvwxyz"


class Timer:
    def __init__(self, limit):
        self.limit = limit

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0
        if exc[0] is None:
            assert self.elapsed < self.limit, f"took {self.elapsed:.1f}s, limit {self.limit}s"


def test_criterion_01_oracle_equivalence():
    """zero disagreements over binary <= 14 and ternary <= 9, n in {2,3}; < 300 s"""
    with Timer(300):
        disagreements = 0
        checked = 0
        for n in (2, 3):
            pat = zimin_pattern(n)
            for q, max_len in ((2, 14), (3, 9)):
                for L in range(max_len + 1):
                    for syms in itertools.product(range(q), repeat=L):
                        w = Word.of(syms, q)
                        res = contains_pattern(w, pat)
                        assert res.decided
                        disagreements += contains_zimin(w, n) != bool(res)
                        checked += 1
    assert checked == 2 * (2 ** 15 - 1 + (3 ** 10 - 1) // 2)
    assert disagreements == 0


def test_criterion_02_f2_exhaustive():
    """f(2,q) == 2q+1 exactly for q = 1..4; < 60 s"""
    with Timer(60):
        for q in (1, 2, 3, 4):
            res = exact_f(2, q)
            assert res.exact and res.value == 2 * q + 1


def test_criterion_03_f3_2_exhaustive():
    """exhaustive, value <= 48, maximal word and both extensions re-verified; < 600 s"""
    with Timer(600):
        res = exact_f(3, 2)
    assert res.exact
    assert res.value <= f3_upper_rs(2).exact == 48
    best = res.longest_found
    assert not contains_zimin(best, 3)
    assert all(contains_zimin(Word.of(best.symbols + (a,), 2), 3) for a in range(2))
    assert res.extensions_checked


def test_criterion_04_euler_plain():
    """length == 2q!+q-1, property P, Z_3-free for q = 3..6; < 60 s"""
    with Timer(60):
        for q in range(3, 7):
            w = euler_construct_p(q)
            assert len(w) == 2 * math.factorial(q) + q - 1
            assert check_property_p(w, q)
            assert not contains_zimin(w, 3)


def test_criterion_05_euler_improved():
    """verbatim out-neighbourhood, lengths 2886 and 34568 exactly, Z_3-free; q=6 < 120 s"""
    g = improved_digraph(5)
    v = tuple(CHARS.index(c) for c in "abbccd")
    key = next(u for u in g.succ if g.spell(u) == v)
    got = {"".join(CHARS[s] for s in t) for t in out_neighbours(g, key)}
    assert got == {"bccde", "bccdde", "bccda", "bccdda"}
    w5 = euler_construct_improved(5)
    assert len(w5) == 2886
    assert not contains_zimin(w5, 3)
    with Timer(120):
        w6 = euler_construct_improved(6)
        assert len(w6) == 34568
        assert not contains_zimin(w6, 3)


def test_criterion_06_strong_connectivity():
    """single strongly connected component, plain q = 3..6 and improved q = 5"""
    for q in range(3, 7):
        assert check_strong_connectivity(plain_digraph(q))
    assert check_strong_connectivity(improved_digraph(5))


def test_criterion_07_crt():
    """periods (22, 21) coprime, length 168, letter_at matches every position, Z_3-free"""
    sched = crt_schedule(2, 4)
    assert sched.periods == (22, 21)
    assert math.gcd(*sched.periods) == 1
    w = crt_construct(sched)
    assert len(w) == sched.length == 168
    assert all(crt_letter_at(sched, i) == s for i, s in enumerate(w.symbols))
    assert not contains_zimin(w, 3)


def test_criterion_08_stepup_binary():
    """16 base words in B(6), length 306 in B(7), 4 distinct level-7 words give B(8); < 300 s"""
    with Timer(300):
        base = b_base()
        assert len(base) == 16
        assert all(check_b_properties(e.word, 6).ok for e in base)
        w7 = step_up_b(base)
        assert len(w7.word) == 306
        assert check_b_properties(w7.word, 7).ok
        level7 = distinct_orderings(base, 4)
        assert len({e.word for e in level7}) == 4
        assert all(check_b_properties(e.word, 7).ok for e in level7)
        w8 = step_up_b(level7)
        assert check_b_properties(w8.word, 8).ok


def test_criterion_09_stepup_s():
    """4 distinct checked S(3,8) words step to a word in S(4,10); < 300 s"""
    with Timer(300):
        entries = sample_s3_entries(8, 4, 12, seed=0)
        assert len({e.word for e in entries}) == 4
        assert all(check_s_membership(e.word, 3, 8, 7) for e in entries)
        out = step_up_s(entries)
        assert out.q == 10 and out.n == 4
        assert check_s_membership(out.word, 4, 10, out.d)


def test_criterion_10_bounds_arithmetic():
    """exact integer comparisons; f3_upper_improved(26) in [1e33, 1e36]"""
    for q in range(1, 21):
        assert t2_count(q).exact <= 2 ** q * math.factorial(q) - 1
    for q in range(1, 6):
        assert len(two_minimal_words(q)) == t2_count(q).exact
    assert verify_base_inequality(35)
    for q in range(5, 31):
        assert f3_lower(q) < f3_upper_improved(q)
    assert 10 ** 33 <= f3_upper_improved(26).exact <= 10 ** 36


def test_criterion_11_random_threshold():
    """200 trials, P >= 0.5 at (q=26, N=1000); n=2 crossing within factor 4 of 365^(1/2); fixed seeds; < 300 s"""
    with Timer(300):
        est = estimate_threshold(3, 26, [1000], 200, seed=20170101)
        assert est.probs[0] >= 0.5
        lengths = list(range(2, 121))
        est2 = estimate_threshold(2, 365, lengths, 200, seed=20170102)
        ref = 2.0 ** threshold_length(2, 365).log2()
        crossing = est2.median_crossing
        assert crossing is not None
        assert ref / 4 <= crossing <= ref * 4


def test_criterion_12_classifier():
    """aba, abacaba unavoidable; xx avoidable; Clark's pattern never FOUND against Z_9"""
    assert is_unavoidable(Pattern.from_str("aba"))
    assert is_unavoidable(Pattern.from_str("abacaba"))
    assert not is_unavoidable(Pattern.from_str("xx"))
    res = is_unavoidable(Pattern.from_str("abvacwbaxbcycdazdcd"))
    # a budget-exceeded verdict is acceptable; FOUND is a failure
    assert res.status in (Status.ABSENT, Status.UNDECIDED)
    assert res.status is not Status.FOUND
