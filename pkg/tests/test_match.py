import itertools
from functools import lru_cache

import pytest
from hypothesis import given, settings, strategies as st

from zimin.match import (Pattern, Status, UndecidedError, contains_pattern, contains_zimin,
                         find_zimin, image_of, is_unavoidable, min_end_table, reduces_by_free_sets,
                         scan_free, validate_witness, zimin_pattern)
from zimin.words import parse_word, zimin


def definitional_contains(w, n):
    """Straight from the definition: some factor splits as A B A with A an image of Z_{n-1}."""
    w = tuple(w)

    @lru_cache(maxsize=None)
    def image(u, m):
        if m == 1:
            return len(u) >= 1
        for a in range(1, (len(u) - 1) // 2 + 1):
            if u[:a] == u[-a:] and image(u[:a], m - 1):
                return True
        return False

    return any(image(w[i:j], n) for i in range(len(w)) for j in range(i + 1, len(w) + 1))


small_words = st.lists(st.integers(0, 2), max_size=16)


@settings(max_examples=300)
@given(small_words, st.integers(1, 3))
def test_dp_matches_definition(w, n):
    assert contains_zimin(w, n) == definitional_contains(w, n)


@settings(max_examples=200)
@given(st.lists(st.integers(0, 3), max_size=40), st.integers(1, 4))
def test_find_and_lce_methods_agree(w, n):
    assert contains_zimin(w, n, "find") == contains_zimin(w, n, "lce")


@settings(max_examples=200)
@given(st.lists(st.integers(0, 2), max_size=40), st.integers(1, 4))
def test_witness_is_valid(w, n):
    wit = find_zimin(w, n)
    assert (wit is None) == (not contains_zimin(w, n))
    if wit is not None:
        assert validate_witness(w, wit)


def test_zimin_contains_itself_and_not_next():
    for n in range(1, 8):
        assert contains_zimin(zimin(n), n)
        assert not contains_zimin(zimin(n), n + 1)


def test_known_words():
    assert contains_zimin("abacaba", 3)
    assert not contains_zimin("abcabc", 3)
    assert contains_zimin("aaa", 2)
    assert not contains_zimin("aa", 2)
    assert not contains_zimin("", 1)


def test_scan_free_is_shortest_prefix():
    w = parse_word("abcbad")
    e = scan_free(w, 2)
    assert e == 3  # "abcb" is the shortest prefix containing x y x
    assert not contains_zimin(w[: e], 2)
    assert scan_free("abc", 2) is None


def test_min_end_table_levels():
    tab = min_end_table("abacaba", 3)
    assert tab.contains(1) and tab.contains(2) and tab.contains(3)


def test_pattern_relabels_densely():
    p = Pattern.from_str("xyxzx")
    assert p.symbols == (0, 1, 0, 2, 0) and p.k == 3
    assert str(p) == "abaca"


def test_pattern_search_reports_images():
    w = parse_word("cabcabd")
    p = Pattern.from_str("xx")
    res = contains_pattern(w, p)
    assert res.status is Status.FOUND
    blocks = image_of(w, p, res)
    assert blocks[0] == blocks[1]


def pattern_brute(w, p):
    """All substitutions with image lengths bounded by |w|."""
    w = tuple(w)
    n = len(w)
    for lens in itertools.product(range(1, n + 1), repeat=p.k):
        total = sum(lens[v] for v in p.symbols)
        if total > n:
            continue
        for start in range(n - total + 1):
            pos, img, ok = start, {}, True
            for v in p.symbols:
                piece = w[pos:pos + lens[v]]
                if img.setdefault(v, piece) != piece:
                    ok = False
                    break
                pos += lens[v]
            if ok:
                return True
    return False


patterns = st.lists(st.integers(0, 2), min_size=1, max_size=5).map(Pattern.of)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 1), max_size=9), patterns)
def test_pattern_search_matches_brute_force(w, p):
    res = contains_pattern(w, p)
    assert res.decided
    assert bool(res) == pattern_brute(w, p)


@settings(max_examples=150, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=1, max_size=7).map(Pattern.of))
def test_unavoidability_two_routes_agree(p):
    assert bool(is_unavoidable(p)) == reduces_by_free_sets(p)


@pytest.mark.parametrize("text,expected", [
    ("aba", True), ("abacaba", True), ("xx", False), ("abab", False),
    ("abcba", True), ("abxba", True),
])
def test_classic_patterns(text, expected):
    p = Pattern.from_str(text)
    assert bool(is_unavoidable(p)) is expected
    assert reduces_by_free_sets(p) is expected


def test_budget_exhaustion_is_undecided():
    res = contains_pattern(zimin(9), Pattern.from_str("abvacwbaxbcycdazdcd"), budget=1000)
    assert res.status is Status.UNDECIDED
    with pytest.raises(UndecidedError):
        bool(res)


def test_zimin_pattern_in_zimin_word():
    for n in range(1, 6):
        assert contains_pattern(zimin(n), zimin_pattern(n))
