import pytest
from hypothesis import given, strategies as st

from zimin.match import contains_zimin
from zimin.stepup import (BFamilyEntry, SFamilyEntry, StepUpError, b_base, bump_runs,
                          check_b_properties, check_s_membership, d_free_pieces, distinct_orderings,
                          free_of_run_pieces, sample_s3_entries, split_b, split_s, step_up_b,
                          step_up_s)
from zimin.words import Word, parse_word, zimin


def test_s_membership_examples():
    assert check_s_membership(zimin(2), 3, 2, 1)
    res = check_s_membership("abab", 3, 3, 2)
    assert not res and res.avoids and res.bad_piece == (0, 3)
    assert not check_s_membership("abacaba", 3, 3, 2)


def test_d_free_pieces():
    assert d_free_pieces(parse_word("abcbba"), 1) == [(0, 0), (2, 2), (5, 5)]


def test_step_up_s_shape():
    a = SFamilyEntry(parse_word("aba", q=3), 2, 3, 2)
    b = SFamilyEntry(parse_word("bab", q=3), 2, 3, 2)
    out = step_up_s([a, b])
    assert out.q == 5 and out.d == 4 and out.n == 3
    assert len(out.word) == 2 * 3 + 1


def test_step_up_s_renames_distinguished():
    a = SFamilyEntry(Word.of([0, 2, 1], 3), 2, 3, 2)
    b = SFamilyEntry(Word.of([1, 2, 0], 3), 2, 3, 2)
    c = SFamilyEntry(Word.of([2, 0], 3), 2, 3, 2)
    out = step_up_s([a, b, c])
    # odd entries get c1 = q = 3, even ones keep c0 = 2
    assert out.word.symbols == (0, 3, 1, 4, 1, 2, 0, 4, 3, 0)
    pieces = split_s(out)
    assert pieces == [(0, 3, 1), (1, 2, 0), (3, 0)]


def test_step_up_s_errors():
    a = SFamilyEntry(parse_word("aba", q=3), 2, 3, 2)
    with pytest.raises(StepUpError):
        step_up_s([a, a])
    with pytest.raises(StepUpError):
        step_up_s([a])


def test_s3_sampling_and_step():
    entries = sample_s3_entries(8, 6, 12, seed=2)
    out = step_up_s(entries, verify=True)
    assert len(out.word) >= len(entries)
    assert len(out.word) == sum(len(e.word) + 1 for e in entries) - 1


def test_b_base():
    base = b_base()
    assert len(base) == 16
    assert len({e.word for e in base}) == 16
    assert all(e.word.symbols[0] == 0 == e.word.symbols[-1] for e in base)
    assert check_b_properties((0,) * 6, 6).ok


def test_b_properties_small_examples():
    rep = check_b_properties((0, 1, 0), 6)
    assert rep.props[0] and rep.props[1]
    rep = check_b_properties((0,) + (1,) * 13 + (0,), 6)
    assert not rep.props[1]
    assert rep.detail[1] == (1, 13)
    rep = check_b_properties((1, 0), 6)
    assert not rep.props[0]


@given(st.lists(st.integers(0, 1), max_size=30), st.integers(1, 4))
def test_bump_runs_adds_one_per_exact_run(syms, run):
    out = bump_runs(tuple(syms), run)
    text = "0" + "".join(map(str, syms)) + "0"
    exact = sum(len(r) == run for r in text.split("0") if r)
    assert len(out) == len(syms) + exact
    assert out.count(0) == syms.count(0)


def test_free_of_run_pieces():
    syms = (0, 1, 1, 0, 1, 1, 1, 0)
    pieces = free_of_run_pieces(syms, 2)
    for a, b in pieces:
        assert "11" not in "".join(map(str, syms[a:b + 1]))
    # maximal: extending any piece by one symbol creates 11
    for a, b in pieces:
        if b + 1 < len(syms):
            assert "11" in "".join(map(str, syms[a:b + 2]))


def test_step_up_b_full_base():
    base = b_base()
    out = step_up_b(base, verify=True)
    assert len(out.word) == 16 * 6 + 15 * 14
    assert split_b(out)[0::2] == [e.word.symbols for e in base][0::2]
    # even pieces are bumped copies
    assert split_b(out)[1::2] == [bump_runs(e.word.symbols, 12) for e in base][1::2]


def test_step_up_b_errors():
    base = b_base()
    with pytest.raises(StepUpError):
        step_up_b([base[0], base[0]])
    with pytest.raises(StepUpError):
        step_up_b([BFamilyEntry(e.word, 5) for e in base[:2]])
    with pytest.raises(StepUpError):
        step_up_b([base[0], BFamilyEntry(Word.of((0, 0), 2), 6)])


def test_distinct_orderings_have_equal_lengths():
    outs = distinct_orderings(b_base()[:5], 6)
    assert len({o.word for o in outs}) == 6
    assert len({len(o.word) for o in outs}) == 1
    assert all(not contains_zimin(o.word, 7) for o in outs)
