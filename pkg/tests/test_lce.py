from hypothesis import given, settings, strategies as st

from zimin.lce import LceTable, naive_lce, suffix_array

words = st.lists(st.integers(0, 3), min_size=1, max_size=60)


@given(words)
def test_suffix_array_sorts_suffixes(w):
    sa = suffix_array(w).tolist()
    assert sa == sorted(range(len(w)), key=lambda i: w[i:])


@settings(max_examples=200)
@given(words, st.data())
def test_lce_matches_naive(w, data):
    tab = LceTable(w)
    i = data.draw(st.integers(0, len(w) - 1))
    j = data.draw(st.integers(0, len(w) - 1))
    assert tab.lce(i, j) == naive_lce(w, i, j)
    assert tab(i, j) == tab(j, i)


def test_lce_all_pairs_small():
    w = [0, 1, 0, 0, 1, 0, 1, 0]
    tab = LceTable(w)
    for i in range(len(w)):
        for j in range(len(w)):
            assert tab.lce(i, j) == naive_lce(w, i, j)


def test_out_of_range_is_zero():
    tab = LceTable([0, 1])
    assert tab.lce(0, 2) == 0
