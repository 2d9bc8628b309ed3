import math
from decimal import Decimal, getcontext
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from zimin.bounds import (CAP_BITS, SQRT_E_REFERENCE, SQRT_E_UPPER, BoundValue, DomainError,
                          f2_exact, f3_lower, f3_upper_improved, f3_upper_rs, f_upper,
                          least_base_q, log_count_bound, recur_upper, t2_count, threshold_length,
                          tower_bound, two_minimal_words, verify_base_inequality)
from zimin.match import contains_zimin


def test_f2():
    assert f2_exact(1).exact == 3
    assert f2_exact(2).exact == 5


def test_recur_upper_examples():
    assert recur_upper(5, 2).exact == 197
    assert recur_upper(1, 1).exact == 3
    assert recur_upper(f2_exact(2), 2).exact == 197


def test_t2_count_small():
    assert t2_count(2).exact == 6
    words = {"".join("ab"[s] for s in w) for w in two_minimal_words(2)}
    assert words == {"aaa", "bbb", "aba", "bab", "abba", "baab"}


def test_two_minimal_words_are_minimal():
    for w in two_minimal_words(3):
        assert contains_zimin(w, 2)
        assert not contains_zimin(w[1:], 2) and not contains_zimin(w[:-1], 2)


def test_f3_values():
    assert f3_upper_rs(2).exact == 48
    assert f3_lower(5).exact == 2886
    with pytest.raises(DomainError):
        f3_lower(4)
    with pytest.raises(DomainError):
        f3_upper_improved(3)


def test_sqrt_e_upper_is_tight_overestimate():
    getcontext().prec = 60
    r = Decimal(SQRT_E_UPPER.numerator) / Decimal(SQRT_E_UPPER.denominator)
    ref = Decimal(SQRT_E_REFERENCE)
    assert r > ref
    assert r - ref < Decimal("1e-12")
    # the reference has 40 digits; it must also agree with the float value
    assert abs(float(ref) - math.exp(0.5)) < 1e-15


def test_improved_bound_dominates_exact_rational():
    for q in range(4, 15):
        v = f3_upper_improved(q).exact
        assert v >= 3 * Fraction(SQRT_E_UPPER) * 2 ** q * math.factorial(q)
        assert v > 3 * math.exp(0.5) * 2 ** q * math.factorial(q) * (1 - 1e-12)


def test_base_inequality_scan():
    assert verify_base_inequality(35)
    assert not verify_base_inequality(34)
    q0 = least_base_q(2, 100)
    assert q0 is not None and q0 <= 35


def test_threshold_length():
    rec = threshold_length(2, 365)
    assert rec.exact is None and rec.power == (365, Fraction(1, 2))
    assert threshold_length(3, 26).exact == 676
    assert threshold_length(3, 26) < f3_upper_improved(26)
    assert threshold_length(4, 4).power == (4, Fraction(11, 2))


def test_log_count_bound():
    for q in (2, 3, 7):
        assert log_count_bound(q ** 5, q).exact == 5
        assert log_count_bound(q ** 5 - 1, q).exact == 4
    assert log_count_bound(1, 2).exact == 0
    with pytest.raises(DomainError):
        log_count_bound(0, 2)


@given(st.integers(1, 10 ** 40), st.integers(2, 50))
def test_log_count_bound_is_floor(m, q):
    k = log_count_bound(m, q).exact
    assert q ** k <= m < q ** (k + 1)


def test_tower_bound_small():
    assert tower_bound(3, 3).exact == 27
    assert tower_bound(4, 2).exact == 16
    assert tower_bound(6, 2).exact == 2 ** 65536
    t = tower_bound(4, 35)
    assert not t.is_exact and t.height == 2


def test_tower_ordering_is_consistent():
    vals = [tower_bound(n, q) for n in range(3, 8) for q in (2, 3, 35)]
    vals += [f_upper(n, 2) for n in range(2, 8)]
    vals.sort()
    for a, b in zip(vals, vals[1:]):
        assert a <= b
    for a in vals:
        for b in vals:
            for c in vals:
                if a < b and b < c:
                    assert a < c


def test_chain_is_increasing():
    prev = None
    for n in range(2, 8):
        v = f_upper(n, 2)
        if prev is not None:
            assert prev < v
        prev = v


def test_exact_to_tower_switch():
    big = BoundValue.of("x", "x", 2 ** (CAP_BITS + 10))
    assert not big.is_exact and big.height >= 1
    assert BoundValue.of("y", "y", 2 ** 100) < big


def test_render_large_exact():
    v = BoundValue.of("x", "x", 10 ** 5000)
    assert "5001 digits" in v.render()
