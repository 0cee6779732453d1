from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from autoreal.digits import (
    Lasso,
    SIGNED,
    binary_expansions,
    canonical_expansion,
    dy,
    lasso,
    normalize_lasso,
    parse_lasso,
    sanitize_lasso,
    sanitize_signed,
    value_binary,
    value_lasso,
    value_signed,
    word,
    word_str,
)


def test_value_binary_examples():
    assert value_binary(word("101")) == Fraction(5, 8)
    assert value_binary(()) == 0
    assert value_binary(word("0111")) == Fraction(7, 16)


def test_value_signed_examples():
    assert value_signed((1, -1, 0)) == Fraction(1, 4)
    assert value_signed((0, 0)) == 0
    assert value_signed((-1, 1)) == Fraction(-1, 4)


def test_value_lasso_examples():
    assert value_lasso(lasso("", "01")) == Fraction(1, 3)
    assert value_lasso(lasso("1", "0")) == Fraction(1, 2)
    assert value_lasso(lasso("", "1")) == 1


def test_lasso_requires_period():
    with pytest.raises(ValueError):
        Lasso((), ())


def test_binary_expansions_dyadic():
    assert {str(w) for w in binary_expansions(Fraction(1, 2))} == {"1(0)", "0(1)"}
    assert {str(w) for w in binary_expansions(0)} == {"(0)"}
    assert {str(w) for w in binary_expansions(1)} == {"(1)"}


def test_binary_expansions_third_vs_bruteforce():
    # independent oracle: enumerate all small lassos with the right value
    want = {
        str(normalize_lasso(Lasso(p, c)))
        for p in _words(3)
        for c in _words(3)
        if c and value_lasso(Lasso(p, c)) == Fraction(1, 3)
    }
    got = {str(normalize_lasso(w)) for w in binary_expansions(Fraction(1, 3))}
    assert got == {"(01)"}
    assert got <= want


def _words(n):
    res = [()]
    frontier = [()]
    for _ in range(n):
        frontier = [w + (d,) for w in frontier for d in (0, 1)]
        res += frontier
    return res


@given(st.integers(1, 64), st.integers(0, 64))
@settings(max_examples=150)
def test_binary_expansions_round_trip(q, p):
    if p > q:
        p = p % (q + 1)
    x = Fraction(p, q)
    reps = binary_expansions(x)
    den = x.denominator
    if den & (den - 1) == 0 and 0 < x < 1:
        assert len(reps) == 2
    else:
        assert len(reps) == 1
    for w in reps:
        assert value_lasso(w) == x


def test_dy_examples():
    assert dy((0, -1, 1)) == (0, 0, 0)
    assert dy((1, -1, 1)) == (0, 1, 1)
    assert dy((1, 0, 0)) == (1, 0, 0)


def test_dy_matches_value_exhaustively():
    # every signed word up to length 7: value_binary(dy(w)) = max(value, 0)
    frontier = [()]
    for _ in range(7):
        frontier = [w + (d,) for w in frontier for d in (-1, 0, 1)]
        for w in frontier:
            assert value_binary(dy(w)) == max(value_signed(w), 0)


def test_sanitize_signed():
    import itertools

    src = iter([0, 0, -1, 1, 1, 1])
    got = [d for d, _ in zip(sanitize_signed(src), range(6))]
    assert got == [0, 0, 0, 0, 0, 0]

    src = iter([0, 1, -1, 0])
    assert list(sanitize_signed(src)) == [0, 1, -1, 0]

    src = itertools.repeat(0)
    assert [d for d, _ in zip(sanitize_signed(src), range(4))] == [0, 0, 0, 0]


def test_sanitize_lasso():
    assert str(sanitize_lasso(Lasso((0, 0, -1), (1,), SIGNED))) == "(0)"
    assert str(sanitize_lasso(Lasso((0, 1), (-1,), SIGNED))) == "01(m)"
    assert str(sanitize_lasso(Lasso((), (0,), SIGNED))) == "(0)"


def test_separation_small_exhaustive():
    # words of equal length n with values more than 2^-n apart never
    # share a lasso extension value
    for n in range(1, 6):
        ws = [w for w in _words(n) if len(w) == n]
        exts = [Lasso(p, c) for p in _words(2) for c in _words(2) if c]
        for i, a in enumerate(ws):
            for b in ws[i + 1:]:
                if abs(value_binary(a) - value_binary(b)) <= Fraction(1, 1 << n):
                    continue
                va = {value_binary(a) + value_lasso(e) / (1 << n) for e in exts}
                vb = {value_binary(b) + value_lasso(e) / (1 << n) for e in exts}
                assert not (va & vb)


@given(st.lists(st.integers(0, 1), max_size=6),
       st.lists(st.integers(0, 1), min_size=1, max_size=6),
       st.integers(1, 4))
@settings(max_examples=200)
def test_normalize_lasso_preserves_word(prefix, period, unroll):
    w = Lasso(tuple(prefix), tuple(period))
    rolled = Lasso(tuple(prefix) + tuple(period) * unroll, tuple(period))
    n1, n2 = normalize_lasso(w), normalize_lasso(rolled)
    assert (n1.prefix, n1.period) == (n2.prefix, n2.period)
    for i in range(len(prefix) + 3 * len(period)):
        assert n1.digit(i) == w.digit(i)


def test_lasso_text_round_trip():
    w = lasso("10", "011")
    assert parse_lasso(str(w)) == w
    assert word_str(word("01m")) == "01m"


def test_canonical_expansion_prefers_zero_tail():
    w = canonical_expansion(Fraction(3, 8))
    assert value_lasso(w) == Fraction(3, 8)
    assert w.period == (0,)
    assert canonical_expansion(1).period == (1,)
