import itertools

import pytest
from hypothesis import given, strategies as st

from lmwb.seq import (
    Order, Seq, Variant, canonical, classify_y_address, comparable, concat, eventually_equal,
    is_prefix, lex_compare, parse_word,
)

from conftest import ARITIES, seqs


def S(text, n=2):
    return Seq.parse(text, n)


def test_concat_examples():
    assert concat((), (0, 1)) == (0, 1)
    assert concat((1,), S("0(1)")) == S("10(1)")
    assert concat((0,), S("(01)")) == S("0(01)")
    assert concat((0,), S("(01)")).take(20) == (0,) + (0, 1) * 9 + (0,)


def test_canonical_absorbs_suffix_and_primitive_period():
    assert canonical((1, 0, 1), (0, 1)) == ((), (1, 0))
    assert canonical((1, 1), (0, 1)) == ((1,), (1, 0))
    assert canonical((), (0, 0, 0)) == ((), (0,))
    assert S("1010(10)") == S("1(01)") == S("(10)")


def test_lex_compare_examples():
    assert lex_compare(S("(0)"), S("(1)")) is Order.LT
    assert lex_compare(S("0(10)"), S("(01)")) is Order.EQ
    assert lex_compare(S("1(0)"), S("(1)")) is Order.LT


def test_eventually_equal_examples():
    assert eventually_equal(S("01(1)"), S("(1)"))
    assert eventually_equal(S("(10)"), S("(01)"))
    assert not eventually_equal(S("(11100)"), S("(1001)"))


@pytest.mark.parametrize("n", [2, 3, 5])
def test_classify_examples(n):
    top = n - 1
    assert classify_y_address((top, 0), Variant.G0, n)
    assert not classify_y_address((0,), Variant.G0, n)
    assert classify_y_address((), Variant.yGy, n)


def test_yG_literal_set_switch():
    assert classify_y_address((0,), Variant.yG, 2)
    assert not classify_y_address((0,), Variant.yG, 2, literal_yG=True)


def test_prefix_examples():
    assert is_prefix((), S("(1)"))
    assert is_prefix((1, 0), (1, 0, 0))
    assert is_prefix((1, 0), S("1(0)"))
    assert not comparable((0, 1), (1,))


def test_parse_rejects_bad_digits():
    with pytest.raises(ValueError):
        parse_word("2", 2)
    with pytest.raises(ValueError):
        Seq.parse("01", 2)


@given(st.data())
def test_canonical_idempotent(data):
    n = data.draw(ARITIES)
    xi = data.draw(seqs(n))
    assert canonical(xi.prefix, xi.period) == (xi.prefix, xi.period)


@given(st.data())
def test_lex_compare_total_order(data):
    n = data.draw(ARITIES)
    a, b, c = (data.draw(seqs(n)) for _ in range(3))
    ab, ba = lex_compare(a, b), lex_compare(b, a)
    assert ab == -ba
    assert (ab is Order.EQ) == (a == b)
    if ab is Order.LT and lex_compare(b, c) is Order.LT:
        assert lex_compare(a, c) is Order.LT
    # agrees with comparing long expansions
    k = 2 * (len(a.prefix) + len(b.prefix)) + 4 * len(a.period) * len(b.period) + 2
    assert (a.take(k) > b.take(k)) - (a.take(k) < b.take(k)) == int(ab)


@given(st.data())
def test_eventually_equal_equivalence(data):
    n = data.draw(ARITIES)
    a = data.draw(seqs(n))
    b = Seq(data.draw(st.lists(st.integers(0, n - 1), max_size=4).map(tuple)), a.period)
    c = data.draw(seqs(n))
    assert eventually_equal(a, a)
    assert eventually_equal(a, b) and eventually_equal(b, a)
    if eventually_equal(b, c):
        assert eventually_equal(a, c)


def _brute_period(symbols):
    for total in range(1, len(symbols)):
        for per in range(1, min(total, 30) + 1):
            pre = total - per
            if all(symbols[i] == symbols[i + per] for i in range(pre, len(symbols) - per)):
                return tuple(symbols[:pre]), tuple(symbols[pre:pre + per])
    raise AssertionError("no period found")


@given(st.data())
def test_rederive_from_expansion(data):
    n = data.draw(ARITIES)
    xi = data.draw(seqs(n))
    pre, per = _brute_period(xi.take(200))
    assert eventually_equal(Seq(pre, per), xi)
    assert Seq(pre, per) == xi


@pytest.mark.parametrize("n", [2, 3, 4])
def test_lex_compare_exhaustive_small(n):
    pts = [Seq(p, q) for p in itertools.product(range(n), repeat=2) for q in [(0,), (n - 1,), (0, n - 1)]]
    for a, b in itertools.combinations(pts, 2):
        assert (lex_compare(a, b) is Order.EQ) == (a.take(40) == b.take(40))
