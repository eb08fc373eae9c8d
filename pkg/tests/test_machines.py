import numpy as np
import pytest
from hypothesis import given, strategies as st

from lmwb.machines import eval_letter, eval_y, evaluate_word, moved_mask, random_point, structured_points
from lmwb.seq import Order, Seq, Variant, eventually_equal, lex_compare
from lmwb.words import Direction, GroupWord, Letter, expand_y, parse_word_text, word_in_variant

from conftest import ARITIES, digits, seqs, words
from oracles import lazy_image


def S(text, n):
    return Seq.parse(text, n)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_eval_y_fixed_points(n):
    assert eval_y(1, S("(0)", n), n) == S("(0)", n)
    assert eval_y(1, Seq((), (n - 1,)), n) == Seq((), (n - 1,))


def test_eval_y_examples():
    assert eval_y(1, S("01(0)", 2), 2) == S("10(0)", 2)
    assert eval_letter(Letter.y((1, 0)), S("1001(0)", 2), 2) == S("1010(0)", 2)
    assert eval_letter(Letter.y((1, 1)), S("1001(0)", 2), 2) == S("1001(0)", 2)


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("m", [1, 5])
def test_tail_changing_point(n, m):
    top = n - 1
    w = GroupWord(n, (Letter.y((0, 0), -1), Letter.y((0,))))
    xi = Seq((0,) * (m + 3), (top, 0, 0, top))
    out = evaluate_word(w, xi)
    assert out == Seq((0,) * (m + 3), (top,) * 4 + (0,))
    assert not eventually_equal(xi, out)


@given(st.data())
def test_transducer_matches_lazy_recursion(data):
    n = data.draw(ARITIES)
    w = data.draw(words(n, max_len=8))
    xi = data.draw(seqs(n))
    assert evaluate_word(w, xi).take(300) == lazy_image(w.letters, n, xi, 300)


@given(st.data())
def test_eval_y_mutually_inverse(data):
    n = data.draw(ARITIES)
    xi = data.draw(seqs(n))
    assert eval_y(-1, eval_y(1, xi, n), n) == xi
    assert eval_y(1, eval_y(-1, xi, n), n) == xi


@given(st.data())
def test_letter_inverse_pair(data):
    n = data.draw(ARITIES)
    alpha, xi = data.draw(digits(n, 0, 4)), data.draw(seqs(n))
    y = Letter.y(alpha)
    assert eval_letter(y.inverse(), eval_letter(y, xi, n), n) == xi
    other = Seq(alpha[:-1] + ((alpha[-1] + 1) % n,), (0,)) if alpha else None
    if other is not None:
        assert eval_letter(y, other, n) == other


@given(st.data())
def test_word_times_inverse_is_trivial(data):
    n = data.draw(ARITIES)
    w, xi = data.draw(words(n, max_len=8)), data.draw(seqs(n))
    assert evaluate_word(w * w.inverse(), xi) == xi
    assert evaluate_word(GroupWord(n), xi) == xi


@given(st.data())
def test_expansions_agree(data):
    n = data.draw(st.sampled_from([2, 3]))
    alpha, xi = data.draw(digits(n, 0, 4)), data.draw(seqs(n))
    direct = eval_letter(Letter.y(alpha), xi, n)
    for d in Direction:
        assert evaluate_word(expand_y(alpha, d, n), xi) == direct


def test_expand_at_root():
    n = 3
    assert expand_y((), Direction.RIGHT, n) == parse_word_text("x0 y[0] y[20]' y[22]", n)


@given(st.data())
def test_order_preserving(data):
    n = data.draw(ARITIES)
    w = data.draw(words(n, max_len=6))
    a, b = data.draw(seqs(n)), data.draw(seqs(n))
    assert lex_compare(evaluate_word(w, a), evaluate_word(w, b)) == lex_compare(a, b)


@pytest.mark.parametrize("n", [2, 3])
def test_nontrivial_words_move_a_rational_point(n):
    """The center argument: a nontrivial element moves some s 0^omega with |s| <= 8."""
    rng = np.random.default_rng(7)
    probe = structured_points(n, 8 if n == 2 else 6)
    found = 0
    while found < 25:
        letters = tuple(Letter.y(tuple(int(d) for d in rng.integers(0, n, rng.integers(0, 3))),
                                 int(rng.choice([1, -1]))) if rng.random() < 0.5 else
                        Letter.x(int(rng.integers(0, n - 1)), tuple(int(d) for d in rng.integers(0, n, rng.integers(0, 3))),
                                 int(rng.choice([1, -1])))
                        for _ in range(rng.integers(1, 6)))
        pts = [random_point(rng, n) for _ in range(40)]
        if not moved_mask(letters, n, pts).any():
            continue  # could be trivial; only count certified non-identities
        found += 1
        assert moved_mask(letters, n, probe).any()


@pytest.mark.parametrize("n", [2, 3, 4])
def test_word_in_variant(n):
    assert word_in_variant(GroupWord(n, (Letter.y((n - 1, 0)),)), Variant.G0)
    assert not word_in_variant(GroupWord(n, (Letter.y((0,)),)), Variant.G0)
    for v in Variant:
        assert word_in_variant(GroupWord(n), v)


def test_parse_round_trip():
    corpus = ["x0 y[10]'", "x3", "x[0;011] y[] y[0]' x1'", "e", "y[00]+ y[01]-"]
    for text in corpus:
        w = parse_word_text(text, 2)
        assert parse_word_text(str(w), 2) == w
    assert str(parse_word_text("x3", 2)) == "x[0;111]"
