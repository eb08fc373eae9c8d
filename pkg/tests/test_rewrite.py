import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from lmwb import fn
from lmwb.machines import evaluate_word, points_sample
from lmwb.rewrite import (
    Inconclusive, Verdict, collapse_to_fn, equals_words, in_fn, is_identity, to_standard_form,
)
from lmwb.words import GroupWord, Letter, parse_word_text, x_only_treepair

from conftest import ARITIES, seqs, words


def W(text, n):
    return parse_word_text(text, n)


def fixtures(n):
    """Identities of the form lhs = rhs, in the parser's notation."""
    t = n - 1
    c = f"x0 x0 x{2 * t} x{t}' x0'"
    c_inv = f"x0 x{t} x{2 * t}' x0' x0'"
    return [
        ("y[00]", "x0 y[0] x0'"),
        (f"y[0{t}0]", f"{c} y[0{t}{t}] {c_inv}"),
        ("x[0;0]", f"x0 x0 x{t}' x0'"),
        (f"y[{t}{t}{t}]", f"x0' x0' y[{t}] x0 x0"),
        (f"y[{t}0]", f"x0 y[{t}{t}0] x0'"),
        (f"x[0;{t}]", f"x{t}"),
        ("y[0] x0 y[0]'", f"x0 x0 y[{t}{t}0] y[{t}0]' x{t}'"),
    ]


@pytest.mark.parametrize("n", [2, 3, 4])
def test_identity_fixtures(n):
    rng = np.random.default_rng(n)
    pts = points_sample(rng, n, 100)
    for lhs, rhs in fixtures(n):
        a, b = W(lhs, n), W(rhs, n)
        assert equals_words(a, b), (lhs, rhs)
        assert all(evaluate_word(a, p) == evaluate_word(b, p) for p in pts)


@pytest.mark.parametrize("n", [2, 3])
def test_wrong_identity_is_refuted(n):
    res = is_identity(W(f"y[{n - 1}0]", n))
    assert res.verdict is Verdict.FALSE
    assert res.witness is not None
    assert evaluate_word(W(f"y[{n - 1}0]", n), res.witness) != res.witness
    assert not equals_words(W("y[00]", n), W("x0' y[0] x0", n))


def test_empty_word_is_identity():
    assert is_identity(GroupWord(2)).verdict is Verdict.TRUE


@pytest.mark.parametrize("n", [2, 3])
def test_x_only_standard_form(n):
    w = W("x0 x1' x[0;10] x2", n)
    sf = to_standard_form(w)
    assert not sf.ypart and fn.equals(sf.fpart, x_only_treepair(w))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_conjugate_of_x0_lands_in_g0(n):
    t = n - 1
    sf = to_standard_form(W("y[0] x0 y[0]'", n))
    target = W(f"x0 x0 y[{t}{t}0] y[{t}0]' x{t}'", n)
    rng = np.random.default_rng(0)
    for p in points_sample(rng, n, 100):
        assert sf.evaluate(p) == evaluate_word(target, p)


@pytest.mark.parametrize("n", [2, 3])
def test_collapse_into_fn(n):
    t = n - 1
    w = W(f"y[1] y[10]' y[1{t}0] y[1{t}{t}]'", n)
    h = collapse_to_fn(w.letters, n)
    assert h is not None and fn.equals(h, fn.generator_x_at(0, (1,), n))
    assert in_fn(w) is Verdict.TRUE
    assert in_fn(W(f"y[{t}0]", n)) is Verdict.FALSE


@given(st.data())
def test_standard_form_sound(data):
    n = data.draw(ARITIES)
    w = data.draw(words(n, max_len=6))
    sf = to_standard_form(w)
    for _ in range(10):
        xi = data.draw(seqs(n))
        assert sf.evaluate(xi) == evaluate_word(w, xi)


@given(st.data())
def test_cancelling_words(data):
    n = data.draw(st.sampled_from([2, 3]))
    w = data.draw(words(n, max_len=6))
    u = data.draw(words(n, max_len=3))
    # w u u^{-1} w^{-1}: free reduction alone does not see the whole cancellation order
    assert to_standard_form(w * w.inverse()).is_identity()
    assert is_identity(w * u * u.inverse() * w.inverse()).verdict is Verdict.TRUE


def test_inconclusive_is_not_truthy():
    from lmwb.rewrite import IdentityResult

    with pytest.raises(Inconclusive):
        bool(IdentityResult(Verdict.INCONCLUSIVE))


def test_random_non_identities():
    rng = random.Random(4)
    nrng = np.random.default_rng(4)
    checked = 0
    while checked < 40:
        n = rng.choice((2, 3))
        letters = tuple(Letter.y(tuple(rng.randrange(n) for _ in range(rng.randint(0, 3))), rng.choice((1, -1)))
                        for _ in range(rng.randint(1, 5)))
        w = GroupWord(n, letters)
        moved = [p for p in points_sample(nrng, n, 50) if evaluate_word(w, p) != p]
        if not moved:
            continue
        checked += 1
        res = is_identity(w)
        assert res.verdict is Verdict.FALSE
