import dataclasses
import random

import numpy as np
import pytest

from lmwb import hnn
from lmwb.hnn import CaseId, conjugate_by_stable, get_case, in_base
from lmwb.machines import evaluate_word, points_sample
from lmwb.seq import Seq
from lmwb.words import GroupWord, Letter, parse_word_text, xnum

CASES = list(CaseId)


def W(text, n):
    return parse_word_text(text, n)


def random_base_word(case, n, rng, max_len=4):
    gens = hnn.base_generators(case, n, 3)
    return GroupWord(n, tuple(rng.choice(gens) if rng.random() < 0.5 else rng.choice(gens).inverse()
                              for _ in range(rng.randint(0, max_len))))


def test_bt_shift():
    assert conjugate_by_stable("bt", GroupWord(2, (xnum(1, 2),))) == GroupWord(2, (xnum(2, 2),))


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("cid", [CaseId.N5, CaseId.N7])
def test_closed_form_for_x0(cid, n):
    t = n - 1
    got = conjugate_by_stable(cid, W("x0", n))
    assert got == W(f"x0 x0 y[{t}{t}0] y[{t}0]' x[0;{t}]'", n)


@pytest.mark.parametrize("cid", CASES)
def test_empty_word(cid):
    assert conjugate_by_stable(cid, GroupWord(3)) == GroupWord(3)


@pytest.mark.parametrize("n", [2, 3])
def test_f1_address_rule(n):
    t = n - 1
    for beta in [(0, t), (t, 0, t), (0, 0, t, t)]:
        w = GroupWord(n, (Letter.y((t,) + beta),))
        assert conjugate_by_stable("f1", w) == GroupWord(n, (Letter.y((t, t) + beta),))


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("cid", [CaseId.N6, CaseId.N8])
def test_letters_off_top_cylinder_commute_with_stable(cid, n):
    case = get_case(cid)
    for letter in hnn.base_generators(case, n, 3):
        if letter.addr[:1] not in ((n - 1,),) and letter.addr:
            assert conjugate_by_stable(case, GroupWord(n, (letter,))) == GroupWord(n, (letter,))


def test_not_in_base():
    with pytest.raises(hnn.NotInBase):
        conjugate_by_stable("n5", W("y[0]", 2))
    with pytest.raises(ValueError):
        conjugate_by_stable("bt", GroupWord(2), direction=2)


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("cid", CASES)
def test_conjugation_matches_literal(cid, n):
    case = get_case(cid)
    rng = random.Random(hash((cid.value, n)) & 0xFFFF)
    pts = points_sample(np.random.default_rng(n), n, 100)
    for _ in range(6):
        w = random_base_word(case, n, rng)
        for d in (1, -1):
            got = conjugate_by_stable(case, w, d)
            s = case.stable(n) ** d
            literal = s.inverse() * w * s
            for p in pts[:40]:
                assert evaluate_word(got, p) == evaluate_word(literal, p)
            if d == 1:
                assert all(in_base(case, l, n) for l in got)


@pytest.mark.parametrize("cid", CASES)
def test_ascent_shallow(cid):
    for n in (2, 3):
        rep = hnn.verify_ascending(cid, n, depth=3)
        assert rep.ok, rep.failures[:3]


@pytest.mark.parametrize("cid", CASES)
def test_iterated_ascent(cid):
    n = 2
    case = get_case(cid)
    pts = points_sample(np.random.default_rng(1), n, 60)
    t2 = case.stable(n) ** 2
    for letter in hnn.base_generators(case, n, 4)[::3]:
        w = GroupWord(n, (letter,))
        twice = conjugate_by_stable(case, conjugate_by_stable(case, w))
        assert all(in_base(case, l, n) for l in twice)
        literal = t2.inverse() * w * t2
        for p in pts:
            assert evaluate_word(twice, p) == evaluate_word(literal, p)


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("cid", CASES)
def test_witnesses(cid, n):
    w = hnn.strictness_witness(cid, n)
    assert hnn.check_witness(w, n)


def test_tail_witness_point():
    n = 2
    w = hnn.strictness_witness("n7", n)
    assert w.point == Seq((0,) * 8, (1, 0, 0, 1))
    assert evaluate_word(w.element, w.point) == Seq((0,) * 8, (1, 1, 1, 1, 0))


@pytest.mark.parametrize("cid", [CaseId.BT, CaseId.F1, CaseId.N7])
def test_corrupted_witness_fails(cid):
    n = 2
    w = hnn.strictness_witness(cid, n)
    fixed = Seq((), (0,))  # fixed by every element
    assert not hnn.check_witness(dataclasses.replace(w, point=fixed), n)
    assert not hnn.check_witness(dataclasses.replace(w, point=None), n)
