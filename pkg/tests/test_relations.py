import random

import pytest

from lmwb.relations import FAMILIES, sample_instance, verify_relation_family
from lmwb.rewrite import equals_words
from lmwb.seq import Variant, classify_y_address, comparable
from lmwb.words import GroupWord, Letter, parse_word_text


@pytest.mark.parametrize("variant", list(Variant))
@pytest.mark.parametrize("family", FAMILIES)
def test_families_small_sample(variant, family):
    rep = verify_relation_family(family, variant, 2, samples=25, seed=family)
    assert rep.ok, rep.failures


@pytest.mark.parametrize("variant", list(Variant))
def test_samples_stay_in_variant(variant):
    rng = random.Random(1)
    for family in FAMILIES:
        for _ in range(30):
            inst = sample_instance(family, variant, 3, rng)
            for l in inst.lhs.letters + inst.rhs.letters:
                assert l.is_x or classify_y_address(l.addr, variant, 3)
            if family == 3:
                a, b = inst.lhs.letters
                assert not comparable(a.addr, b.addr)


@pytest.mark.parametrize("n", [2, 3])
def test_family_examples(n):
    t = n - 1
    a, b = (0, 1), (t, 0, 1)
    ya, yb = Letter.y(a), Letter.y(b)
    assert equals_words(GroupWord(n, (ya, yb)), GroupWord(n, (yb, ya)))
    lhs = parse_word_text(f"y[{t}0]", n)
    rhs = parse_word_text(f"x[0;{t}0] y[{t}00] y[{t}0{t}0]' y[{t}0{t}{t}]", n)
    assert equals_words(lhs, rhs)


def test_unknown_family():
    with pytest.raises(ValueError):
        sample_instance(7, Variant.G0, 2, random.Random(0))
