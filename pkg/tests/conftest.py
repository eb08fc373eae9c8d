import os

from hypothesis import HealthCheck, settings, strategies as st

from lmwb import fn
from lmwb.seq import Seq
from lmwb.words import GroupWord, Letter

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])
settings.register_profile("thorough", deadline=None, max_examples=500,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

ARITIES = st.sampled_from([2, 3, 4])


def digits(n, min_size=0, max_size=6):
    return st.lists(st.integers(0, n - 1), min_size=min_size, max_size=max_size).map(tuple)


@st.composite
def seqs(draw, n, max_prefix=8, max_period=5):
    return Seq(draw(digits(n, 0, max_prefix)), draw(digits(n, 1, max_period)))


@st.composite
def x_letters(draw, n, max_addr=3):
    return Letter.x(draw(st.integers(0, n - 2)), draw(digits(n, 0, max_addr)), draw(st.sampled_from([1, -1])))


@st.composite
def y_letters(draw, n, max_addr=3):
    return Letter.y(draw(digits(n, 0, max_addr)), draw(st.sampled_from([1, -1])))


@st.composite
def words(draw, n, max_len=6, y=True, max_addr=3):
    letter = st.one_of(x_letters(n, max_addr), y_letters(n, max_addr)) if y else x_letters(n, max_addr)
    return GroupWord(n, tuple(draw(st.lists(letter, max_size=max_len))))


@st.composite
def treepairs(draw, n, max_len=6):
    out = fn.TreePair.identity(n)
    for l in draw(words(n, max_len, y=False)):
        out = fn.compose(out, l.treepair(n))
    return out
