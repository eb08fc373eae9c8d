"""Finite addresses and eventually periodic points of the n-adic Cantor set.

A finite word is a plain tuple of ints.  A point of the Cantor set is a
:class:`Seq`, i.e. ``prefix`` followed by ``period`` repeated forever, kept in
canonical form so that structural equality is point equality.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from typing import Sequence, Union

Word = tuple[int, ...]

MAX_ARITY = 10


class Order(enum.IntEnum):
    LT = -1
    EQ = 0
    GT = 1


class Variant(enum.Enum):
    G0 = "G0"
    yG = "yG"
    Gy = "Gy"
    yGy = "yGy"

    @classmethod
    def parse(cls, text: str) -> "Variant":
        for v in cls:
            if v.value.lower() == text.strip().lower():
                return v
        raise ValueError(f"unknown group variant {text!r}")


def check_arity(n: int) -> None:
    if not 2 <= n <= MAX_ARITY:
        raise ValueError(f"arity must satisfy 2 <= n <= {MAX_ARITY}, got {n}")


def primitive_root(period: Word) -> Word:
    size = len(period)
    for d in range(1, size + 1):
        if size % d == 0 and period[:d] * (size // d) == period:
            return period[:d]
    return period


def canonical(prefix: Word, period: Word) -> tuple[Word, Word]:
    if not period:
        raise ValueError("period must be non-empty")
    period = primitive_root(tuple(period))
    prefix = tuple(prefix)
    while prefix and prefix[-1] == period[-1]:
        prefix = prefix[:-1]
        period = period[-1:] + period[:-1]
    return prefix, period


@dataclass(frozen=True)
class Seq:
    """The point ``prefix . period^omega``; canonicalized on construction."""

    prefix: Word
    period: Word

    def __post_init__(self):
        pre, per = canonical(self.prefix, self.period)
        object.__setattr__(self, "prefix", pre)
        object.__setattr__(self, "period", per)

    def digit(self, i: int) -> int:
        if i < len(self.prefix):
            return self.prefix[i]
        return self.period[(i - len(self.prefix)) % len(self.period)]

    def take(self, length: int) -> Word:
        return tuple(self.digit(i) for i in range(length))

    def drop(self, k: int) -> "Seq":
        if k <= len(self.prefix):
            return Seq(self.prefix[k:], self.period)
        r = (k - len(self.prefix)) % len(self.period)
        return Seq((), self.period[r:] + self.period[:r])

    def startswith(self, word: Sequence[int]) -> bool:
        return all(self.digit(i) == d for i, d in enumerate(word))

    def max_digit(self) -> int:
        return max(self.prefix + self.period)

    def __str__(self) -> str:
        return format_word(self.prefix, empty="") + "(" + format_word(self.period) + ")"

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> "Seq":
        m = re.fullmatch(r"\s*([0-9]*)\(([0-9]+)\)\s*", text)
        if not m:
            raise ValueError(f"bad sequence literal {text!r}; expected prefix(period)")
        seq = cls(parse_word(m.group(1) or "e", n), parse_word(m.group(2), n))
        return seq


def zeros_tail(word: Sequence[int] = ()) -> Seq:
    """``s 0^omega``."""
    return Seq(tuple(word), (0,))


def top_tail(word: Sequence[int], n: int) -> Seq:
    """``s (n-1)^omega``."""
    return Seq(tuple(word), (n - 1,))


def parse_word(text: str, n: int | None = None) -> Word:
    text = text.strip()
    if text in ("e", "ε", ""):
        return ()
    if not text.isdigit():
        raise ValueError(f"bad address {text!r}")
    word = tuple(int(c) for c in text)
    if n is not None and any(d >= n for d in word):
        raise ArityError(f"address {text!r} has a digit >= {n}")
    return word


def format_word(word: Sequence[int], empty: str = "e") -> str:
    return "".join(map(str, word)) if word else empty


class ArityError(ValueError):
    pass


def concat(u: Word, v: Union[Word, Seq]) -> Union[Word, Seq]:
    if isinstance(v, Seq):
        return Seq(tuple(u) + v.prefix, v.period)
    return tuple(u) + tuple(v)


def lex_compare(a: Seq, b: Seq) -> Order:
    if a == b:
        return Order.EQ
    bound = max(len(a.prefix), len(b.prefix)) + math.lcm(len(a.period), len(b.period))
    for i in range(bound + 1):
        x, y = a.digit(i), b.digit(i)
        if x != y:
            return Order.LT if x < y else Order.GT
    raise AssertionError("distinct canonical sequences must differ within the bound")


def eventually_equal(a: Seq, b: Seq) -> bool:
    """True iff the tails agree after discarding finite prefixes (shifts allowed)."""
    if len(a.period) != len(b.period):
        return False
    return b.period in _rotations(a.period)


def _rotations(period: Word) -> set[Word]:
    return {period[i:] + period[:i] for i in range(len(period))}


def is_prefix(alpha: Sequence[int], beta: Union[Word, Seq]) -> bool:
    if isinstance(beta, Seq):
        return beta.startswith(alpha)
    return len(alpha) <= len(beta) and tuple(beta[: len(alpha)]) == tuple(alpha)


def comparable(alpha: Sequence[int], beta: Sequence[int]) -> bool:
    """Whether one address is a prefix of the other."""
    k = min(len(alpha), len(beta))
    return tuple(alpha[:k]) == tuple(beta[:k])


def is_constant(alpha: Sequence[int], digit: int) -> bool:
    return len(alpha) >= 1 and all(d == digit for d in alpha)


def classify_y_address(alpha: Sequence[int], variant: Variant, n: int, *, literal_yG: bool = False) -> bool:
    """Whether ``y_alpha`` lies in the infinite generating Y-set of ``variant``.

    ``literal_yG`` selects the literal displayed definition of the yG set, which
    also excludes the constant-zero addresses.
    """
    alpha = tuple(alpha)
    if sum(alpha) % (n - 1) != 0:
        return False
    zero, top = is_constant(alpha, 0), is_constant(alpha, n - 1)
    if variant is Variant.G0:
        return bool(alpha) and not zero and not top
    if variant is Variant.yG:
        return bool(alpha) and not top and not (literal_yG and zero)
    if variant is Variant.Gy:
        return bool(alpha) and not zero
    return True
