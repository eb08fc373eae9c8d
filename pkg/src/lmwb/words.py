"""Letters and words over X(n) and Y(n), with the textual word grammar.

Grammar (whitespace separated, read left to right, leftmost applied first)::

    x12        numbered generator x_12
    x[0;20]    x_{[0],20}
    y[10]      y_10          (y[e] or y[] is y itself)
    y[10]'     trailing ' inverts a letter
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from . import fn
from .seq import ArityError, Variant, Word, check_arity, classify_y_address, format_word, parse_word


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class Direction(enum.Enum):
    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True, order=True)
class Letter:
    kind: str  # "x" or "y"
    addr: Word
    sign: int = 1
    index: int = 0  # the i of x_{[i],alpha}; unused for y letters

    @classmethod
    def x(cls, i: int, addr: Sequence[int] = (), sign: int = 1) -> "Letter":
        return cls("x", tuple(addr), sign, i)

    @classmethod
    def y(cls, addr: Sequence[int] = (), sign: int = 1) -> "Letter":
        return cls("y", tuple(addr), sign, 0)

    @property
    def is_x(self) -> bool:
        return self.kind == "x"

    def inverse(self) -> "Letter":
        return Letter(self.kind, self.addr, -self.sign, self.index)

    def treepair(self, n: int) -> fn.TreePair:
        if not self.is_x:
            raise ValueError("y letters are not in F(n)")
        tp = fn.generator_x_at(self.index, self.addr, n)
        return tp if self.sign > 0 else fn.invert(tp)

    def __str__(self) -> str:
        tail = "'" if self.sign < 0 else ""
        if self.is_x:
            if not self.addr:
                return f"x{self.index}{tail}"
            return f"x[{self.index};{format_word(self.addr)}]{tail}"
        return f"y[{format_word(self.addr, empty='')}]{tail}"


@dataclass(frozen=True)
class GroupWord:
    n: int
    letters: tuple[Letter, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        if self.n != other.n:
            raise ValueError("arity mismatch")
        return GroupWord(self.n, self.letters + other.letters)

    def __pow__(self, k: int) -> "GroupWord":
        base = self if k >= 0 else self.inverse()
        return GroupWord(self.n, base.letters * abs(k))

    def inverse(self) -> "GroupWord":
        return GroupWord(self.n, tuple(l.inverse() for l in reversed(self.letters)))

    def conjugate(self, by: "GroupWord") -> "GroupWord":
        """``by^{-1} self by``."""
        return by.inverse() * self * by

    def __str__(self) -> str:
        return " ".join(map(str, self.letters)) if self.letters else "e"


def word(n: int, letters: Iterable[Letter] = ()) -> GroupWord:
    return GroupWord(n, tuple(letters))


def xnum(m: int, n: int, sign: int = 1) -> Letter:
    i, alpha = fn.numbered_address(m, n)
    return Letter.x(i, alpha, sign)


def xw(m: int, n: int, power: int = 1) -> GroupWord:
    """The word ``x_m^power``."""
    return GroupWord(n, (xnum(m, n, 1 if power > 0 else -1),) * abs(power))


def yw(addr: Sequence[int], n: int, power: int = 1) -> GroupWord:
    return GroupWord(n, (Letter.y(addr, 1 if power > 0 else -1),) * abs(power))


_TOKEN = re.compile(r"\s*(?:(x)(\d+)|(x)\[(\d+);([0-9e]*)\]|(y)\[([0-9e]*)\])(['+-]?)")


def parse_word_text(text: str, n: int) -> GroupWord:
    check_arity(n)
    letters = []
    pos = 0
    stripped = text.strip()
    if stripped in ("e", ""):
        return GroupWord(n, ())
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected input {text[pos:pos + 8]!r}", pos)
        sign = -1 if m.group(8) in ("'", "-") else 1
        start = m.start(0) + (len(m.group(0)) - len(m.group(0).lstrip()))
        if m.group(1):
            letters.append(xnum(int(m.group(2)), n, sign))
        elif m.group(3):
            i = int(m.group(4))
            if not 0 <= i <= n - 2:
                raise ArityError(f"x[{i};...] needs 0 <= i <= {n - 2} (position {start})")
            letters.append(Letter.x(i, parse_word(m.group(5), n), sign))
        else:
            letters.append(Letter.y(parse_word(m.group(7), n), sign))
        pos = m.end(0)
        if pos < len(text) and not text[pos].isspace():
            raise ParseError("letters must be separated by whitespace", pos)
    return GroupWord(n, tuple(letters))


def expand_y(alpha: Sequence[int], direction: Direction, n: int) -> GroupWord:
    """A four-letter word equal to ``y_alpha``."""
    a = tuple(alpha)
    top = n - 1
    if direction is Direction.RIGHT:
        letters = (Letter.x(0, a), Letter.y(a + (0,)), Letter.y(a + (top, 0), -1), Letter.y(a + (top, top)))
    else:
        letters = (Letter.y(a + (top,)), Letter.y(a + (0, top), -1), Letter.y(a + (0, 0)), Letter.x(0, a))
    return GroupWord(n, letters)


def word_in_variant(w: GroupWord, variant: Variant) -> bool:
    """Syntactic certificate: every y letter lies in the variant's Y set."""
    return all(l.is_x or classify_y_address(l.addr, variant, w.n) for l in w)


def x_only_treepair(w: GroupWord) -> fn.TreePair:
    out = fn.TreePair.identity(w.n)
    for l in w:
        out = fn.compose(out, l.treepair(w.n))
    return out
