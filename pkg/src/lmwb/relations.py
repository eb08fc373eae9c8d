"""Random instances of the defining relation families, and their verification.

Families:

1. F(n) relations ``x_i^{-1} x_j x_i = x_{j+n-1}`` (i < j).
2. ``y_beta x_{[i],alpha} = x_{[i],alpha} y_{x(beta)}`` whenever ``x(beta)`` is defined.
3. ``y_alpha y_beta = y_beta y_alpha`` for prefix-incomparable addresses.
4. ``y_alpha = x_{[0],alpha} y_{alpha 0} y_{alpha(n-1)0}^{-1} y_{alpha(n-1)(n-1)}``.

Addresses are drawn by rejection so that every y letter lies in the variant's
Y set.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import fn
from .machines import first_moved, points_sample, structured_points
from .rewrite import Verdict, is_identity
from .seq import Variant, Word, classify_y_address, comparable
from .words import Direction, GroupWord, Letter, expand_y, xw

FAMILIES = (1, 2, 3, 4)


@dataclass(frozen=True)
class Instance:
    family: int
    lhs: GroupWord
    rhs: GroupWord

    @property
    def word(self) -> GroupWord:
        return self.lhs * self.rhs.inverse()

    def __str__(self) -> str:
        return f"{self.lhs} = {self.rhs}"


@dataclass
class RelationReport:
    family: int
    variant: Variant
    n: int
    samples: int
    failures: list[tuple[str, str]] = field(default_factory=list)
    inconclusive: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures and not self.inconclusive


def _addr(rng: random.Random, n: int, max_len: int) -> Word:
    return tuple(rng.randrange(n) for _ in range(rng.randint(0, max_len)))


def _y_addr(rng: random.Random, n: int, variant: Variant, max_len: int = 5) -> Word:
    while True:
        a = _addr(rng, n, max_len)
        if classify_y_address(a, variant, n):
            return a


def sample_instance(family: int, variant: Variant, n: int, rng: random.Random) -> Instance:
    ok = lambda a: classify_y_address(a, variant, n)
    if family == 1:
        i = rng.randrange(0, 6)
        j = rng.randrange(i + 1, 8)
        lhs = xw(i, n, -1) * xw(j, n) * xw(i, n)
        return Instance(1, lhs, xw(j + n - 1, n))
    if family == 2:
        while True:
            i = rng.randrange(n - 1)
            alpha = _addr(rng, n, 3)
            x = Letter.x(i, alpha)
            beta = _y_addr(rng, n, variant)
            img = fn.partial_apply(x.treepair(n), beta)
            if img is not None and ok(img):
                break
        lhs = GroupWord(n, (Letter.y(beta), x))
        return Instance(2, lhs, GroupWord(n, (x, Letter.y(img))))
    if family == 3:
        while True:
            a, b = _y_addr(rng, n, variant), _y_addr(rng, n, variant)
            if not comparable(a, b):
                break
        sa, sb = rng.choice((1, -1)), rng.choice((1, -1))
        la, lb = Letter.y(a, sa), Letter.y(b, sb)
        return Instance(3, GroupWord(n, (la, lb)), GroupWord(n, (lb, la)))
    if family == 4:
        while True:
            a = _y_addr(rng, n, variant, 4)
            rhs = expand_y(a, Direction.RIGHT, n)
            if all(l.is_x or ok(l.addr) for l in rhs):
                break
        return Instance(4, GroupWord(n, (Letter.y(a),)), rhs)
    raise ValueError(f"unknown relation family {family}")


def _eval_points(n: int, rng: np.random.Generator, count: int = 200):
    pts = structured_points(n, 2)
    return pts + points_sample(rng, n, max(0, count - len(pts)))


def verify_relation_family(family: int, variant: Variant, n: int, samples: int = 200,
                           seed: Optional[int] = 0) -> RelationReport:
    """Check ``lhs . rhs^{-1}`` by 200-point evaluation and by :func:`is_identity`."""
    rng = random.Random(seed)
    nrng = np.random.default_rng(seed)
    report = RelationReport(family, variant, n, samples)
    for _ in range(samples):
        inst = sample_instance(family, variant, n, rng)
        w = inst.word
        moved = first_moved(w.letters, n, _eval_points(n, nrng))
        if moved is not None:
            report.failures.append((str(inst), f"moves {moved}"))
            continue
        res = is_identity(w)
        if res.verdict is Verdict.INCONCLUSIVE:
            report.inconclusive += 1
        elif res.verdict is Verdict.FALSE:
            report.failures.append((str(inst), f"is_identity false, witness {res.witness}"))
    return report
