"""Abelianization maps onto Z^{n+1} for the four groups.

Each map sends ``x_{[i],alpha}`` to a projection of the F(n) abelianization
``a`` (zero-padded) and ``y_alpha`` to a basis vector chosen by the shape of
``alpha``: constant 0, constant n-1, or non-constant.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from . import fn
from .relations import FAMILIES, sample_instance
from .seq import Variant, Word, classify_y_address, is_constant
from .words import GroupWord, Letter, xnum


class Projection(enum.Enum):
    NONE = "none"
    P1 = "p1"
    PN1 = "pn1"
    P1N1 = "p1n1"


class VariantMismatch(ValueError):
    pass


class AddressClass(enum.Enum):
    ZERO = "0^m"
    TOP = "(n-1)^m"
    NONCONSTANT = "non-constant"
    EMPTY = "empty"


def address_class(alpha: Sequence[int], n: int) -> AddressClass:
    alpha = tuple(alpha)
    if not alpha:
        return AddressClass.EMPTY
    if is_constant(alpha, 0):
        return AddressClass.ZERO
    if is_constant(alpha, n - 1):
        return AddressClass.TOP
    return AddressClass.NONCONSTANT


def project(kind: Projection, v: Sequence[int]) -> tuple[int, ...]:
    v = tuple(v)
    if kind is Projection.NONE:
        return v
    if len(v) < 2:
        raise ValueError("LENGTH_MISMATCH: projection needs a vector of length n >= 2")
    if kind is Projection.P1:
        return v[1:-1] + (v[0] + v[-1],)
    if kind is Projection.PN1:
        return v[:-1]
    return v[1:-1]


PROJECTION = {
    Variant.G0: Projection.NONE,
    Variant.yG: Projection.P1,
    Variant.Gy: Projection.PN1,
    Variant.yGy: Projection.P1N1,
}

# order of the y coordinates after the projected block
Y_CLASSES = {
    Variant.G0: (AddressClass.NONCONSTANT,),
    Variant.yG: (AddressClass.NONCONSTANT, AddressClass.ZERO),
    Variant.Gy: (AddressClass.NONCONSTANT, AddressClass.TOP),
    Variant.yGy: (AddressClass.NONCONSTANT, AddressClass.ZERO, AddressClass.TOP),
}


def block_length(variant: Variant, n: int) -> int:
    return len(project(PROJECTION[variant], (0,) * n))


@lru_cache(maxsize=4096)
def _a(i: int, alpha: Word, n: int) -> tuple[int, ...]:
    return fn.abelianization_a(fn.generator_x_at(i, alpha, n))


def pi_value(variant: Variant, letter: Letter, n: int) -> tuple[int, ...]:
    classes = Y_CLASSES[variant]
    k = block_length(variant, n)
    if letter.is_x:
        vec = project(PROJECTION[variant], _a(letter.index, letter.addr, n)) + (0,) * len(classes)
    else:
        if not classify_y_address(letter.addr, variant, n):
            raise VariantMismatch(f"{letter} is not a generator of {variant.name}({n})")
        cls = address_class(letter.addr, n)
        vec = [0] * (k + len(classes))
        if cls is AddressClass.EMPTY:
            # only in yGy: forced by y = x_0 y_0 y_{(n-1)0}^{-1} y_{(n-1)(n-1)}
            vec[k] -= 1
            vec[k + 1] += 1
            vec[k + 2] += 1
        else:
            vec[k + classes.index(cls)] = 1
        vec = tuple(vec)
    return vec if letter.sign > 0 else tuple(-v for v in vec)


def pi_word(variant: Variant, w: GroupWord) -> tuple[int, ...]:
    n = w.n
    total = [0] * (block_length(variant, n) + len(Y_CLASSES[variant]))
    for letter in w:
        for t, v in enumerate(pi_value(variant, letter, n)):
            total[t] += v
    return tuple(total)


def generating_set(variant: Variant, n: int) -> list[Letter]:
    """The finite generating set whose images form a basis."""
    top = n - 1
    y_nc = Letter.y((top, 0))
    if variant is Variant.G0:
        return [xnum(m, n) for m in range(n)] + [y_nc]
    if variant is Variant.yG:
        return [xnum(m, n) for m in range(1, n)] + [y_nc, Letter.y((0,))]
    if variant is Variant.Gy:
        return [xnum(m, n) for m in range(n - 1)] + [y_nc, Letter.y((top,))]
    return [xnum(m, n) for m in range(1, n - 1)] + [y_nc, Letter.y((0,)), Letter.y((top,))]


def _det(rows: list[list[int]]) -> int:
    """Exact integer determinant (fraction-free Bareiss elimination)."""
    m = [list(r) for r in rows]
    size = len(m)
    sign, prev = 1, 1
    for k in range(size - 1):
        if m[k][k] == 0:
            swap = next((r for r in range(k + 1, size) if m[r][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[-1][-1] if size else 1


@dataclass
class RankCertificate:
    variant: Variant
    n: int
    generators: list[str]
    matrix: list[list[int]]
    determinant: int

    @property
    def ok(self) -> bool:
        return len(self.matrix) == self.n + 1 and abs(self.determinant) == 1


def rank_certificate(variant: Variant, n: int) -> RankCertificate:
    gens = generating_set(variant, n)
    rows = [list(pi_value(variant, g, n)) for g in gens]
    det = _det(rows) if all(len(r) == len(rows) for r in rows) else 0
    return RankCertificate(variant, n, [str(g) for g in gens], rows, det)


@dataclass
class PiReport:
    variant: Variant
    n: int
    samples: int
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def verify_pi_well_defined(variant: Variant, n: int, samples: int = 100, seed: int = 0) -> PiReport:
    """Relation instances balance under the map, and x letters preserve address classes."""
    rng = random.Random(seed)
    report = PiReport(variant, n, samples)
    for _ in range(samples):
        for family in FAMILIES:
            inst = sample_instance(family, variant, n, rng)
            if pi_word(variant, inst.lhs) != pi_word(variant, inst.rhs):
                report.failures.append(f"relation ({family}) unbalanced: {inst}")
        x = Letter.x(rng.randrange(n - 1), tuple(rng.randrange(n) for _ in range(rng.randint(0, 3))))
        beta = tuple(rng.randrange(n) for _ in range(rng.randint(1, 6)))
        img = fn.partial_apply(x.treepair(n), beta)
        if img is not None and address_class(img, n) is not address_class(beta, n):
            report.failures.append(f"{x} moves class of {beta} to {img}")
    return report
