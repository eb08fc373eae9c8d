"""Ascending HNN decompositions of F(n) and of the four n-adic groups.

Every case is ``whole = base *_t``: the base is given by a syntactic
certificate on letters and ``t^{-1} base t`` is a proper subgroup of it.
Conjugation uses the partial action of the stable letter on addresses
(``t^{-1} l_alpha t = l_{t(alpha)}`` when ``t`` acts on the cylinder of
``alpha`` by a prefix replacement), closed forms for a few letters, and a
rewrite through standard forms otherwise.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import fn
from .machines import COPY, compile_letters, evaluate_word, first_moved, letter_machine, points_sample
from .rewrite import rewrite_into, to_standard_form
from .seq import Order, Seq, Variant, Word, classify_y_address, comparable, eventually_equal, lex_compare
from .words import GroupWord, Letter, xnum


class NotInBase(ValueError):
    pass


class CaseId(enum.Enum):
    BT = "bt"
    F1 = "f1"
    F2 = "f2"
    F3 = "f3"
    F4 = "f4"
    N5 = "n5"
    N6 = "n6"
    N7 = "n7"
    N8 = "n8"

    @classmethod
    def parse(cls, text: str) -> "CaseId":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ValueError(f"unknown HNN case {text!r}") from None


@dataclass(frozen=True)
class HnnCase:
    id: CaseId
    whole: Optional[Variant]  # None is F(n)
    base: str
    base_variant: Optional[Variant]
    stable_kind: str  # "x" or "y"
    stable_sign: int
    stable_top: bool  # y_{n-1} rather than y_0
    prefix: Optional[str]  # "0" / "top" for the G_alpha style bases

    def stable(self, n: int) -> GroupWord:
        if self.stable_kind == "x":
            return GroupWord(n, (Letter.x(0, (), self.stable_sign),))
        addr = (n - 1,) if self.stable_top else (0,)
        return GroupWord(n, (Letter.y(addr, self.stable_sign),))

    def prefix_digit(self, n: int) -> Optional[int]:
        if self.prefix is None:
            return None
        return 0 if self.prefix == "0" else n - 1

    def whole_name(self) -> str:
        return "F(n)" if self.whole is None else f"{self.whole.name}(n)"


CASES: dict[CaseId, HnnCase] = {
    CaseId.BT: HnnCase(CaseId.BT, None, "F(n)_{>=1}", None, "x", 1, False, None),
    CaseId.F1: HnnCase(CaseId.F1, Variant.G0, "G0(n)_(n-1) ~ yG(n)", Variant.G0, "x", 1, False, "top"),
    CaseId.F2: HnnCase(CaseId.F2, Variant.G0, "G0(n)_0 ~ Gy(n)", Variant.G0, "x", -1, False, "0"),
    CaseId.F3: HnnCase(CaseId.F3, Variant.yG, "yG(n)_0 ~ yGy(n)", Variant.yG, "x", -1, False, "0"),
    CaseId.F4: HnnCase(CaseId.F4, Variant.Gy, "Gy(n)_(n-1) ~ yGy(n)", Variant.Gy, "x", 1, False, "top"),
    CaseId.N5: HnnCase(CaseId.N5, Variant.yG, "G0(n)", Variant.G0, "y", -1, False, None),
    CaseId.N6: HnnCase(CaseId.N6, Variant.Gy, "G0(n)", Variant.G0, "y", 1, True, None),
    CaseId.N7: HnnCase(CaseId.N7, Variant.yGy, "Gy(n)", Variant.Gy, "y", -1, False, None),
    CaseId.N8: HnnCase(CaseId.N8, Variant.yGy, "yG(n)", Variant.yG, "y", 1, True, None),
}


def get_case(case: CaseId | str) -> HnnCase:
    return CASES[case if isinstance(case, CaseId) else CaseId.parse(case)]


# -- base membership certificates -------------------------------------------


def in_base(case: HnnCase, letter: Letter, n: int) -> bool:
    if case.id is CaseId.BT:
        # F(n)_{>=1}: the elements fixing the cylinder 0 pointwise
        return letter.is_x and not (letter.addr == () and letter.index == 0) and letter.addr[:1] != (0,)
    p = case.prefix_digit(n)
    if p is not None and letter.addr[:1] != (p,):
        return False
    return letter.is_x or classify_y_address(letter.addr, case.base_variant, n)


def check_in_base(case: HnnCase, w: GroupWord) -> None:
    for pos, letter in enumerate(w):
        if not in_base(case, letter, w.n):
            raise NotInBase(f"NOT_IN_BASE: letter {pos} ({letter}) is not a {case.base} generator")


def base_generators(case: HnnCase, n: int, depth: int) -> list[Letter]:
    out = []
    for length in range(depth + 1):
        for alpha in itertools.product(range(n), repeat=length):
            for i in range(n - 1):
                l = Letter.x(i, alpha)
                if in_base(case, l, n):
                    out.append(l)
            l = Letter.y(alpha)
            if in_base(case, l, n):
                out.append(l)
    return out


# -- conjugation ---------------------------------------------------------------


def prefix_action(g: GroupWord, alpha: Word) -> Optional[Word]:
    """``g(alpha)`` when ``g`` maps ``alpha eta`` to ``g(alpha) eta`` for every eta."""
    n = g.n
    states = [letter_machine(l, n).start for l in g]
    machines = [letter_machine(l, n) for l in g]
    buf: Word = tuple(alpha)
    for k, m in enumerate(machines):
        out: list[int] = []
        for c in buf:
            states[k], o = m.step(states[k], c)
            out.extend(o)
        if states[k] != COPY:
            return None
        buf = tuple(out)
    return buf


def standard_form_word(w: GroupWord) -> GroupWord:
    """A word for the standard form of ``w`` (normal form of the F(n) part, then the y part)."""
    sf = to_standard_form(w)
    n = w.n
    letters: list[Letter] = []
    for m, e in fn.factor_normal_form(sf.fpart):
        letters += [xnum(m, n, 1 if e > 0 else -1)] * abs(e)
    return GroupWord(n, tuple(letters) + sf.ypart)


def _closed_form(case: HnnCase, letter: Letter, direction: int, n: int) -> Optional[GroupWord]:
    top = n - 1
    if case.stable_kind == "x" and letter.is_x and letter.index >= 1:
        # x_0^{-1} x_i x_0 = x_{i+n-1} for 1 <= i <= n-2
        sign = case.stable_sign * direction
        if sign > 0 and letter.addr == ():
            return GroupWord(n, (Letter.x(letter.index, (top,), letter.sign),))
        if sign < 0 and letter.addr == (top,):
            return GroupWord(n, (Letter.x(letter.index, (), letter.sign),))
    if case.id in (CaseId.N5, CaseId.N7) and direction == 1 and letter == Letter.x(0, ()):
        # y_0 x_0 y_0^{-1} = x_0^2 y_{(n-1)(n-1)0} y_{(n-1)0}^{-1} x_{[0],n-1}^{-1}
        return GroupWord(n, (Letter.x(0, ()), Letter.x(0, ()), Letter.y((top, top, 0)),
                             Letter.y((top, 0), -1), Letter.x(0, (top,), -1)))
    if case.id in (CaseId.N5, CaseId.N7) and direction == 1 and letter == Letter.x(0, (), -1):
        return _closed_form(case, letter.inverse(), 1, n).inverse()
    return None


def _minimal_leaves(alpha: Word, n: int) -> list[Word]:
    leaves = []
    for j, a in enumerate(alpha):
        leaves += [alpha[:j] + (d,) for d in range(a)]
    leaves.append(alpha)
    for j in range(len(alpha) - 1, -1, -1):
        leaves += [alpha[:j] + (d,) for d in range(alpha[j] + 1, n)]
    return leaves


def carrier(src: Word, dst: Word, n: int) -> fn.TreePair:
    """An element of F(n) mapping ``src eta`` to ``dst eta``.

    Needs equal digit sums mod n-1 and both addresses non-constant (or equal
    constants), so that the leaves on either side can be balanced by carets.
    """
    dom, ran = _minimal_leaves(src, n), _minimal_leaves(dst, n)
    li, lj = dom.index(src), ran.index(dst)
    left = [dom[:li], ran[:lj]]
    right = [dom[li + 1 :], ran[lj + 1 :]]
    for side, pick in ((left, 0), (right, -1)):
        if (len(side[0]) - len(side[1])) % (n - 1):
            raise ValueError(f"no element of F({n}) carries {src} to {dst}")
        while len(side[0]) != len(side[1]):
            k = 0 if len(side[0]) < len(side[1]) else 1
            if not side[k]:
                raise ValueError(f"no element of F({n}) carries {src} to {dst}")
            leaf = side[k].pop(pick)
            kids = [leaf + (d,) for d in range(n)]
            side[k][len(side[k]) if pick == -1 else 0 : len(side[k]) if pick == -1 else 0] = kids
    pairs = list(zip(left[0], left[1])) + [(src, dst)] + list(zip(right[0], right[1]))
    return fn.TreePair.from_pairs(n, pairs)


def _x_power_word(m: int, e: int, n: int) -> list[Letter]:
    """``x_m^e`` over x_0..x_{n-1} via x_m = x_0^{-k} x_{m-k(n-1)} x_0^k."""
    if m < n:
        return [xnum(m, n, 1 if e > 0 else -1)] * abs(e)
    k = (m - 1) // (n - 1)
    core = [xnum(m - k * (n - 1), n, 1 if e > 0 else -1)] * abs(e)
    return [xnum(0, n, -1)] * k + core + [xnum(0, n)] * k


def _treepair_word(g: fn.TreePair) -> list[Letter]:
    out: list[Letter] = []
    for m, e in fn.factor_normal_form(g):
        out += _x_power_word(m, e, g.n)
    return out


def finite_generators(case: HnnCase, n: int) -> list[Letter]:
    """A finite generating set of the base (for the non-F-like cases)."""
    top = n - 1
    gens = [xnum(m, n) for m in range(n)]
    gens.append(Letter.y((0, top) if case.stable_top else (top, 0)))
    if case.base_variant is Variant.yG:
        gens.append(Letter.y((0,)))
    if case.base_variant is Variant.Gy:
        gens.append(Letter.y((top,)))
    return gens


def express_in_generators(case: HnnCase, letter: Letter, n: int) -> list[Letter]:
    """``letter`` as a word in :func:`finite_generators`."""
    top = n - 1
    if letter.is_x:
        return _treepair_word(letter.treepair(n))
    if letter.sign < 0:
        return [l.inverse() for l in reversed(express_in_generators(case, letter.inverse(), n))]
    alpha = letter.addr
    if not alpha:
        parts = [Letter.x(0, ()), Letter.y((0,)), Letter.y((top, 0), -1), Letter.y((top, top))]
        return [g for p in parts for g in express_in_generators(case, p, n)]
    if all(d == 0 for d in alpha):
        return [xnum(0, n)] * (len(alpha) - 1) + [Letter.y((0,))] + [xnum(0, n, -1)] * (len(alpha) - 1)
    if all(d == top for d in alpha):
        return [xnum(0, n, -1)] * (len(alpha) - 1) + [Letter.y((top,))] + [xnum(0, n)] * (len(alpha) - 1)
    src = (0, top) if case.stable_top else (top, 0)
    g = _treepair_word(carrier(src, alpha, n))
    return [l.inverse() for l in reversed(g)] + [Letter.y(src)] + g


_GEN_IMAGES: dict = {}


def _generator_image(case: HnnCase, gen: Letter, n: int) -> GroupWord:
    key = (case.id, gen, n)
    if key not in _GEN_IMAGES:
        _GEN_IMAGES[key] = _conjugate_direct(case, gen, 1, n)[0]
    return _GEN_IMAGES[key]


def _conjugate_direct(case: HnnCase, letter: Letter, direction: int, n: int) -> tuple[GroupWord, str]:
    g = case.stable(n) ** direction
    img = prefix_action(g, letter.addr)
    if img is not None:
        return GroupWord(n, (Letter(letter.kind, img, letter.sign, letter.index),)), "address"
    closed = _closed_form(case, letter, direction, n)
    if closed is not None:
        return closed, "closed-form"
    literal = g.inverse() * GroupWord(n, (letter,)) * g
    if case.base_variant is None:
        return standard_form_word(literal), "standard-form"
    allowed = lambda a: classify_y_address(a, case.base_variant, n)
    return rewrite_into(literal, allowed), "standard-form"


def conjugate_letter(case: HnnCase, letter: Letter, direction: int, n: int) -> tuple[GroupWord, str]:
    """``t^{-d} letter t^{d}`` and the rule that produced it."""
    word, rule = _conjugate_direct(case, letter, direction, n)
    if rule != "standard-form" or direction != 1 or case.stable_kind != "y":
        return word, rule
    # map a finite generating set instead: conjugation is a homomorphism
    out: list[Letter] = []
    for gen in express_in_generators(case, letter, n):
        base_gen = gen if gen.sign > 0 else gen.inverse()
        image = _generator_image(case, base_gen, n)
        out += (image if gen.sign > 0 else image.inverse()).letters
    return GroupWord(n, tuple(out)), "generators"


def conjugate_by_stable(case: HnnCase | CaseId | str, w: GroupWord, direction: int = 1) -> GroupWord:
    if not isinstance(case, HnnCase):
        case = get_case(case)
    if direction not in (1, -1):
        raise ValueError("direction must be +1 or -1")
    check_in_base(case, w)
    out: list[Letter] = []
    for letter in w:
        out += conjugate_letter(case, letter, direction, w.n)[0].letters
    return GroupWord(w.n, tuple(out))


# -- ascent ----------------------------------------------------------------------


@dataclass
class AscentReport:
    case: CaseId
    n: int
    depth: int
    checked: int = 0
    rules: dict[str, int] = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def verify_ascending(case: HnnCase | CaseId | str, n: int, depth: int = 5, points: int = 100,
                     seed: int = 0) -> AscentReport:
    """Every base generator with address length <= depth conjugates into the base."""
    if not isinstance(case, HnnCase):
        case = get_case(case)
    rng = np.random.default_rng(seed)
    pts = points_sample(rng, n, points)
    t = case.stable(n)
    report = AscentReport(case.id, n, depth)
    for letter in base_generators(case, n, depth):
        image, rule = conjugate_letter(case, letter, 1, n)
        report.checked += 1
        report.rules[rule] = report.rules.get(rule, 0) + 1
        bad = [l for l in image if not in_base(case, l, n)]
        if bad:
            report.failures.append(f"{letter} -> {image}: {bad[0]} outside the base")
            continue
        literal = t.inverse() * GroupWord(n, (letter,)) * t
        moved = first_moved((image * literal.inverse()).letters, n, pts)
        if moved is not None:
            report.failures.append(f"{letter} -> {image} disagrees with the conjugate at {moved}")
    return report


# -- strictness ------------------------------------------------------------------


class WitnessMode(enum.Enum):
    SUPPORT_CYLINDER = "support-cylinder"
    TAIL_CHANGE = "tail-change"


@dataclass(frozen=True)
class Witness:
    case: CaseId
    element: GroupWord
    point: Optional[Seq]
    mode: WitnessMode
    cylinder: Optional[Word] = None
    generators: tuple[GroupWord, ...] = ()
    note: str = ""


def _cylinder_interval(c: Word, n: int) -> tuple[Seq, Seq]:
    return Seq(c, (0,)), Seq(c, (n - 1,))


def letter_avoids_cylinder(letter: Letter, c: Word, n: int) -> bool:
    """Whether the support of ``letter`` misses the closed cylinder ``c``."""
    if not letter.is_x:
        return not comparable(letter.addr, c)
    lo, hi = _cylinder_interval(c, n)
    for iv in fn.support(letter.treepair(n)):
        if lex_compare(iv.hi, lo) is Order.GT and lex_compare(iv.lo, hi) is Order.LT:
            return False
    return True


def _points_in_cylinder(c: Word, n: int, depth: int = 3) -> list[Seq]:
    pts = []
    for length in range(depth + 1):
        for s in itertools.product(range(n), repeat=length):
            pts += [Seq(c + s, (0,)), Seq(c + s, (0, n - 1)), Seq(c + s + (1 % n,), (n - 1,))]
    return pts


def tail_witness_point(n: int, m: int = 5, top_side: bool = False) -> Seq:
    """``0^{m+3} ((n-1) 0 0 (n-1))^omega``, or its mirror image."""
    if top_side:
        return Seq((n - 1,) * (m + 3), (0, n - 1, n - 1, 0))
    return Seq((0,) * (m + 3), (n - 1, 0, 0, n - 1))


CERTIFICATE_DEPTH = 6


def strictness_witness(case: HnnCase | CaseId | str, n: int, depth: int = CERTIFICATE_DEPTH) -> Witness:
    if not isinstance(case, HnnCase):
        case = get_case(case)
    top = n - 1
    if case.stable_kind == "y":
        if not case.stable_top:
            element = GroupWord(n, (Letter.y((0, 0), -1), Letter.y((0,))))
            note = "t x_[0],0 t^-1 lies in the base iff y_00^-1 y_0 does"
        else:
            element = GroupWord(n, (Letter.y((top,)), Letter.y((top, top), -1)))
            note = "t x_(n-1) t^-1 lies in the base iff y_(n-1) y_(n-1)(n-1)^-1 does"
        return Witness(case.id, element, tail_witness_point(n, 5, case.stable_top), WitnessMode.TAIL_CHANGE, note=note)
    if case.id is CaseId.BT:
        gens = [GroupWord(n, (xnum(m, n),)) for m in range(1, n + 1)]
        element, cylinder = GroupWord(n, (xnum(1, n),)), (top, 0)
        note = "finite generating set x_1..x_n of the base"
    else:
        gens = base_generators(case, n, depth)
        p = case.prefix_digit(n)
        if p == top:
            element, cylinder = GroupWord(n, (Letter.x(0, (top,)),)), (top, 0)
        else:
            element, cylinder = GroupWord(n, (Letter.x(0, (0,)),)), (0, top)
        gens = [GroupWord(n, (g,)) for g in gens]
        note = f"address-prefix certificate at depth {depth}"
    images = tuple(conjugate_by_stable(case, g, 1) for g in gens)
    point = first_moved(element.letters, n, _points_in_cylinder(cylinder, n))
    return Witness(case.id, element, point, WitnessMode.SUPPORT_CYLINDER, cylinder, images, note)


def check_witness(w: Witness, n: int) -> bool:
    """Verify the properness certificate exactly."""
    case = get_case(w.case)
    if w.point is None:
        return False
    image = evaluate_word(w.element, w.point)
    if w.mode is WitnessMode.TAIL_CHANGE:
        # members of the conjugated base change finitely many digits of this point
        return not eventually_equal(image, w.point)
    if image == w.point or w.cylinder is None:
        return False
    if w.point.take(len(w.cylinder)) != w.cylinder:
        return False
    if not all(in_base(case, l, n) for l in w.element):
        return False
    # every conjugated generator, hence every product of them, fixes the cylinder
    return all(letter_avoids_cylinder(l, w.cylinder, n) for g in w.generators for l in g)
