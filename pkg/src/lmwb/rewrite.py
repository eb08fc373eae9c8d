"""Standard forms, identity testing and word equality.

A standard form is an F(n) element (tree pair) followed by a word of y
letters.  ``to_standard_form`` sweeps the word once, pushing every x letter
left through the pending y letters (expanding a y letter whenever the partial
action on its address is undefined), then simplifies the y part: commuting
letters are sorted by address, inverse pairs cancel, and the four-letter
expansion patterns contract.  A y part that still acts as an element of F(n)
is finally collapsed into the tree pair (found by evaluation, certified by the
exact product-machine check below).
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import fn
from .machines import (
    COPY,
    Machine,
    _trie_machine,
    first_moved,
    letter_machine,
    probe_points,
    run_cascade,
    compile_letters,
    structured_points,
)
from .seq import Seq, Word, comparable, eventually_equal
from .words import Direction, GroupWord, Letter, expand_y


class BudgetExceeded(RuntimeError):
    pass


class Inconclusive(RuntimeError):
    """Raised by :func:`equals_words` when identity could not be decided."""


class Verdict(enum.Enum):
    TRUE = "true"
    FALSE = "false"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class StandardForm:
    fpart: fn.TreePair
    ypart: tuple[Letter, ...] = ()

    @property
    def n(self) -> int:
        return self.fpart.n

    def is_identity(self) -> bool:
        return not self.ypart and self.fpart.is_identity()

    def evaluate(self, xi: Seq) -> Seq:
        xi = fn.evaluate(self.fpart, xi)
        if self.ypart:
            xi = run_cascade(compile_letters(self.ypart, self.n), xi)
        return xi

    def __str__(self) -> str:
        ys = " ".join(map(str, self.ypart)) if self.ypart else "e"
        return f"F:{treepair_id(self.fpart)} | Y: {ys}"


def treepair_id(tp: fn.TreePair) -> str:
    return "[" + str(tp) + "]"


# -- pushing F(n) elements left through y letters ----------------------------


def _expansion(letter: Letter, n: int) -> tuple[Letter, ...]:
    pieces = expand_y(letter.addr, Direction.RIGHT, n).letters
    if letter.sign < 0:
        pieces = tuple(l.inverse() for l in reversed(pieces))
    return pieces


def push_left(ys: Sequence[Letter], g: fn.TreePair, budget: int = 20_000) -> tuple[fn.TreePair, list[Letter]]:
    """Rewrite ``ys . g`` as ``g' . ys'``."""
    n = g.n
    stack = list(ys)
    out: deque[Letter] = deque()
    steps = 0
    while stack:
        item = stack.pop()
        if item.is_x:
            g = fn.compose(item.treepair(n), g)
            continue
        img = fn.partial_apply(g, item.addr)
        if img is not None:
            out.appendleft(Letter.y(img, item.sign))
            continue
        steps += 1
        if steps > budget:
            raise BudgetExceeded("y-expansion budget exhausted while pushing an x letter")
        stack.extend(_expansion(item, n))
    return g, list(out)


# -- simplification of the y part -------------------------------------------


def _sort_pass(ys: list[Letter]) -> bool:
    changed = False
    for t in range(len(ys) - 1):
        a, b = ys[t], ys[t + 1]
        if not comparable(a.addr, b.addr) and b.addr < a.addr:
            ys[t], ys[t + 1] = b, a
            changed = True
    return changed


def _cancel(ys: list[Letter]) -> bool:
    out: list[Letter] = []
    changed = False
    for l in ys:
        if out and out[-1].addr == l.addr and out[-1].sign == -l.sign:
            out.pop()
            changed = True
        else:
            out.append(l)
    ys[:] = out
    return changed


def _contraction_at(ys: Sequence[Letter], t: int, n: int) -> Optional[tuple[Letter, fn.TreePair]]:
    """If ``ys[t:t+3]`` is a contractible pattern, return (y letter, x element to push left)."""
    a, b, c = ys[t : t + 3]
    top = n - 1
    # y_{al0} y_{al(n-1)0}^{-1} y_{al(n-1)(n-1)} = x_{[0],al}^{-1} y_al
    if (a.sign, b.sign, c.sign) == (1, -1, 1) and len(a.addr) >= 1 and a.addr[-1] == 0:
        al = a.addr[:-1]
        if b.addr == al + (top, 0) and c.addr == al + (top, top):
            return Letter.y(al, 1), fn.invert(fn.generator_x_at(0, al, n))
    # y_{al00}^{-1} y_{al0(n-1)} y_{al(n-1)}^{-1} = x_{[0],al} y_al^{-1}
    if (a.sign, b.sign, c.sign) == (-1, 1, -1) and len(a.addr) >= 2 and a.addr[-2:] == (0, 0):
        al = a.addr[:-2]
        if b.addr == al + (0, top) and c.addr == al + (top,):
            return Letter.y(al, -1), fn.generator_x_at(0, al, n)
    return None


def simplify(f: fn.TreePair, ys: Sequence[Letter], budget: int = 2_000) -> tuple[fn.TreePair, list[Letter]]:
    n = f.n
    ys = list(ys)
    for _ in range(budget):
        changed = _sort_pass(ys)
        changed |= _cancel(ys)
        for t in range(len(ys) - 2):
            hit = _contraction_at(ys, t, n)
            if hit is None:
                continue
            letter, g = hit
            try:
                g2, pre = push_left(ys[:t], g, budget=500)
            except BudgetExceeded:
                continue
            candidate = pre + [letter] + ys[t + 3 :]
            if len(candidate) < len(ys):
                f = fn.compose(f, g2)
                ys = candidate
                changed = True
                break
        if not changed:
            break
    return f, ys


# -- exact identity decision via the product machine ---------------------------


@dataclass
class IdentitySearch:
    verdict: Verdict
    witness_prefix: Optional[Word] = None
    configs: int = 0


def decide_identity(machines: Sequence[Machine], n: int, budget: int = 60_000) -> IdentitySearch:
    """Decide whether the cascade of ``machines`` is the identity map.

    Explores joint states together with the unmatched input (``pend``) or the
    output emitted ahead of the input (``ahead``).  Any mismatch refutes with
    an input prefix all of whose extensions are moved.  Exhausting the
    reachable configurations proves identity.
    """
    machines = [m for m in machines if m.start != COPY]
    start = (tuple(m.start for m in machines), (), ())
    seen = {start}
    queue: deque = deque([(start, ())])
    while queue:
        (states, pend, ahead), path = queue.popleft()
        for a in range(n):
            st = list(states)
            buf: tuple = (a,)
            for k, m in enumerate(machines):
                nxt: list[int] = []
                for c in buf:
                    st[k], o = m.step(st[k], c)
                    nxt.extend(o)
                buf = tuple(nxt)
            p, h = pend, ahead
            if h:
                if h[0] != a:
                    return IdentitySearch(Verdict.FALSE, path + (a,), len(seen))
                h = h[1:]
            else:
                p = p + (a,)
            for o in buf:
                if p:
                    if p[0] != o:
                        return IdentitySearch(Verdict.FALSE, path + (a,), len(seen))
                    p = p[1:]
                else:
                    h = h + (o,)
            st_t = tuple(st)
            if not p and not h and all(s == COPY for s in st_t):
                continue
            cfg = (st_t, p, h)
            if cfg not in seen:
                seen.add(cfg)
                if len(seen) > budget:
                    return IdentitySearch(Verdict.INCONCLUSIVE, None, len(seen))
                queue.append((cfg, path + (a,)))
    return IdentitySearch(Verdict.TRUE, None, len(seen))


def _machines_for(f: fn.TreePair, ys: Sequence[Letter]) -> list[Machine]:
    n = f.n
    out = [] if f.is_identity() else [_trie_machine(f, n)]
    return out + [letter_machine(l, n) for l in ys]


# -- collapsing a y part that lies in F(n) -----------------------------------


def _lcp(a: Seq, b: Seq) -> Word:
    size = len(a.prefix) + len(b.prefix) + 2 * (len(a.period) + len(b.period)) + 2
    ta, tb = a.take(size), b.take(size)
    k = 0
    while k < size and ta[k] == tb[k]:
        k += 1
    return ta[:k]


def _is_complete_code(leaves: Sequence[Word], n: int) -> bool:
    if sorted(leaves) != list(leaves):
        return False
    if any(comparable(leaves[i], leaves[i + 1]) for i in range(len(leaves) - 1)):
        return False
    return sum(Fraction(1, n ** len(l)) for l in leaves) == 1


def fn_collapse(ys: Sequence[Letter], n: int, max_depth: int = 10,
                rounds: int = 12) -> tuple[Verdict, Optional[fn.TreePair]]:
    """Decide whether the y word acts as an element of F(n).

    TRUE comes with the tree pair (certified by the exact search), FALSE means
    some probe point changed tail class.  Anything else is INCONCLUSIVE.
    """
    if not ys:
        return Verdict.TRUE, fn.TreePair.identity(n)
    cascade = compile_letters(tuple(ys), n)
    rng = np.random.default_rng(12345)
    top = n - 1
    local = [Seq(l.addr + pre, per) for l in ys
             for pre, per in (((), (0, top)), ((), (top, 0, 0, top)), ((0,), (top, 0)), ((top,), (0, top, top)))]
    for xi in local + probe_points(n, rng, 40):
        if not eventually_equal(run_cascade(cascade, xi), xi):
            return Verdict.FALSE, None  # F(n) preserves tail classes
    split: set[Word] = set()
    for _ in range(rounds):
        pairs = []
        queue = deque([()])
        while queue:
            u = queue.popleft()
            a = run_cascade(cascade, Seq(u, (0,)))
            b = run_cascade(cascade, Seq(u, (n - 1,)))
            v = _lcp(a, b)
            if u not in split and a == Seq(v, (0,)) and b == Seq(v, (n - 1,)):
                pairs.append((u, v))
            elif len(u) < max_depth:
                queue.extend(u + (d,) for d in range(n))
            else:
                return Verdict.INCONCLUSIVE, None
        pairs.sort()
        if not _is_complete_code([v for _, v in pairs], n):
            split.update(u for u, _ in pairs)
            continue
        h = fn.TreePair.from_pairs(n, pairs)
        search = decide_identity([letter_machine(l, n) for l in ys] + [_trie_machine(fn.invert(h), n)], n)
        if search.verdict is Verdict.TRUE:
            return Verdict.TRUE, h
        if search.verdict is Verdict.INCONCLUSIVE:
            return Verdict.INCONCLUSIVE, None
        bad = search.witness_prefix
        split.update(u for u, _ in pairs if bad[: len(u)] == u or u[: len(bad)] == bad)
    return Verdict.INCONCLUSIVE, None


def collapse_to_fn(ys: Sequence[Letter], n: int, max_depth: int = 10, rounds: int = 12) -> Optional[fn.TreePair]:
    """The tree pair equal to the y word, or None if it is not (found to be) in F(n)."""
    return fn_collapse(ys, n, max_depth, rounds)[1]


# -- public operations --------------------------------------------------------


def free_reduce(letters: Sequence[Letter]) -> list[Letter]:
    out: list[Letter] = []
    for l in letters:
        if out and out[-1] == l.inverse():
            out.pop()
        else:
            out.append(l)
    return out



def to_standard_form(w: GroupWord, *, collapse: bool = True) -> StandardForm:
    n = w.n
    f = fn.TreePair.identity(n)
    ys: list[Letter] = []
    for letter in free_reduce(w.letters):
        if letter.is_x:
            g, ys = push_left(ys, letter.treepair(n))
            f = fn.compose(f, g)
        else:
            ys.append(letter)
    f, ys = simplify(f, ys)
    if ys and collapse:
        h = collapse_to_fn(ys, n)
        if h is not None:
            f, ys = fn.compose(f, h), []
    return StandardForm(f, tuple(ys))


def _sf_letters(sf: StandardForm) -> tuple[Letter, ...]:
    out: list[Letter] = []
    for m, e in fn.factor_normal_form(sf.fpart):
        i, alpha = fn.numbered_address(m, sf.n)
        out += [Letter.x(i, alpha, 1 if e > 0 else -1)] * abs(e)
    return tuple(out) + sf.ypart


def rewrite_into(w: GroupWord, allowed, rounds: int = 4) -> GroupWord:
    """A word for ``w`` whose y letters satisfy ``allowed(address)`` if one is found.

    Offending letters are expanded by the four-letter relation (both
    directions are tried) and the result is simplified again; the best word
    found is returned even when some letters still fail.
    """
    n = w.n
    best = GroupWord(n, _sf_letters(to_standard_form(w)))
    bad = lambda g: sum(1 for l in g if not l.is_x and not allowed(l.addr))
    for direction in (Direction.RIGHT, Direction.LEFT):
        cur = best
        for _ in range(rounds):
            if not bad(cur):
                return cur
            letters: list[Letter] = []
            for l in cur:
                if l.is_x or allowed(l.addr):
                    letters.append(l)
                    continue
                e = expand_y(l.addr, direction, n)
                letters += (e if l.sign > 0 else e.inverse()).letters
            try:
                cur = GroupWord(n, _sf_letters(to_standard_form(GroupWord(n, tuple(letters)))))
            except BudgetExceeded:
                break
            if bad(cur) < bad(best):
                best = cur
    return best


@dataclass
class IdentityResult:
    verdict: Verdict
    witness: Optional[Seq] = None
    standard_form: Optional[StandardForm] = field(default=None, repr=False)
    route: str = ""

    def __bool__(self) -> bool:
        if self.verdict is Verdict.INCONCLUSIVE:
            raise Inconclusive("identity test was inconclusive")
        return self.verdict is Verdict.TRUE


PROBE_DEPTH = 6
PROBE_CAP = 60_000


def _probe(n: int) -> list[Seq]:
    depth = PROBE_DEPTH
    while depth > 3 and n ** depth > PROBE_CAP:
        depth -= 1
    return structured_points(n, depth)


def _witness_from_prefix(letters: Sequence[Letter], n: int, prefix: Word) -> Optional[Seq]:
    cands = [Seq(prefix, (d,)) for d in range(n)] + [Seq(prefix, (0, n - 1))]
    return first_moved(letters, n, cands)


def is_identity(w: GroupWord, budget: int = 60_000) -> IdentityResult:
    """Decide whether ``w`` is the identity.

    Evaluation refutations are exact.  A positive answer needs the standard
    form to be trivial (or, when the rewriting leaves y letters behind, the
    exhaustive product-machine check) and agreement on the structured probe.
    """
    n = w.n
    letters = w.letters
    if not letters:
        return IdentityResult(Verdict.TRUE, route="empty")
    moved = first_moved(letters, n, _probe(n))
    sf = to_standard_form(w)
    if sf.is_identity():
        if moved is not None:
            raise AssertionError(f"rewriting claims identity but {moved} is moved by {w}")
        return IdentityResult(Verdict.TRUE, None, sf, "standard-form")
    if moved is not None:
        return IdentityResult(Verdict.FALSE, moved, sf, "probe")
    if not sf.ypart:
        # a nontrivial tree pair moves d.0^omega or d.(n-1)^omega for any unequal leaf pair
        cands = []
        for d, r in sf.fpart.pairs:
            if d != r:
                cands += [Seq(d, (0,)), Seq(d, (n - 1,))]
        return IdentityResult(Verdict.FALSE, first_moved(letters, n, cands), sf, "standard-form")
    search = decide_identity(_machines_for(sf.fpart, sf.ypart), n, budget)
    if search.verdict is Verdict.FALSE:
        witness = _witness_from_prefix(letters, n, search.witness_prefix)
        return IdentityResult(Verdict.FALSE, witness, sf, "product-machine")
    return IdentityResult(search.verdict, None, sf, "product-machine")


def in_fn(w: GroupWord) -> Verdict:
    """Whether ``w`` lies in F(n) (tree pairs, no y part needed)."""
    sf = to_standard_form(w, collapse=False)
    return fn_collapse(sf.ypart, w.n)[0]


def equals_words(w1: GroupWord, w2: GroupWord) -> bool:
    """Raises :class:`Inconclusive` when undecided."""
    return bool(is_identity(w1 * w2.inverse()))
