"""Tree-pair diagrams for the Brown-Thompson group F(n).

An element is stored as the ordered list of leaf pairs ``(d, r)``: the
cylinder of the domain leaf ``d`` is sent onto the cylinder of the range leaf
``r`` by replacing the prefix.  Pairs are kept sorted by domain leaf and
reduced, so equality of elements is equality of the stored tuples.

Products follow the left-to-right convention: ``compose(f, g)`` applies
``f`` first.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from .seq import Order, Seq, Word, check_arity, lex_compare


class PreconditionViolated(ValueError):
    pass


@dataclass(frozen=True)
class TreePair:
    n: int
    pairs: tuple[tuple[Word, Word], ...]

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[Sequence[int], Sequence[int]]]) -> "TreePair":
        items = sorted((tuple(d), tuple(r)) for d, r in pairs)
        return cls(n, _reduce(n, items))

    @classmethod
    def identity(cls, n: int) -> "TreePair":
        return cls(n, (((), ()),))

    @property
    def domain(self) -> list[Word]:
        return [d for d, _ in self.pairs]

    @property
    def range(self) -> list[Word]:
        return [r for _, r in self.pairs]

    @property
    def leaves(self) -> int:
        return len(self.pairs)

    def is_identity(self) -> bool:
        return self.pairs == (((), ()),)

    def __mul__(self, other: "TreePair") -> "TreePair":
        return compose(self, other)

    def __invert__(self) -> "TreePair":
        return invert(self)

    def __pow__(self, k: int) -> "TreePair":
        base = self if k >= 0 else invert(self)
        out = TreePair.identity(self.n)
        for _ in range(abs(k)):
            out = compose(out, base)
        return out

    def __str__(self) -> str:
        from .seq import format_word

        return " ".join(f"{format_word(d)}>{format_word(r)}" for d, r in self.pairs)


def _reduce(n: int, items: list[tuple[Word, Word]]) -> tuple[tuple[Word, Word], ...]:
    stack: list[tuple[Word, Word]] = []
    for item in items:
        stack.append(item)
        while len(stack) >= n:
            top = stack[-n:]
            d0, r0 = top[0]
            if not d0 or not r0 or d0[-1] != 0 or r0[-1] != 0:
                break
            du, ru = d0[:-1], r0[:-1]
            if all(d == du + (j,) and r == ru + (j,) for j, (d, r) in enumerate(top)):
                del stack[-n:]
                stack.append((du, ru))
            else:
                break
    return tuple(stack)


def _leaf_index(leaves: Sequence[Word]) -> dict[Word, int]:
    return {leaf: i for i, leaf in enumerate(leaves)}


def _find_leaf(index: dict[Word, int], word: Sequence[int], maxlen: int) -> Optional[int]:
    word = tuple(word)
    for k in range(min(len(word), maxlen) + 1):
        hit = index.get(word[:k])
        if hit is not None:
            return hit
    return None


def compose(f: TreePair, g: TreePair) -> TreePair:
    """The product ``fg``: apply ``f`` first, then ``g``."""
    if f.n != g.n:
        raise ValueError("arity mismatch")
    gdom = g.domain
    gidx = _leaf_index(gdom)
    glen = max(map(len, gdom))
    out: list[tuple[Word, Word]] = []
    for d, r in f.pairs:
        hit = _find_leaf(gidx, r, glen)
        if hit is not None:
            gd, gr = g.pairs[hit]
            out.append((d, gr + r[len(gd):]))
            continue
        # r is a proper prefix of a block of consecutive g-leaves
        lo = bisect.bisect_left(gdom, r)
        hi = lo
        while hi < len(gdom) and gdom[hi][: len(r)] == r:
            hi += 1
        for gd, gr in g.pairs[lo:hi]:
            out.append((d + gd[len(r):], gr))
    return TreePair(f.n, _reduce(f.n, out))


def invert(f: TreePair) -> TreePair:
    return TreePair(f.n, tuple(sorted((r, d) for d, r in f.pairs)))


def equals(f: TreePair, g: TreePair) -> bool:
    return f.n == g.n and f.pairs == g.pairs


def evaluate(f: TreePair, xi: Seq) -> Seq:
    for d, r in f.pairs:
        if xi.startswith(d):
            rest = xi.drop(len(d))
            return Seq(r + rest.prefix, rest.period)
    raise AssertionError("domain leaves must cover the Cantor set")


def partial_apply(f: TreePair, beta: Sequence[int]) -> Optional[Word]:
    """Image of the address ``beta`` under the partial action, or None if undefined."""
    beta = tuple(beta)
    for d, r in f.pairs:
        if beta[: len(d)] == d:
            return r + beta[len(d):]
    return None


# -- generators -------------------------------------------------------------


@lru_cache(maxsize=None)
def generator_x_at(i: int, alpha: Word, n: int) -> TreePair:
    """``x_{[i],alpha}``: the generator ``x_i`` acting below ``alpha`` only."""
    check_arity(n)
    if not 0 <= i <= n - 2:
        raise ValueError(f"x_[i],alpha needs 0 <= i <= n-2, got i={i}")
    alpha = tuple(alpha)
    pairs = []
    for t, a in enumerate(alpha):
        for j in range(n):
            if j != a:
                leaf = alpha[:t] + (j,)
                pairs.append((leaf, leaf))
    dom = [(k,) for k in range(i)] + [(i, j) for j in range(n)] + [(k,) for k in range(i + 1, n)]
    ran = [(k,) for k in range(n - 1)] + [(n - 1, j) for j in range(n)]
    pairs += [(alpha + d, alpha + r) for d, r in zip(dom, ran)]
    return TreePair.from_pairs(n, pairs)


def numbered_address(m: int, n: int) -> tuple[int, Word]:
    """``x_m = x_{[m mod (n-1)], (n-1)^(m div (n-1))}``."""
    return m % (n - 1), (n - 1,) * (m // (n - 1))


def generator_x(m: int, n: int) -> TreePair:
    if m < 0:
        raise ValueError("generator index must be non-negative")
    i, alpha = numbered_address(m, n)
    return generator_x_at(i, alpha, n)


def conjugation_formula(m: int, n: int) -> TreePair:
    """``x_0^{-k} x_j x_0^k`` with ``j = m - k(n-1)`` in ``[1, n-1]``; used as a cross-check."""
    if m < n:
        return generator_x(m, n)
    k = (m - 1) // (n - 1)
    x0 = generator_x(0, n)
    return compose(compose(x0 ** (-k), generator_x(m - k * (n - 1), n)), x0**k)


# -- support ----------------------------------------------------------------


@dataclass(frozen=True)
class Interval:
    """The open lexicographic interval ``(lo, hi)``."""

    lo: Seq
    hi: Seq

    def __post_init__(self):
        if lex_compare(self.lo, self.hi) is not Order.LT:
            raise ValueError("interval needs lo < hi")

    def contains(self, xi: Seq) -> bool:
        return lex_compare(self.lo, xi) is Order.LT and lex_compare(xi, self.hi) is Order.LT

    def __str__(self) -> str:
        return f"({self.lo}, {self.hi})"


def _fixed_point(d: Word, r: Word) -> Optional[Seq]:
    if len(r) > len(d) and r[: len(d)] == d:
        return Seq(d, r[len(d):])
    if len(d) > len(r) and d[: len(r)] == r:
        return Seq(d, d[len(r):])
    return None


def support(f: TreePair) -> list[Interval]:
    n = f.n
    # pieces: [lo, lo_open, hi, hi_open]
    pieces: list[list] = []
    for d, r in f.pairs:
        if d == r:
            continue
        lo, hi = Seq(d, (0,)), Seq(d, (n - 1,))
        p = _fixed_point(d, r)
        if p is None:
            pieces.append([lo, False, hi, False])
        elif p == lo:
            pieces.append([lo, True, hi, False])
        elif p == hi:
            pieces.append([lo, False, hi, True])
        else:
            pieces.append([lo, False, p, True])
            pieces.append([p, True, hi, False])
    merged: list[list] = []
    for piece in pieces:
        if merged and not merged[-1][3] and not piece[1]:
            merged[-1][2:] = piece[2:]
        else:
            merged.append(piece)
    out = []
    for lo, lo_open, hi, hi_open in merged:
        if not (lo_open and hi_open):
            raise AssertionError("support pieces must end at fixed points")
        out.append(Interval(lo, hi))
    return out


def dense_support_element(s: Sequence[int], n: int) -> TreePair:
    """An element whose support is exactly ``(s 0^omega, (n-1)^omega)``."""
    s0 = tuple(s) + (0,)
    left, block = [], []
    for t, a in enumerate(s0):
        for j in range(n):
            leaf = s0[:t] + (j,)
            if j < a:
                left.append(leaf)
            elif j > a:
                block.append(leaf)
    block.sort()
    last = block[-1]
    dom = [s0 + (j,) for j in range(n)] + block
    ran = [s0] + block[:-1] + [last + (j,) for j in range(n)]
    pairs = [(leaf, leaf) for leaf in left] + list(zip(dom, ran))
    return TreePair.from_pairs(n, pairs)


# -- restriction ------------------------------------------------------------


def _expand(f_pairs: list[tuple[Word, Word]], k: int, n: int) -> None:
    d, r = f_pairs[k]
    f_pairs[k : k + 1] = [(d + (j,), r + (j,)) for j in range(n)]


def _align(pairs: list[tuple[Word, Word]], point: Seq, n: int) -> None:
    """Refine until ``point`` is an endpoint of a domain-leaf cylinder."""
    if point.period == (0,):
        base = point.prefix
    elif point.period == (n - 1,):
        base = point.prefix
    else:
        raise PreconditionViolated(f"interval endpoint {point} is not of the form s0^w or s(n-1)^w")
    while True:
        for k, (d, _) in enumerate(pairs):
            if point.startswith(d):
                break
        if len(pairs[k][0]) >= len(base):
            return
        _expand(pairs, k, n)


def restrict_to_interval(f: TreePair, interval: Interval) -> TreePair:
    """The element agreeing with ``f`` on ``interval`` and fixing everything else."""
    n = f.n
    for end in (interval.lo, interval.hi):
        if evaluate(f, end) != end:
            raise PreconditionViolated(f"{end} is moved by the element")
    pairs = list(f.pairs)
    _align(pairs, interval.lo, n)
    _align(pairs, interval.hi, n)
    out = []
    for d, r in pairs:
        first, last = Seq(d, (0,)), Seq(d, (n - 1,))
        inside = lex_compare(interval.lo, first) is not Order.GT and lex_compare(last, interval.hi) is not Order.GT
        out.append((d, r) if inside else (d, d))
    return TreePair.from_pairs(n, out)


# -- normal form and abelianization ------------------------------------------


def _vine(leaves: int, n: int) -> list[Word]:
    k = (leaves - 1) // (n - 1)
    out = []
    for t in range(k):
        out += [(n - 1,) * t + (j,) for j in range(n - 1)]
    out.append((n - 1,) * k)
    return out


def _exposed_carets(leaves: Sequence[Word], n: int) -> list[int]:
    out = []
    for m in range(len(leaves) - n + 1):
        u = leaves[m][:-1]
        if leaves[m] and all(leaves[m + j] == u + (j,) for j in range(n)):
            if not all(d == n - 1 for d in u) or m + n < len(leaves):
                out.append(m)
    return out


def _peel_positive(p: TreePair) -> list[int]:
    """Indices ``m_1..m_k`` with ``p = x_{m_1} ... x_{m_k}`` for ``p`` mapping onto a vine."""
    n = p.n
    word: list[int] = []
    while not p.is_identity():
        for m in _exposed_carets(p.domain, n):
            g = compose(p, invert(generator_x(m, n)))
            if g.leaves < p.leaves and g.range == _vine(g.leaves, n):
                word.append(m)
                p = g
                break
        else:
            raise RuntimeError("positive element did not peel; tree pair is not positive")
    word.reverse()
    return word


def _sort_positive(word: list[int], n: int) -> list[int]:
    # x_j x_i = x_i x_{j+n-1} for i < j
    word = list(word)
    changed = True
    while changed:
        changed = False
        for t in range(len(word) - 1):
            j, i = word[t], word[t + 1]
            if j > i:
                word[t], word[t + 1] = i, j + n - 1
                changed = True
    return word


def _group(word: list[int]) -> list[tuple[int, int]]:
    out: list[list[int]] = []
    for m in word:
        if out and out[-1][0] == m:
            out[-1][1] += 1
        else:
            out.append([m, 1])
    return [(m, e) for m, e in out]


def factor_normal_form(f: TreePair) -> list[tuple[int, int]]:
    """Normal form as ``[(index, exponent), ...]`` over the numbered generators.

    Positive exponents come first with nondecreasing indices, then negative
    exponents with nonincreasing indices.
    """
    n = f.n
    vine = _vine(f.leaves, n)
    positive = TreePair.from_pairs(n, zip(f.domain, vine))
    negative = TreePair.from_pairs(n, zip(f.range, vine))
    pos = _group(_sort_positive(_peel_positive(positive), n))
    neg = _group(_sort_positive(_peel_positive(negative), n))
    return pos + [(m, -e) for m, e in reversed(neg)]


def word_to_treepair(word: Sequence[tuple[int, int]], n: int) -> TreePair:
    out = TreePair.identity(n)
    for m, e in word:
        out = compose(out, generator_x(m, n) ** e)
    return out


def abel_index(m: int, n: int) -> int:
    """Coordinate of ``a(x_m)``: ``x_m`` is conjugate to ``x_j`` with ``j`` in ``[1, n-1]``."""
    return 0 if m == 0 else (m - 1) % (n - 1) + 1


def abelianization_a(f: TreePair) -> tuple[int, ...]:
    vec = [0] * f.n
    for m, e in factor_normal_form(f):
        vec[abel_index(m, f.n)] += e
    return tuple(vec)


# -- presentations ----------------------------------------------------------------


def _conj(x: TreePair, *by: TreePair) -> TreePair:
    """``x^{b_1 ... b_k}`` with ``x^y = y^{-1} x y``."""
    for b in by:
        x = compose(compose(invert(b), x), b)
    return x


def presentation_relations(n: int, max_index: int = 8) -> list[tuple[str, TreePair, TreePair]]:
    """Relations of both presentations of F(n), as (label, lhs, rhs).

    The infinite family ``x_i^{-1} x_j x_i = x_{j+n-1}`` for ``0 <= i < j <=
    max_index`` and the finite family on ``x_0 .. x_{n-1}``.
    """
    x = lambda m: generator_x(m, n)
    out = []
    for j in range(1, max_index + 1):
        for i in range(j):
            out.append((f"x{i}^-1 x{j} x{i} = x{j + n - 1}", _conj(x(j), x(i)), x(j + n - 1)))
    for k in range(1, n):
        for i in range(1, k):
            out.append((f"x{k}^x0 = x{k}^x{i}", _conj(x(k), x(0)), _conj(x(k), x(i))))
    for k in range(1, n):
        for i in range(max(1, k - 1), n):
            out.append((f"x{k}^(x0 x0) = x{k}^(x0 x{i})", _conj(x(k), x(0), x(0)), _conj(x(k), x(0), x(i))))
    out.append((f"x1^(x0 x0 x0) = x1^(x0 x0 x{n - 1})", _conj(x(1), x(0), x(0), x(0)),
                _conj(x(1), x(0), x(0), x(n - 1))))
    return out
