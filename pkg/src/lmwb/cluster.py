"""Special words, sorted lists, the graphs H and the m-clusters they match.

A *special word* is a product of y letters ``y_{s_1}^{t_1} ... y_{s_k}^{t_k}``
with alternating signs whose addresses are leaves of one n-ary tree with
exactly n-2 leaves between consecutive addresses.  Adjacent vertices of the
coset graph (right cosets of F(n) in G0(n)) differ by special words.

The cube side is a CW subdivision of ``[0,1]^m`` cut out by an admissible
arrangement: every hyperplane ``x_i = 0`` and ``x_i = 1`` plus some of the
``x_i = x_{i+1}``.  Cells are sign vectors, each stored with a rational point
that realizes it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .rewrite import Verdict, in_fn, to_standard_form
from .seq import Word, check_arity, comparable, format_word
from .words import GroupWord, Letter, parse_word_text

SignedAddress = tuple[Word, int]


class NotSpecial(ValueError):
    pass


# -- special words ------------------------------------------------------------


def _signed(w: Union[GroupWord, Iterable]) -> list[SignedAddress]:
    if isinstance(w, (GroupWord, SpecialWord)):
        w = w.letters if isinstance(w, GroupWord) else w.to_word().letters
    out = []
    for item in w:
        if isinstance(item, Letter):
            if item.is_x:
                raise NotSpecial(f"{item} is not a y letter")
            out.append((item.addr, item.sign))
        else:
            addr, sign = item
            out.append((tuple(addr), 1 if sign > 0 else -1))
    return out


def minimal_tree_leaves(addresses: Sequence[Word], n: int) -> Optional[list[Word]]:
    """Leaves (in order) of the smallest n-ary tree having all addresses as leaves.

    None when two addresses are prefix-comparable, since then no tree has both
    as leaves.
    """
    addrs = [tuple(a) for a in addresses]
    if len(set(addrs)) != len(addrs):
        return None
    if any(comparable(a, b) for a, b in itertools.combinations(addrs, 2)):
        return None
    internal = {a[:k] for a in addrs for k in range(len(a))}
    if not internal:
        return [()]
    leaves = [u + (d,) for u in internal for d in range(n) if u + (d,) not in internal]
    return sorted(leaves)


def between_counts(addresses: Sequence[Word], n: int) -> Optional[list[int]]:
    leaves = minimal_tree_leaves(addresses, n)
    if leaves is None:
        return None
    pos = {leaf: i for i, leaf in enumerate(leaves)}
    idx = [pos[tuple(a)] for a in addresses]
    return [b - a - 1 for a, b in zip(idx, idx[1:])]


def is_special(w, n: int) -> bool:
    """Alternating signs and exactly n-2 minimal-tree leaves between neighbours.

    Refining a leaf of a tree adds n-1 leaves, so a between-count in the
    minimal tree can only grow in steps of n-1; since n-2 < n-1 the minimal
    tree decides the existential question.
    """
    check_arity(n)
    try:
        letters = _signed(w)
    except NotSpecial:
        return False
    if not letters:
        return False
    if any(s == t for (_, s), (_, t) in zip(letters, letters[1:])):
        return False
    addrs = [a for a, _ in letters]
    if any(a >= b for a, b in zip(addrs, addrs[1:])):
        return False
    counts = between_counts(addrs, n)
    return counts is not None and all(c == n - 2 for c in counts)


@dataclass(frozen=True)
class SpecialWord:
    n: int
    letters: tuple[SignedAddress, ...]

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple((tuple(a), s) for a, s in self.letters))
        if not is_special(self.letters, self.n):
            raise NotSpecial(f"{self} is not special")

    @classmethod
    def parse(cls, text: str, n: int) -> "SpecialWord":
        return cls(n, tuple(_signed(parse_word_text(text, n))))

    @property
    def addresses(self) -> tuple[Word, ...]:
        return tuple(a for a, _ in self.letters)

    def to_word(self) -> GroupWord:
        return GroupWord(self.n, tuple(Letter.y(a, s) for a, s in self.letters))

    def inverse_letters(self) -> tuple[SignedAddress, ...]:
        # reverse and flip; the letters commute, so the sorted order is kept
        return tuple((a, -s) for a, s in self.letters)

    def __str__(self) -> str:
        return " ".join(f"y[{format_word(a, empty='')}]{'+' if s > 0 else '-'}" for a, s in self.letters)


def are_alternating(w1: SpecialWord, w2: SpecialWord) -> bool:
    return is_special(w1.letters + w2.letters, w1.n)


def are_consecutive(w1: SpecialWord, w2: SpecialWord) -> bool:
    return are_alternating(w1, w2) or is_special(w1.letters + w2.inverse_letters(), w1.n)


def are_independent(w1: SpecialWord, w2: SpecialWord) -> bool:
    return not any(comparable(a, b) for a in w1.addresses for b in w2.addresses)


@dataclass(frozen=True)
class SortedList:
    n: int
    words: tuple[SpecialWord, ...]

    def __post_init__(self):
        object.__setattr__(self, "words", tuple(self.words))

    @classmethod
    def parse(cls, lines: Iterable[str], n: int) -> "SortedList":
        words = [SpecialWord.parse(line, n) for line in lines if line.strip() and not line.lstrip().startswith("#")]
        return cls(n, tuple(words))

    @property
    def m(self) -> int:
        return len(self.words)

    def is_independent(self) -> bool:
        return all(are_independent(a, b) for a, b in itertools.combinations(self.words, 2))

    def is_sorted(self) -> bool:
        return self.is_independent() and all(
            max(a.addresses) < min(b.addresses) for a, b in itertools.combinations(self.words, 2))

    def is_proper(self) -> bool:
        return all(are_alternating(a, b) or not are_consecutive(a, b)
                   for a, b in zip(self.words, self.words[1:]))

    def alternating_set(self) -> frozenset[int]:
        """1-based i with tau_i tau_{i+1} special."""
        return frozenset(i + 1 for i, (a, b) in enumerate(zip(self.words, self.words[1:]))
                         if are_alternating(a, b))


def is_proper(sl: SortedList) -> bool:
    return sl.is_proper()


def tau_X(sl: SortedList, X: Iterable[int]) -> GroupWord:
    out = GroupWord(sl.n)
    for j in sorted(set(X)):
        if not 1 <= j <= sl.m:
            raise ValueError(f"index {j} outside 1..{sl.m}")
        out = out * sl.words[j - 1].to_word()
    return out


def _sorted_ypart(ys: Sequence[Letter]) -> Optional[list[Letter]]:
    if any(comparable(a.addr, b.addr) for a, b in itertools.combinations(ys, 2)):
        return None
    return sorted(ys, key=lambda l: l.addr)


def coset_edge_test(t1: GroupWord, t2: GroupWord) -> bool:
    """Whether F(n)t1 and F(n)t2 are adjacent: t1 t2^{-1} = f . (special word)."""
    sf = to_standard_form(t1 * t2.inverse())
    if not sf.ypart:
        return False
    ys = _sorted_ypart(sf.ypart)
    return ys is not None and is_special(ys, t1.n)


def same_coset(t1: GroupWord, t2: GroupWord) -> Verdict:
    return in_fn(t1 * t2.inverse())


# -- arrangements and cells ---------------------------------------------------


@dataclass(frozen=True)
class Hyperplane:
    kind: str  # "0", "1" (x_i = c) or "eq" (x_i = x_{i+1})
    i: int  # 1-based

    def value(self, point: Sequence[Fraction]) -> Fraction:
        x = point[self.i - 1]
        if self.kind == "eq":
            return x - point[self.i]
        return x - int(self.kind)

    def __str__(self) -> str:
        if self.kind == "eq":
            return f"x{self.i}=x{self.i + 1}"
        return f"x{self.i}={self.kind}"


@dataclass(frozen=True)
class Arrangement:
    m: int
    type2: frozenset[int] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "type2", frozenset(self.type2))
        if self.m < 0:
            raise ValueError("dimension must be non-negative")
        bad = [i for i in self.type2 if not 1 <= i <= self.m - 1]
        if bad:
            raise ValueError(f"type-2 indices {bad} outside 1..{self.m - 1}")

    @property
    def hyperplanes(self) -> tuple[Hyperplane, ...]:
        out = [Hyperplane(c, i) for i in range(1, self.m + 1) for c in ("0", "1")]
        return tuple(out + [Hyperplane("eq", i) for i in sorted(self.type2)])


def _sign(v: Fraction) -> int:
    return (v > 0) - (v < 0)


@dataclass(frozen=True)
class Cell:
    sign: tuple[int, ...]
    dim: int
    point: tuple[Fraction, ...] = field(compare=False, hash=False, repr=False)

    def has_face(self, other: "Cell") -> bool:
        return all(o == s or o == 0 for s, o in zip(self.sign, other.sign))


# a coordinate class is an interval (lo, lo_closed, hi, hi_closed); None = unbounded
_Iv = tuple[Optional[Fraction], bool, Optional[Fraction], bool]
_ZERO, _ONE = Fraction(0), Fraction(1)
CUBE_CLASSES: dict[str, _Iv] = {"0": (_ZERO, True, _ZERO, True), "I": (_ZERO, False, _ONE, False),
                                 "1": (_ONE, True, _ONE, True)}
LINE_CLASSES: dict[str, _Iv] = {"<0": (None, False, _ZERO, False), **CUBE_CLASSES, ">1": (_ONE, False, None, False)}


def _meet(a: _Iv, b: _Iv) -> Optional[_Iv]:
    lo, lc = a[0], a[1]
    if b[0] is not None and (lo is None or b[0] > lo or (b[0] == lo and not b[1])):
        lo, lc = b[0], b[1]
    hi, hc = a[2], a[3]
    if b[2] is not None and (hi is None or b[2] < hi or (b[2] == hi and not b[3])):
        hi, hc = b[2], b[3]
    if lo is not None and hi is not None and (lo > hi or (lo == hi and not (lc and hc))):
        return None
    return lo, lc, hi, hc


def _image(iv: _Iv, rel: str) -> _Iv:
    """Where x_{i+1} may lie given x_i in iv and ``x_i rel x_{i+1}``."""
    if rel == "=":
        return iv
    if rel == "<":
        return iv[0], False, None, False
    return None, False, iv[2], False


def _pick(iv: _Iv) -> Fraction:
    lo, lc, hi, hc = iv
    if lo is not None and hi is not None:
        return lo if lo == hi else (lo + hi) / 2
    if lo is not None:
        return lo if lc else lo + 1
    if hi is not None:
        return hi if hc else hi - 1
    return _ZERO


def _realize(classes: Sequence[_Iv], rels: dict[int, str]) -> Optional[tuple[Fraction, ...]]:
    """A point with x_i in classes[i] and the given neighbour relations, if any."""
    m = len(classes)
    reach: list[_Iv] = []
    for i, c in enumerate(classes):
        cur = c if i == 0 or i not in rels else _meet(c, _image(reach[-1], rels[i]))
        if cur is None:
            return None
        reach.append(cur)
    point = [Fraction(0)] * m
    for i in reversed(range(m)):
        iv = reach[i]
        if i + 1 < m and (i + 1) in rels:
            nxt, rel = point[i + 1], rels[i + 1]
            bound = {"=": (nxt, True, nxt, True), "<": (None, False, nxt, False),
                     ">": (nxt, False, None, False)}[rel]
            iv = _meet(iv, bound)
            assert iv is not None
        point[i] = _pick(iv)
    return tuple(point)


def _enumerate_cells(a: Arrangement, classes: dict[str, _Iv]) -> list[Cell]:
    hps = a.hyperplanes
    type2 = sorted(a.type2)
    seen: dict[tuple[int, ...], Cell] = {}
    for cls in itertools.product(classes.values(), repeat=a.m):
        for rs in itertools.product("<=>", repeat=len(type2)):
            # rels keyed by 0-based index of the right-hand coordinate
            rels = {i: r for i, r in zip(type2, rs)}
            point = _realize(cls, rels)
            if point is None:
                continue
            sign = tuple(_sign(h.value(point)) for h in hps)
            if sign not in seen:
                seen[sign] = Cell(sign, _cell_dim(cls, rels, a.m), point)
    return sorted(seen.values(), key=lambda c: (c.dim, c.sign))


def _cell_dim(cls: Sequence[_Iv], rels: dict[int, str], m: int) -> int:
    free = [c[0] != c[2] or c[0] is None for c in cls]
    dim = sum(free)
    for i, r in rels.items():
        if r == "=" and free[i - 1] and free[i]:
            dim -= 1
    return dim


def face_complex(a: Arrangement) -> list[Cell]:
    """All cells of the arrangement in R^m."""
    return _enumerate_cells(a, LINE_CLASSES)


@dataclass(frozen=True)
class Flat:
    """Intersection of hyperplanes, keyed by the set of hyperplanes containing it."""

    arrangement: Arrangement
    key: frozenset[Hyperplane]
    dim: int

    def __str__(self) -> str:
        return " & ".join(sorted(map(str, self.key))) or f"R^{self.arrangement.m}"


def _flat_from(a: Arrangement, pins: dict[int, int], eqs: Iterable[int]) -> Optional[Flat]:
    parent = list(range(a.m + 1))

    def root(i):
        while parent[i] != i:
            i = parent[i]
        return i

    for i in eqs:
        parent[root(i + 1)] = root(i)
    value: dict[int, int] = {}
    for i, v in pins.items():
        if value.setdefault(root(i), v) != v:
            return None
    key = set()
    for h in a.hyperplanes:
        r = root(h.i)
        if h.kind == "eq":
            r2 = root(h.i + 1)
            if r == r2 or (r in value and value.get(r2) == value[r]):
                key.add(h)
        elif value.get(r) == int(h.kind):
            key.add(h)
    roots = {root(i) for i in range(1, a.m + 1)}
    return Flat(a, frozenset(key), sum(1 for r in roots if r not in value))


def flats(a: Arrangement) -> list[Flat]:
    """Every nonempty intersection of hyperplanes, R^m first."""
    out: dict[frozenset, Flat] = {}
    type2 = sorted(a.type2)
    for pins in itertools.product((None, 0, 1), repeat=a.m):
        for chosen in itertools.product((False, True), repeat=len(type2)):
            f = _flat_from(a, {i + 1: v for i, v in enumerate(pins) if v is not None},
                           [i for i, c in zip(type2, chosen) if c])
            if f is not None:
                out.setdefault(f.key, f)
    return sorted(out.values(), key=lambda f: (-f.dim, sorted(map(str, f.key))))


@dataclass(frozen=True)
class ClusterComplex:
    arrangement: Arrangement
    cells: tuple[Cell, ...]

    def counts(self) -> tuple[int, ...]:
        top = max((c.dim for c in self.cells), default=-1)
        return tuple(sum(1 for c in self.cells if c.dim == d) for d in range(top + 1))

    def vertices(self) -> list[Cell]:
        return [c for c in self.cells if c.dim == 0]

    def edges(self) -> list[tuple[Cell, Cell]]:
        vs = self.vertices()
        out = []
        for e in (c for c in self.cells if c.dim == 1):
            ends = [v for v in vs if e.has_face(v)]
            assert len(ends) == 2, "every edge of a bounded complex has two ends"
            out.append((ends[0], ends[1]))
        return out


def cluster(a: Arrangement) -> ClusterComplex:
    return ClusterComplex(a, tuple(_enumerate_cells(a, CUBE_CLASSES)))


def subcluster(c: ClusterComplex, flat: Flat) -> ClusterComplex:
    hps = c.arrangement.hyperplanes
    zero = [hps.index(h) for h in flat.key]
    return ClusterComplex(c.arrangement, tuple(cell for cell in c.cells if all(cell.sign[j] == 0 for j in zero)))


def euler_characteristic(c: ClusterComplex) -> int:
    return sum((-1) ** cell.dim for cell in c.cells)


def vertex_set(v: Cell) -> frozenset[int]:
    """The X with x_i = 1 exactly for i in X."""
    return frozenset(i + 1 for i, x in enumerate(v.point) if x == 1)


def skeleton_edges(c: ClusterComplex) -> set[frozenset[frozenset[int]]]:
    return {frozenset((vertex_set(u), vertex_set(v))) for u, v in c.edges()}


def triple_edges(m: int, Y: Iterable[int]) -> set[frozenset[frozenset[int]]]:
    """Edges from partitions (X1, X2, X3): X2 = {j..k} with j..k-1 in Y joins X3 and X2 u X3."""
    Y = set(Y)
    out = set()
    for j in range(1, m + 1):
        for k in range(j, m + 1):
            if not all(i in Y for i in range(j, k)):
                break
            x2 = frozenset(range(j, k + 1))
            rest = [i for i in range(1, m + 1) if i not in x2]
            for r in range(len(rest) + 1):
                for x3 in itertools.combinations(rest, r):
                    out.add(frozenset((frozenset(x3), x2 | frozenset(x3))))
    return out


def to_json(c: ClusterComplex) -> dict:
    return {"m": c.arrangement.m, "type2": sorted(c.arrangement.type2),
            "cells": [{"dim": cell.dim, "sign": list(cell.sign)} for cell in c.cells]}


def _label(X: Iterable[int]) -> str:
    return "{" + ",".join(map(str, sorted(X))) + "}"


def to_dot(c: ClusterComplex, name: str = "cluster") -> str:
    lines = [f"graph {name} {{"]
    for v in c.vertices():
        lines.append(f'  "{_label(vertex_set(v))}";')
    for u, v in c.edges():
        lines.append(f'  "{_label(vertex_set(u))}" -- "{_label(vertex_set(v))}";')
    return "\n".join(lines + ["}"])


# -- the graphs H -------------------------------------------------------------


def _subsets(m: int) -> list[frozenset[int]]:
    return [frozenset(s) for r in range(m + 1) for s in itertools.combinations(range(1, m + 1), r)]


@dataclass
class HSubgraph:
    sorted_list: SortedList
    base: GroupWord
    vertices: dict[frozenset[int], GroupWord]
    edges: set[frozenset[frozenset[int]]]
    collisions: list[tuple[frozenset[int], frozenset[int]]] = field(default_factory=list)
    undecided: list[tuple[frozenset[int], frozenset[int]]] = field(default_factory=list)

    @property
    def distinct(self) -> bool:
        return not self.collisions and not self.undecided

    def vertex_count(self) -> int:
        return len(self.vertices) - len(self.collisions)

    def to_dot(self, name: str = "H") -> str:
        lines = [f"graph {name} {{"]
        lines += [f'  "{_label(X)}" [label="{_label(X)}: {w}"];' for X, w in self.vertices.items()]
        for e in sorted(self.edges, key=lambda e: sorted(map(sorted, e))):
            u, v = sorted(e, key=sorted)
            lines.append(f'  "{_label(u)}" -- "{_label(v)}";')
        return "\n".join(lines + ["}"])


def h_subgraph(sl: SortedList, base: Optional[GroupWord] = None) -> HSubgraph:
    base = base if base is not None else GroupWord(sl.n)
    verts = {X: tau_X(sl, X) * base for X in _subsets(sl.m)}
    h = HSubgraph(sl, base, verts, set())
    for A, B in itertools.combinations(verts, 2):
        same = same_coset(verts[A], verts[B])
        if same is Verdict.TRUE:
            h.collisions.append((A, B))
        elif same is Verdict.INCONCLUSIVE:
            h.undecided.append((A, B))
        if same is not Verdict.TRUE and coset_edge_test(verts[A], verts[B]):
            h.edges.add(frozenset((A, B)))
    return h


@dataclass
class SkeletonReport:
    Y: frozenset[int]
    cluster_edges: set
    triple_edges: set
    h_edges: set
    distinct: bool

    @property
    def ok(self) -> bool:
        return self.distinct and self.cluster_edges == self.triple_edges == self.h_edges


def skeleton_report(sl: SortedList, base: Optional[GroupWord] = None) -> SkeletonReport:
    Y = sl.alternating_set()
    c = cluster(Arrangement(sl.m, Y))
    h = h_subgraph(sl, base)
    return SkeletonReport(Y, skeleton_edges(c), triple_edges(sl.m, Y), h.edges, h.distinct)


def skeleton_match(sl: SortedList, base: Optional[GroupWord] = None) -> bool:
    """X -> F(n) tau_X is an isomorphism from the cluster's 1-skeleton onto H."""
    return skeleton_report(sl, base).ok


@dataclass
class IntersectionReport:
    common: list[tuple[frozenset[int], frozenset[int]]]
    realized: Optional[bool]
    face: Optional[tuple[frozenset[int], frozenset[int]]] = None  # (free indices S, fixed Z)
    note: str = ""


def h_intersection_check(c1: HSubgraph, c2: HSubgraph) -> IntersectionReport:
    """Shared cosets of two subgraphs, and a face of c1 carrying exactly them.

    A face (S, Z) of c1 has the vertices tau_{Z u W} base for W subset of S;
    by independence this is H(list restricted to S, tau_Z base).
    """
    common = []
    for A, wa in c1.vertices.items():
        for B, wb in c2.vertices.items():
            if same_coset(wa, wb) is Verdict.TRUE:
                common.append((A, B))
    if not common:
        return IntersectionReport(common, None, note="empty intersection")
    target = {A for A, _ in common}
    m = c1.sorted_list.m
    for S in _subsets(m):
        rest = [i for i in range(1, m + 1) if i not in S]
        for r in range(len(rest) + 1):
            for Z in map(frozenset, itertools.combinations(rest, r)):
                face = {Z | W for W in _subsets(m) if W <= S}
                if face == target:
                    sub = SortedList(c1.sorted_list.n, tuple(c1.sorted_list.words[i - 1] for i in sorted(S)))
                    note = "" if sub.is_proper() else "realizing sublist is not proper"
                    return IntersectionReport(common, True, (S, Z), note)
    return IntersectionReport(common, False, note="no face of the first subgraph carries the intersection")
