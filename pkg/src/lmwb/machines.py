"""Letters as deterministic sequential machines, and exact word evaluation.

Every letter acts by a machine that reads one digit at a time and emits a
(possibly empty) digit string.  ``COPY`` is the absorbing state in which the
machine passes its input through unchanged.  The y machine follows the
recursive definition of y and y^{-1} directly: it holds at most one pending
digit and switches between the two modes.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import _kernels as K
from .seq import Seq, Word
from .words import GroupWord, Letter

COPY = K.COPY


class EvaluationError(RuntimeError):
    pass


@dataclass(frozen=True)
class Machine:
    """Local transition table; states are ``0..len(trans)-1``."""

    n: int
    start: int
    trans: tuple[tuple[int, ...], ...]
    outs: tuple[tuple[Word, ...], ...]

    def step(self, state: int, digit: int) -> tuple[int, Word]:
        if state == COPY:
            return COPY, (digit,)
        return self.trans[state][digit], self.outs[state][digit]


def _y_table(n: int, base: int) -> tuple[list, list]:
    """States base+0..3: (+, empty), (+, pending 0), (-, empty), (-, pending n-1)."""
    top = n - 1
    P0, P1, M0, M1 = base, base + 1, base + 2, base + 3
    trans, outs = [], []
    for state in range(4):
        row_t, row_o = [], []
        for d in range(n):
            mid = 0 < d < top
            if state == 0:
                t, o = (P1, ()) if d == 0 else (COPY, (top, d)) if mid else (P0, (top, top))
            elif state == 1:
                t, o = (P0, (0,)) if d == 0 else (COPY, (d,)) if mid else (M0, (top, 0))
            elif state == 2:
                t, o = (M0, (0, 0)) if d == 0 else (COPY, (0, d)) if mid else (M1, ())
            else:
                t, o = (P0, (0, top)) if d == 0 else (COPY, (d,)) if mid else (M0, (top,))
            row_t.append(t)
            row_o.append(o)
        trans.append(row_t)
        outs.append(row_o)
    return trans, outs


@lru_cache(maxsize=4096)
def letter_machine(letter: Letter, n: int) -> Machine:
    if letter.is_x:
        return _trie_machine(letter.treepair(n), n)
    alpha = letter.addr
    base = len(alpha)
    trans: list[list[int]] = []
    outs: list[list[Word]] = []
    start_y = base if letter.sign > 0 else base + 2
    for j, a in enumerate(alpha):
        nxt = j + 1 if j + 1 < len(alpha) else start_y
        trans.append([nxt if d == a else COPY for d in range(n)])
        outs.append([(d,) for d in range(n)])
    yt, yo = _y_table(n, base)
    trans += yt
    outs += yo
    return Machine(n, 0 if alpha else start_y, tuple(map(tuple, trans)), tuple(map(tuple, outs)))


def _trie_machine(tp, n: int) -> Machine:
    trans: list[list[int]] = [[COPY] * n]
    outs: list[list[Word]] = [[()] * n]
    for d, r in tp.pairs:
        if not d:
            # identity-like root leaf: a copy machine
            return Machine(n, COPY, ((COPY,) * n,), (((),) * n,))
        node = 0
        for depth, digit in enumerate(d):
            if depth == len(d) - 1:
                trans[node][digit] = COPY
                outs[node][digit] = r
            else:
                if trans[node][digit] == COPY:
                    trans.append([COPY] * n)
                    outs.append([()] * n)
                    trans[node][digit] = len(trans) - 1
                node = trans[node][digit]
    return Machine(n, 0, tuple(map(tuple, trans)), tuple(map(tuple, outs)))


@dataclass(frozen=True)
class Cascade:
    """A compiled word: flat numpy tables for the kernels."""

    n: int
    machines: tuple[Machine, ...]
    trans: np.ndarray
    out_off: np.ndarray
    out_len: np.ndarray
    out_data: np.ndarray
    starts: np.ndarray


def compile_letters(letters: Sequence[Letter], n: int) -> Cascade:
    return _compile(tuple(letters), n)


@lru_cache(maxsize=8192)
def _compile(letters: tuple[Letter, ...], n: int) -> Cascade:
    machines = tuple(letter_machine(l, n) for l in letters)
    total = sum(len(m.trans) for m in machines) or 1
    trans = np.full((total, n), COPY, dtype=np.int64)
    out_off = np.zeros((total, n), dtype=np.int64)
    out_len = np.zeros((total, n), dtype=np.int64)
    data: list[int] = []
    starts = []
    base = 0
    for m in machines:
        starts.append(COPY if m.start == COPY else m.start + base)
        for s, (row_t, row_o) in enumerate(zip(m.trans, m.outs)):
            for d in range(n):
                t = row_t[d]
                trans[base + s, d] = COPY if t == COPY else t + base
                out_off[base + s, d] = len(data)
                out_len[base + s, d] = len(row_o[d])
                data.extend(row_o[d])
        base += len(m.trans)
    out_data = np.array(data or [0], dtype=np.int64)
    return Cascade(n, machines, trans, out_off, out_len, out_data, np.array(starts, dtype=np.int64))


MAX_STEPS = 200_000
MAX_CHECKPOINTS = 4096


def run_cascade(cascade: Cascade, xi: Seq) -> Seq:
    pre = np.array(xi.prefix, dtype=np.int64)
    per = np.array(xi.period, dtype=np.int64)
    cap = 4096
    while True:
        out = np.empty(cap, dtype=np.int64)
        scratch = np.empty(4096, dtype=np.int64)
        status, split, olen = K.run_one(
            cascade.trans, cascade.out_off, cascade.out_len, cascade.out_data, cascade.starts,
            pre, per, MAX_STEPS, MAX_CHECKPOINTS, out, scratch,
        )
        if status == K.OUTPUT_OVERFLOW and cap < 1 << 22:
            cap *= 8
            continue
        if status != K.OK:
            raise EvaluationError(f"evaluation failed with status {status} on {xi}")
        return Seq(tuple(int(v) for v in out[:split]), tuple(int(v) for v in out[split:olen]))


def eval_y(mode: int, xi: Seq, n: int) -> Seq:
    """``y(xi)`` for mode +1, ``y^{-1}(xi)`` for mode -1."""
    return run_cascade(compile_letters((Letter.y((), mode),), n), xi)


def eval_letter(letter: Letter, xi: Seq, n: int) -> Seq:
    return run_cascade(compile_letters((letter,), n), xi)


def evaluate_word(w: GroupWord, xi: Seq) -> Seq:
    if not w.letters:
        return xi
    return run_cascade(compile_letters(w.letters, w.n), xi)


def _pack(points: Sequence[Seq]):
    data, pre_off, pre_len, per_off, per_len = [], [], [], [], []
    for p in points:
        pre_off.append(len(data))
        pre_len.append(len(p.prefix))
        data.extend(p.prefix)
        per_off.append(len(data))
        per_len.append(len(p.period))
        data.extend(p.period)
    arr = lambda v: np.array(v, dtype=np.int64)
    return arr(data or [0]), arr(pre_off), arr(pre_len), arr(per_off), arr(per_len)


def moved_mask(letters: Sequence[Letter], n: int, points: Sequence[Seq]) -> np.ndarray:
    """Boolean mask of the points moved by the word; exact for every point."""
    if not points:
        return np.zeros(0, dtype=bool)
    if not letters:
        return np.zeros(len(points), dtype=bool)
    c = compile_letters(letters, n)
    res = K.moved_batch(c.trans, c.out_off, c.out_len, c.out_data, c.starts, *_pack(points), MAX_STEPS, MAX_CHECKPOINTS, 1 << 16)
    bad = np.nonzero(res < 0)[0]
    for i in bad:
        # rare long outputs: fall back to the single-point path with growing buffers
        res[i] = int(run_cascade(c, points[i]) != points[i])
    return res.astype(bool)


def first_moved(letters: Sequence[Letter], n: int, points: Sequence[Seq]) -> Seq | None:
    mask = moved_mask(letters, n, points)
    hits = np.nonzero(mask)[0]
    return points[int(hits[0])] if hits.size else None


# -- sampling ----------------------------------------------------------------


def structured_points(n: int, max_len: int) -> list[Seq]:
    """All ``s 0^omega`` with ``|s| <= max_len`` (as distinct points)."""
    out = {Seq((), (0,))}
    layer = [()]
    for _ in range(max_len):
        layer = [s + (d,) for s in layer for d in range(n)]
        out.update(Seq(s, (0,)) for s in layer)
    return sorted(out, key=lambda p: (len(p.prefix), p.prefix))


def random_point(rng, n: int, max_prefix: int = 8, max_period: int = 5) -> Seq:
    pre = tuple(int(rng.integers(n)) for _ in range(int(rng.integers(0, max_prefix + 1))))
    per = tuple(int(rng.integers(n)) for _ in range(int(rng.integers(1, max_period + 1))))
    return Seq(pre, per)


def probe_points(n: int, rng, count: int) -> list[Seq]:
    """A fixed mix of structured points and random eventually periodic points."""
    pts = structured_points(n, 3 if n <= 3 else 2)
    pts += [Seq((0,) * k, (n - 1, 0, 0, n - 1)) for k in range(1, 6)]
    pts += [Seq((0,) * k, (0, n - 1)) for k in range(0, 4)]
    while len(pts) < count:
        pts.append(random_point(rng, n))
    return pts[:count]


def points_sample(rng, n: int, count: int, max_prefix: int = 8, max_period: int = 5) -> list[Seq]:
    # one draw for all digits; per-digit draws dominated relation checks
    pre_len = rng.integers(0, max_prefix + 1, count)
    per_len = rng.integers(1, max_period + 1, count)
    digits = rng.integers(n, size=int(pre_len.sum() + per_len.sum())).tolist()
    out, k = [], 0
    for a, b in zip(pre_len.tolist(), per_len.tolist()):
        out.append(Seq(tuple(digits[k:k + a]), tuple(digits[k + a:k + a + b])))
        k += a + b
    return out


def lazy_digits(letters: Iterable[Letter], n: int, digits: Iterable[int]) -> Iterable[int]:
    """Stream the image digit by digit through the step functions (no periods)."""
    machines = [letter_machine(l, n) for l in letters]
    states = [m.start for m in machines]
    for d in digits:
        buf: Word = (d,)
        for k, m in enumerate(machines):
            nxt: list[int] = []
            for c in buf:
                states[k], o = m.step(states[k], c)
                nxt.extend(o)
            buf = tuple(nxt)
        yield from buf
