"""Cascade-transducer kernels.

A group word is compiled (see :mod:`lmwb.machines`) into one flat table of
deterministic sequential machines, one machine per letter.  Each input digit
is pushed through every stage before the next digit is read, so the joint
state is just the vector of stage states.  On an eventually periodic input the
joint state is sampled at the start of every period; the first repeat closes
the output period.

Set ``LMWB_DISABLE_NUMBA=1`` to run the same code as plain Python.
"""

import os

import numpy as np

COPY = -1

OK = 0
STEP_LIMIT = 1
CHECKPOINT_LIMIT = 2
OUTPUT_OVERFLOW = 3
EMPTY_PERIOD = 4

_disabled = os.environ.get("LMWB_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes")

try:
    if _disabled:
        raise ImportError
    from numba import njit

    NUMBA = True
except ImportError:
    NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]):
            return args[0]

        def wrap(f):
            return f

        return wrap


BACKEND = "numba" if NUMBA else "python"


@njit(cache=True)
def run_one(trans, out_off, out_len, out_data, starts, pre, per, max_steps, max_ck, out_buf, scratch):
    """Evaluate the cascade on ``pre . per^omega``.

    Returns ``(status, split, olen)``; the image is
    ``out_buf[:split] . out_buf[split:olen]^omega``.
    """
    k = starts.shape[0]
    cap = out_buf.shape[0]
    state = starts.copy()
    plen = pre.shape[0]
    qlen = per.shape[0]
    ck = np.empty((max_ck, k), dtype=np.int64)
    ck_out = np.empty(max_ck, dtype=np.int64)
    nck = 0
    olen = 0
    half = scratch.shape[0] // 2
    pos = 0
    while True:
        all_copy = True
        for s in range(k):
            if state[s] != COPY:
                all_copy = False
                break
        if all_copy:
            # output continues with the untouched input tail
            for p in range(pos, plen):
                if olen >= cap:
                    return OUTPUT_OVERFLOW, 0, 0
                out_buf[olen] = pre[p]
                olen += 1
            split = olen
            r = 0
            if pos > plen:
                r = (pos - plen) % qlen
            for t in range(qlen):
                if olen >= cap:
                    return OUTPUT_OVERFLOW, 0, 0
                out_buf[olen] = per[(r + t) % qlen]
                olen += 1
            return OK, split, olen
        if pos >= plen and (pos - plen) % qlen == 0:
            for c in range(nck):
                same = True
                for s in range(k):
                    if ck[c, s] != state[s]:
                        same = False
                        break
                if same:
                    if ck_out[c] == olen:
                        return EMPTY_PERIOD, 0, 0
                    return OK, ck_out[c], olen
            if nck >= max_ck:
                return CHECKPOINT_LIMIT, 0, 0
            for s in range(k):
                ck[nck, s] = state[s]
            ck_out[nck] = olen
            nck += 1
        if pos >= max_steps:
            return STEP_LIMIT, 0, 0
        if pos < plen:
            sym = pre[pos]
        else:
            sym = per[(pos - plen) % qlen]
        pos += 1
        # cascade one digit through all stages; scratch halves alternate
        src = 0
        dst = half
        scratch[src] = sym
        count = 1
        for s in range(k):
            ncount = 0
            for t in range(count):
                c = scratch[src + t]
                st = state[s]
                if st == COPY:
                    if ncount >= half:
                        return OUTPUT_OVERFLOW, 0, 0
                    scratch[dst + ncount] = c
                    ncount += 1
                else:
                    o = out_off[st, c]
                    for u in range(out_len[st, c]):
                        if ncount >= half:
                            return OUTPUT_OVERFLOW, 0, 0
                        scratch[dst + ncount] = out_data[o + u]
                        ncount += 1
                    state[s] = trans[st, c]
            count = ncount
            src, dst = dst, src
        for t in range(count):
            if olen >= cap:
                return OUTPUT_OVERFLOW, 0, 0
            out_buf[olen] = scratch[src + t]
            olen += 1


@njit(cache=True)
def primitive_length(buf, lo, hi):
    size = hi - lo
    for d in range(1, size + 1):
        if size % d != 0:
            continue
        good = True
        for t in range(d, size):
            if buf[lo + t] != buf[lo + t - d]:
                good = False
                break
        if good:
            return d
    return size


@njit(cache=True)
def canonicalize(buf, split, olen):
    """Canonical ``(prefix, period)`` arrays of ``buf[:split] . buf[split:olen]^omega``."""
    d = primitive_length(buf, split, olen)
    per = buf[split : split + d].copy()
    p = split
    while p > 0 and buf[p - 1] == per[d - 1]:
        last = per[d - 1]
        for t in range(d - 1, 0, -1):
            per[t] = per[t - 1]
        per[0] = last
        p -= 1
    return buf[:p].copy(), per


@njit(cache=True)
def moved_batch(trans, out_off, out_len, out_data, starts, data, pre_off, pre_len, per_off, per_len, max_steps, max_ck, cap):
    """For each (canonical) input point, 1 if moved, 0 if fixed, -status-1 on failure."""
    npts = pre_off.shape[0]
    res = np.zeros(npts, dtype=np.int64)
    out_buf = np.empty(cap, dtype=np.int64)
    scratch = np.empty(4096, dtype=np.int64)
    for i in range(npts):
        pre = data[pre_off[i] : pre_off[i] + pre_len[i]]
        per = data[per_off[i] : per_off[i] + per_len[i]]
        status, split, olen = run_one(trans, out_off, out_len, out_data, starts, pre, per, max_steps, max_ck, out_buf, scratch)
        if status != OK:
            res[i] = -status - 1
            continue
        cp, cq = canonicalize(out_buf, split, olen)
        same = cp.shape[0] == pre.shape[0] and cq.shape[0] == per.shape[0]
        if same:
            for t in range(cp.shape[0]):
                if cp[t] != pre[t]:
                    same = False
                    break
        if same:
            for t in range(cq.shape[0]):
                if cq[t] != per[t]:
                    same = False
                    break
        res[i] = 0 if same else 1
    return res
