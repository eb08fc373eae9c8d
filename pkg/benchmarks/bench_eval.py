"""Word evaluation: numba kernels against the plain-Python fallback.

    python3 benchmarks/bench_eval.py            # both modes, side by side
    python3 benchmarks/bench_eval.py --single   # current mode only (JSON line)

The pure run is a subprocess with LMWB_DISABLE_NUMBA=1, since the flag is read
when the kernels are imported.
"""

import argparse
import json
import os
import random
import subprocess
import sys
import time

import numpy as np


def workload(n, words, length, points, seed):
    from lmwb.machines import points_sample
    from lmwb.words import Letter

    rng = random.Random(seed)
    ws = []
    for _ in range(words):
        letters = []
        for _ in range(length):
            addr = tuple(rng.randrange(n) for _ in range(rng.randint(0, 3)))
            sign = rng.choice((1, -1))
            if rng.random() < 0.5:
                letters.append(Letter.x(rng.randrange(n - 1), addr, sign))
            else:
                letters.append(Letter.y(addr, sign))
        ws.append(tuple(letters))
    pts = points_sample(np.random.default_rng(seed), n, points)
    return ws, pts


def single(args):
    from lmwb import _kernels
    from lmwb.machines import moved_mask

    ws, pts = workload(args.n, args.words, args.length, args.points, args.seed)
    moved_mask(ws[0], args.n, pts[:4])  # compile outside the timed region
    t = time.perf_counter()
    total = 0
    for w in ws:
        total += int(moved_mask(w, args.n, pts).sum())
    dt = time.perf_counter() - t
    return {"numba": _kernels.NUMBA, "seconds": dt, "moved": total,
            "evals_per_s": args.words * args.points / dt}


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("-n", type=int, default=3)
    p.add_argument("--words", type=int, default=40)
    p.add_argument("--length", type=int, default=12)
    p.add_argument("--points", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--single", action="store_true")
    args = p.parse_args()
    if args.single:
        print(json.dumps(single(args)))
        return
    runs = {}
    for label, flag in (("numba", "0"), ("pure", "1")):
        env = dict(os.environ, LMWB_DISABLE_NUMBA=flag)
        out = subprocess.run([sys.executable, __file__, "--single", *sys.argv[1:]],
                             env=env, capture_output=True, text=True, check=True)
        runs[label] = json.loads(out.stdout)
    for label, r in runs.items():
        print(f"{label:6s} numba={r['numba']!s:5s} {r['seconds']:8.3f} s  {r['evals_per_s']:12.0f} evals/s")
    if runs["numba"]["moved"] != runs["pure"]["moved"]:
        print("MISMATCH: the two modes disagree")
        sys.exit(1)
    print(f"speedup {runs['pure']['seconds'] / runs['numba']['seconds']:.1f}x, results agree")


if __name__ == "__main__":
    main()
