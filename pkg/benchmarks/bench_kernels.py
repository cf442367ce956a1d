"""Compare the numba kernels with the plain Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Both paths run in this process; SAPC_NUMBA is flipped between them.  The first
numba call of each kernel pays for compilation, so it is warmed up beforehand.
"""

import argparse
import os
import time

import numpy as np

from sapc import _kernels, corpus
from sapc.reduction import HomologyEngine
from sapc.simplicial import product_complex


def complexes():
    out = {name: corpus.load_unoriented(name) for name in ("s4", "t2_7", "cp2_9")}
    s2 = corpus.load("s2")
    out["s2xs2"] = product_complex(s2, s2).base
    t2 = corpus.load("t2_7")
    out["t2xt2"] = product_complex(t2, t2).base
    return out


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not _kernels.HAVE_NUMBA:
        print("numba is not importable; only the fallback would run")
        return

    rng = np.random.default_rng(0)
    dense = {n: rng.integers(-3, 4, size=(n, n)).astype(np.int64) for n in (60, 150)}
    cases = {f"homology {name}": (lambda X=X: HomologyEngine(X.chain_complex)) for name, X in complexes().items()}
    for n, m in dense.items():
        cases[f"rank mod 3, {n}x{n}"] = lambda m=m: _kernels.rank_mod_p(m, 3)

    os.environ["SAPC_NUMBA"] = "1"
    for fn in cases.values():
        fn()

    print(f"{'case':<24}{'numba s':>10}{'python s':>11}{'speedup':>9}")
    for label, fn in cases.items():
        os.environ["SAPC_NUMBA"] = "1"
        fast = best_of(fn, args.repeat)
        os.environ["SAPC_NUMBA"] = "0"
        slow = best_of(fn, args.repeat)
        print(f"{label:<24}{fast:>10.4f}{slow:>11.4f}{slow / fast:>8.1f}x")
    os.environ.pop("SAPC_NUMBA")


if __name__ == "__main__":
    main()
