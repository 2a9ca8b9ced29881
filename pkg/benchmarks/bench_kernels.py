"""Compare the numba and numpy backends of the dense modular kernels.

    python benchmarks/bench_kernels.py --sizes 64 128 256 --q 7741

Both backends run on the same random matrices and their outputs are checked
for equality before any timing is reported.
"""

import argparse
import time

import numpy as np

from gbcrypt.algebra import kernels


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_rref(n, q, rng, repeat):
    A = rng.integers(0, q, size=(n, n + n // 2), dtype=np.int64)
    R1, p1 = kernels._rref_numpy(A.copy(), q)
    piv = kernels._rref_numba(A.copy() % q, q)
    R2 = A.copy() % q
    kernels._rref_numba(R2, q)
    assert list(p1) == [int(c) for c in piv] and np.array_equal(R1 % q, R2)
    t_np = best_of(lambda: kernels._rref_numpy(A.copy(), q), repeat)
    t_nb = best_of(lambda: kernels._rref_numba(A.copy() % q, q), repeat)
    return t_np, t_nb


def bench_charpoly(n, q, rng, repeat):
    A = rng.integers(0, q, size=(n, n), dtype=np.int64)

    def numba_cp():
        H = kernels._hessenberg_numba(A.copy() % q, q)
        return [int(c) for c in kernels._hess_charpoly_numba(H, q)]

    assert kernels._charpoly_numpy(A.copy(), q) == numba_cp()
    t_np = best_of(lambda: kernels._charpoly_numpy(A.copy(), q), repeat)
    t_nb = best_of(numba_cp, repeat)
    return t_np, t_nb


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[32, 64, 128, 256])
    ap.add_argument("--q", type=int, default=7741)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if kernels.numba is None:
        raise SystemExit("numba is not installed")
    rng = np.random.default_rng(args.seed)
    # warm the JIT so compile time is not billed to the first size
    bench_rref(4, args.q, rng, 1)
    bench_charpoly(4, args.q, rng, 1)

    print(f"{'kernel':<10}{'n':>6}{'numpy s':>12}{'numba s':>12}{'speedup':>10}")
    for name, fn in (("rref", bench_rref), ("charpoly", bench_charpoly)):
        for n in args.sizes:
            t_np, t_nb = fn(n, args.q, rng, args.repeat)
            print(f"{name:<10}{n:>6}{t_np:>12.4f}{t_nb:>12.4f}{t_np / t_nb:>10.1f}")


if __name__ == "__main__":
    main()
