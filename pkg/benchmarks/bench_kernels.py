"""Time the numba kernels against their numpy / pure-Python fallbacks.

    python3 benchmarks/bench_kernels.py            # all kernels, m = 24 scan
    python3 benchmarks/bench_kernels.py --m 20 --skip-slow

Each line reports the best of ``--repeat`` runs and checks that both
flavours return the same result.
"""

import argparse
import time

import numpy as np

from cyclicmub import kernels
from cyclicmub.cyclotomic import build_u
from cyclicmub.poly import factor_squarefree_irreducible, min_poly
from cyclicmub.search import ansatz_b, known_corner


def best_of(fn, repeat):
    out, best = None, float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return out, best


def report(name, fast, slow, same):
    ratio = slow / fast if fast > 0 else float("inf")
    flag = "ok" if same else "MISMATCH"
    print(f"{name:<28} numba {fast * 1e3:10.2f} ms   fallback {slow * 1e3:10.2f} ms   x{ratio:8.1f}  {flag}")


def bench_scan(m, repeat, halved):
    b = ansatz_b(m, known_corner(m))
    mu = min_poly(b)
    # same inputs as check_conditions: distinct irreducible factors of the minimal polynomial
    factors = factor_squarefree_irreducible(mu)
    k_max = 1 << (m - 1)
    fast_fn = kernels.fib_scan_halved_numba if halved else kernels.fib_scan_numba
    slow_fn = kernels.fib_scan_halved_python if halved else kernels.fib_scan_python
    fast_fn(0b111, 2, 4)  # compile outside the timing

    def run(fn):
        return [int(fn(p.value, int(p.degree), k_max)) for p in factors]

    r_fast, t_fast = best_of(lambda: run(fast_fn), repeat)
    r_slow, t_slow = best_of(lambda: run(slow_fn), 1)
    tag = "halved" if halved else "full"
    report(f"fib scan m={m} ({tag})", t_fast, t_slow, r_fast == r_slow)


def bench_bitmat(n, repeat):
    rng = np.random.default_rng(0)
    words = (n + 63) // 64
    a = rng.integers(0, 2**63, size=(n, words), dtype=np.uint64)
    b = rng.integers(0, 2**63, size=(n, words), dtype=np.uint64)
    kernels.bitmat_mul_numba(a[:2], b, n)
    r_fast, t_fast = best_of(lambda: kernels.bitmat_mul_numba(a, b, n), repeat)
    r_slow, t_slow = best_of(lambda: kernels.bitmat_mul_numpy(a, b, n), repeat)
    report(f"GF(2) matmul n={n}", t_fast, t_slow, np.array_equal(r_fast, r_slow))


def bench_cyc8(m, repeat):
    u = build_u(ansatz_b(m, known_corner(m)))
    e = u.entries
    kernels.cyc8_matmul_numba(e[:, :2, :2].copy(), e[:, :2, :2].copy())
    r_fast, t_fast = best_of(lambda: kernels.cyc8_matmul_numba(e, e), repeat)
    r_slow, t_slow = best_of(lambda: kernels.cyc8_matmul_numpy(e, e), repeat)
    report(f"Z[zeta8] matmul d={u.dim}", t_fast, t_slow, np.array_equal(r_fast, r_slow))


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--m", type=int, default=24, help="size for the residue scan (4..24)")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--skip-slow", action="store_true", help="skip the pure-Python scan")
    args = ap.parse_args()
    if not kernels.USE_NUMBA:
        raise SystemExit("numba is disabled (CYCLICMUB_DISABLE_NUMBA); nothing to compare")

    if not args.skip_slow:
        bench_scan(args.m, args.repeat, halved=False)
        bench_scan(args.m, args.repeat, halved=True)
    bench_scan(12, args.repeat, halved=False)
    bench_bitmat(256, args.repeat)
    bench_bitmat(1024, args.repeat)
    bench_cyc8(6, args.repeat)
    bench_cyc8(8, args.repeat)


if __name__ == "__main__":
    main()
