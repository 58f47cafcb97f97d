"""Compare the numba and numpy paths of the integer kernels.

    python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import timeit

from ia3 import _kernels
from ia3.alignment import specialized_Ar


def bench(label, fast, slow, repeat):
    fast()  # warm the JIT
    t_fast = min(timeit.repeat(fast, number=1, repeat=repeat))
    t_slow = min(timeit.repeat(slow, number=1, repeat=repeat))
    print(f"{label:<40} numba {t_fast * 1e3:9.2f} ms   numpy {t_slow * 1e3:9.2f} ms   x{t_slow / t_fast:6.1f}")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not _kernels.HAS_NUMBA:
        print("numba unavailable or disabled; nothing to compare")
        return

    for M, N, r in [(6, 7, 6), (12, 13, 12), (20, 23, 10)]:
        a = specialized_Ar(M, N, r)
        bench(
            f"rank mod p, A_{r} for M={M} N={N} {a.shape}",
            lambda a=a: _kernels.rank_mod_p(a),
            lambda a=a: _kernels.rank_mod_p_numpy(a),
            args.repeat,
        )

    def rank_grid(f):
        for M in range(1, 13):
            for N in range(M, 13):
                for r in range(7):
                    f(specialized_Ar(M, N, r))

    bench("rank mod p, full M<=N<=12, r<=6 grid (546 matrices)",
          lambda: rank_grid(_kernels.rank_mod_p), lambda: rank_grid(_kernels.rank_mod_p_numpy), 1)

    for d, size in [(4, 18), (12, 60)]:
        bench(
            f"feasibility grid d={d}, {size}x{size}, 10x horizon",
            lambda: _kernels.feasibility_grid(d, size, size, 10),
            lambda: _kernels.feasibility_grid_numpy(d, size, size, 10),
            args.repeat,
        )


if __name__ == "__main__":
    main()
