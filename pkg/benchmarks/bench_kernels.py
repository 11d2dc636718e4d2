"""Compare the numba and numpy series kernels on a realistic workload.

    python3 benchmarks/bench_kernels.py [--n 20000] [--repeat 5]

Inputs mimic a det S scan: orders 0..40, mu2 on a ring of complex values,
radii in (0, 1]. Both backends are checked to agree before timing.
"""
import argparse
import timeit

import numpy as np

from evenres import kernels


def workload(n, seed=0):
    rng = np.random.default_rng(seed)
    nu = rng.integers(0, 41, n)
    r = rng.uniform(0.05, 1.0, n)
    mu = np.exp(rng.uniform(-1, 2, n) + 1j * rng.uniform(-np.pi, np.pi, n))
    x = mu * mu * r * r / 4
    # the series region used by the radial solver
    keep = np.abs(x) <= np.maximum(4.0, nu + 1.0)
    return nu[keep], x[keep], r[keep]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    nu, x, r = workload(args.n)
    print(f"{nu.size} evaluations per call")
    if not kernels.HAVE_NUMBA:
        print("numba not available; numpy only")
    backends = {"numpy": (kernels.regular_series_numpy, kernels.second_series_numpy)}
    if kernels.HAVE_NUMBA:
        backends["numba"] = (kernels.regular_series_numba, kernels.second_series_numba)
        # warm up the JIT and check agreement
        a = kernels.regular_series_numba(nu, x, r)[0]
        b = kernels.regular_series_numpy(nu, x, r)[0]
        print(f"max rel. difference (regular): {np.max(np.abs(a - b) / np.abs(b)):.2e}")
        kernels.second_series_numba(nu, x, r)
    for name, (reg, sec) in backends.items():
        t_reg = min(timeit.repeat(lambda: reg(nu, x, r), number=1, repeat=args.repeat))
        t_sec = min(timeit.repeat(lambda: sec(nu, x, r), number=1, repeat=args.repeat))
        print(f"{name:6s} regular {t_reg * 1e3:8.2f} ms   second {t_sec * 1e3:8.2f} ms")


if __name__ == "__main__":
    main()
