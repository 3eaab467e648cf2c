"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5] [--trials 2000]
"""

import argparse
import timeit

import numpy as np

from ellipsoid_descent import _backend, fuzz, linalg


def kernel_cases(n):
    rng = np.random.default_rng(0)
    a = np.ascontiguousarray(fuzz.random_spd(rng, n))
    lower = np.linalg.cholesky(a)
    b = rng.standard_normal(n)
    g = rng.standard_normal((n, n))
    x0 = np.ones(n)
    floor = linalg.PIVOT_DELTA * float(a.diagonal().max())
    return {
        "cholesky": lambda k: k.cholesky(a, floor),
        "cho_solve": lambda k: k.cho_solve(lower, b),
        "power_iteration": lambda k: k.power_iteration_gram(g, x0, linalg.POWER_RTOL, linalg.POWER_MAX_ITER),
        "symmetry_defect": lambda k: k.symmetry_defect(a),
        "p_norm": lambda k: k.p_norm(b, 3.5),
    }


def best_time(fn, number, repeat):
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--number", type=int, default=2000)
    parser.add_argument("--trials", type=int, default=2000, help="campaign trials per check")
    args = parser.parse_args()

    names = _backend.available_backends()
    if "cython" not in names:
        print("compiled backend not built; only the fallback is timed")
    print(f"{'kernel':<18}{'n':>3}" + "".join(f"{b + ' (us)':>16}" for b in names) + f"{'speedup':>10}")
    for n in (2, 8, 32):
        for kernel, fn in kernel_cases(n).items():
            times = {}
            for b in names:
                with _backend.use_backend(b):
                    k = _backend.kernels
                    times[b] = best_time(lambda: fn(k), args.number, args.repeat)
            speed = times["python"] / times["cython"] if "cython" in times else float("nan")
            print(f"{kernel:<18}{n:>3}" + "".join(f"{times[b] * 1e6:>16.2f}" for b in names) + f"{speed:>9.1f}x")

    print(f"\ncampaign throughput, all checks, dim 8, {args.trials} trials each")
    for b in names:
        with _backend.use_backend(b):
            t = best_time(lambda: list(fuzz.run_campaign("all", args.trials, seed=1, dim=8)), 1, 1)
        cases = args.trials * len(fuzz.CHECK_NAMES)
        print(f"  {b:<8} {t:7.2f} s  {cases / t:10.0f} cases/s")


if __name__ == "__main__":
    main()
