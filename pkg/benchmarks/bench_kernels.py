"""Compare the compiled and numpy batch kernels.

    python3 benchmarks/bench_kernels.py [--sizes 1000 10000 100000] [--repeat 5]
"""
import argparse
import timeit

import numpy as np

from chfn import _kernels_py
from chfn.sampling import Sampler

try:
    from chfn import _kernels as compiled
except ImportError:  # extension not built
    compiled = None


def null_batch(n, k, seed=0):
    s = Sampler(seed=seed)
    flat = np.array([s.null_vector() for _ in range(n * k)])
    return np.ascontiguousarray(flat.reshape(n, k, 4))


def cases(n):
    q4, q3 = null_batch(n, 4), null_batch(n, 3, seed=1)
    z, w = np.ascontiguousarray(q4[:, 0]), np.ascontiguousarray(q4[:, 1])
    return {
        "herm_form_batch": lambda impl: impl.herm_form_batch(z, w),
        "cross_ratio_triples": lambda impl: impl.cross_ratio_triples(q4),
        "cartan_batch": lambda impl: impl.cartan_batch(q3),
    }


def best_time(fn, repeat):
    number = 5
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=[1_000, 10_000, 100_000])
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args()
    if compiled is None:
        print("compiled extension not available; timing the numpy kernels only")
    print(f"{'kernel':<22}{'n':>9}{'numpy ms':>12}{'compiled ms':>14}{'speedup':>10}")
    for n in args.sizes:
        for name, run in cases(n).items():
            t_py = best_time(lambda: run(_kernels_py), args.repeat)
            if compiled is None:
                print(f"{name:<22}{n:>9}{1e3 * t_py:>12.3f}")
                continue
            t_c = best_time(lambda: run(compiled), args.repeat)
            assert np.allclose(run(compiled), run(_kernels_py), rtol=1e-12, atol=1e-12)
            print(f"{name:<22}{n:>9}{1e3 * t_py:>12.3f}{1e3 * t_c:>14.3f}{t_py / t_c:>10.2f}")


if __name__ == "__main__":
    main()
