"""Compare the compiled and numpy kernel backends.

Times each kernel and a full fixed-iteration solve at several sizes, and
checks that both backends give bitwise-identical iterates.

    python benchmarks/bench_kernels.py [--sizes 10 50 200] [--repeat 5]
"""
import argparse
import contextlib
import timeit

import numpy as np

from msmacof import SolverConfig, run
from msmacof import kernels
from msmacof.linalg import DissimilarityData


@contextlib.contextmanager
def backend(name):
    mod = kernels.load_backend(name)
    saved = {k: getattr(kernels, k) for k in ("distance_stats", "b_matrix", "hessian_blocks", "BACKEND")}
    kernels.distance_stats = mod.distance_stats
    kernels.b_matrix = mod.b_matrix
    kernels.hessian_blocks = mod.hessian_blocks
    kernels.BACKEND = name
    try:
        yield
    finally:
        for k, v in saved.items():
            setattr(kernels, k, v)


def instance(n, p, seed=0):
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((n, p))
    d = np.sqrt(((z[:, None] - z[None]) ** 2).sum(-1))
    e = np.triu(rng.uniform(0.8, 1.2, (n, n)), 1)
    return DissimilarityData.from_delta(d * (e + e.T)), rng.standard_normal((n, p))


def best(stmt, repeat, number):
    return min(timeit.repeat(stmt, repeat=repeat, number=number)) / number


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[10, 50, 200])
    ap.add_argument("--p", type=int, default=2)
    ap.add_argument("--iterations", type=int, default=100)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    names = kernels.available_backends()
    print(f"backends: {', '.join(names)}")
    if "cython" not in names:
        print("compiled extension not built; only the numpy backend is timed")
    header = f"{'n':>5} {'kernel':<16}" + "".join(f"{b:>14}" for b in names)
    if len(names) == 2:
        header += f"{'speedup':>10}"
    print(header)

    for n in args.sizes:
        data, x = instance(n, args.p)
        wd = data.w * data.delta
        d = kernels.load_backend("python").distance_stats(x, data.w, data.delta)[0]
        config = SolverConfig(p=args.p, eps=1e-300, itmax=args.iterations, init=x)
        number = max(1, 2000 // n)
        rows = {
            "distance_stats": lambda m: best(lambda: m.distance_stats(x, data.w, data.delta), args.repeat, number),
            "b_matrix": lambda m: best(lambda: m.b_matrix(wd, d), args.repeat, number),
            "hessian_blocks": lambda m: best(lambda: m.hessian_blocks(x, wd, d), args.repeat, max(1, number // 10)),
        }
        for label, fn in rows.items():
            times = [fn(kernels.load_backend(b)) for b in names]
            print(_row(n, label, times))

        times, finals = [], []
        for b in names:
            with backend(b):
                times.append(best(lambda: run(data, config), args.repeat, 1))
                finals.append(run(data, config).x)
        print(_row(n, f"run x{args.iterations}", times))
        if len(finals) == 2 and not np.array_equal(*finals):
            print(f"{'':>5} warning: backends disagree, max dev {np.max(np.abs(finals[0] - finals[1])):.2e}")


def _row(n, label, times):
    s = f"{n:>5} {label:<16}" + "".join(f"{t * 1e3:>11.3f} ms" for t in times)
    if len(times) == 2:
        s += f"{times[1] / times[0]:>9.1f}x"
    return s


if __name__ == "__main__":
    main()
