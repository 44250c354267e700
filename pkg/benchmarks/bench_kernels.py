"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--sizes 250 500 1000 2000] [--repeat 3]

Both backends are imported directly, so the comparison does not depend on
PROPBO_PURE_PYTHON. Each row also reports the max-abs difference between the
two outputs.
"""
import argparse
import time

import numpy as np

from propbo import _kernels_py as pure

try:
    from propbo import _kernels as compiled
except ImportError:  # extension not built
    compiled = None


def best_of(fn, repeat):
    best, out = np.inf, None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def cases(n, rng):
    X = rng.uniform(-2, 2, size=(n, 2))
    W = pure.rbf(X, X, 1.0)
    d = W.sum(axis=1)
    M = W / d[:, None]
    S = W / np.sqrt(np.outer(d, d))
    C0 = np.zeros((n, 2))
    n_l = max(2, n // 50)
    C0[np.arange(n_l), rng.integers(0, 2, n_l)] = 1.0
    C0[0] = [0.0, 1.0]
    rows = rng.dirichlet([1.0, 1.0], size=n)
    Q = rng.uniform(-2, 2, size=(1000, 2))
    return {
        "rbf": lambda k: k.rbf(X, X, 1.0),
        "lp_iterate(200 it)": lambda k: k.lp_iterate(M, C0, n_l, 200, 0.0)[0],
        "ls_iterate(200 it)": lambda k: k.ls_iterate(S, C0, 0.2, 200, 0.0)[0],
        "class1_value_grad": lambda k: k.class1_value_grad(Q, X, rows, 1.0, True)[1],
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[250, 500, 1000, 2000])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    if compiled is None:
        raise SystemExit("compiled extension not available; build with `pip install -e .`")
    rng = np.random.default_rng(0)
    print(f"{'kernel':20s} {'n':>6s} {'python s':>10s} {'compiled s':>11s} {'speedup':>8s} {'max diff':>9s}")
    for n in args.sizes:
        for name, fn in cases(n, rng).items():
            t_py, a = best_of(lambda: fn(pure), args.repeat)
            t_c, b = best_of(lambda: fn(compiled), args.repeat)
            print(f"{name:20s} {n:6d} {t_py:10.4f} {t_c:11.4f} {t_py / t_c:7.2f}x {np.abs(a - b).max():9.1e}")


if __name__ == "__main__":
    main()
