"""Compare the compiled and pure-Python kernels on the same inputs.

    python benchmarks/bench_kernels.py [--repeat N]

Table construction is excluded from the timings.
"""

from __future__ import annotations

import argparse
import time
from array import array

from k3tower import _pykernels
from k3tower.fermat import build_extension, quartic_tables

try:
    from k3tower import _kernels
except ImportError:  # extension not built
    _kernels = None


def best_of(fn, repeat: int) -> tuple[float, object]:
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    cases = []
    for p, k in ((3, 2), (7, 2), (3, 4)):
        tab = quartic_tables(build_extension(p, k))
        q = tab.q
        cases.append((
            f"quartic_zero_count q={q}",
            lambda mod, t=tab, q=q: mod.quartic_zero_count(t.pow4, t.add, t.fiber, t.neg, q, 0, q),
        ))
    diag = array("q", [1, 0, 0, 0, 1, 0, 0, 0, 3])
    for ell, n in ((3, 4), (5, 3), (7, 2)):
        cases.append((
            f"kernel_violations l={ell} n={n}",
            lambda mod, ell=ell, n=n: mod.kernel_violations(diag, ell, n, n - 1),
        ))

    print(f"{'kernel':32} {'python (s)':>11} {'cython (s)':>11} {'speedup':>8}")
    for name, run in cases:
        t_py, r_py = best_of(lambda: run(_pykernels), args.repeat)
        if _kernels is None:
            print(f"{name:32} {t_py:11.4f} {'n/a':>11} {'n/a':>8}")
            continue
        t_cy, r_cy = best_of(lambda: run(_kernels), args.repeat)
        assert r_py == r_cy, (name, r_py, r_cy)
        print(f"{name:32} {t_py:11.4f} {t_cy:11.4f} {t_py / t_cy:8.1f}x")


if __name__ == "__main__":
    main()
