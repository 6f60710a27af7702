#!/usr/bin/env python3
"""Time the compiled quadratic kernel against the numpy fallback.

Runs both backends on identical buffers and prints ns per call plus the
speedup.  quad_step dominates solver runtime; the other two kernels are
timed because the CLI calls them on every run.  The step uses a tiny
alpha so the iterate does not drift over millions of timing calls.

Usage: python benchmarks/bench_kernels.py [--sizes 100,1000,10000]
"""

import argparse
import time

import numpy as np

from qtgrad import _quadkernel_py

try:
    from qtgrad import _quadkernel
except ImportError:
    _quadkernel = None


def make_buffers(n, seed):
    rng = np.random.default_rng(seed)
    v = rng.uniform(1.0, 1e4, n)
    xstar = rng.standard_normal(n)
    x = xstar + rng.standard_normal(n)
    g_old = np.empty(n)
    g_new = np.empty(n)
    _quadkernel_py.quad_gradient(v, xstar, x, 2.0, g_old)
    return v, xstar, x, g_old, g_new


def calls(mod, b):
    v, xstar, x, g_old, g_new = b
    return [
        ("quad_step", mod.quad_step, (v, xstar, x, g_old, g_new, 1e-30, 2.0)),
        ("quad_gradient", mod.quad_gradient, (v, xstar, x, 2.0, g_new)),
        ("quad_value", mod.quad_value, (v, xstar, x, 1.0)),
    ]


def time_call(fn, args, budget):
    """Best-of-5 ns per call; each measurement fills ~budget/25 seconds."""
    fn(*args)
    number = 1
    while True:
        t0 = time.perf_counter()
        for _ in range(number):
            fn(*args)
        dt = time.perf_counter() - t0
        if dt >= budget / 25.0:
            break
        number *= 4
    best = dt / number
    for _ in range(4):
        t0 = time.perf_counter()
        for _ in range(number):
            fn(*args)
        dt = time.perf_counter() - t0
        best = min(best, dt / number)
    return best * 1e9


def check_agreement(n, seed):
    """Both backends must produce the same numbers on the same inputs."""
    ref = make_buffers(n, seed)
    got = make_buffers(n, seed)
    r_py = _quadkernel_py.quad_step(*ref, 0.25, 2.0)
    r_cy = _quadkernel.quad_step(*got, 0.25, 2.0)
    for a, b in zip(r_py, r_cy):
        if abs(a - b) > 1e-12 * (1.0 + abs(a)):
            raise SystemExit(f"backend mismatch in quad_step: {a} vs {b}")
    if not np.allclose(ref[4], got[4], rtol=1e-12, atol=0.0):
        raise SystemExit("backend mismatch in refreshed gradient")
    a = _quadkernel_py.quad_value(ref[0], ref[1], ref[2], 0.5)
    b = _quadkernel.quad_value(got[0], got[1], got[2], 0.5)
    if abs(a - b) > 1e-12 * (1.0 + abs(a)):
        raise SystemExit(f"backend mismatch in quad_value: {a} vs {b}")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="100,1000,10000",
                    help="comma separated problem sizes")
    ap.add_argument("--budget", type=float, default=0.2,
                    help="seconds of timing per kernel and backend")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    sizes = [int(s) for s in args.sizes.split(",") if s]

    if _quadkernel is None:
        print("compiled extension not built; timing the numpy fallback only")
    else:
        check_agreement(sizes[0], args.seed)
        print("backend check: cython and numpy agree on quad_step/quad_value")

    for n in sizes:
        print(f"\nn={n}")
        b = make_buffers(n, args.seed)
        numpy_ns = {name: time_call(fn, fargs, args.budget)
                    for name, fn, fargs in calls(_quadkernel_py, b)}
        if _quadkernel is None:
            for name, ns in numpy_ns.items():
                print(f"  {name:<14} numpy {ns:>10.0f} ns")
            continue
        for name, fn, fargs in calls(_quadkernel, b):
            cy = time_call(fn, fargs, args.budget)
            py = numpy_ns[name]
            print(f"  {name:<14} cython {cy:>10.0f} ns   "
                  f"numpy {py:>10.0f} ns   speedup {py / cy:>5.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
