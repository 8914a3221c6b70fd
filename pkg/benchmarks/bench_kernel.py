"""Compare the pure and compiled kernels on the hot operations.

Usage: python3 benchmarks/bench_kernel.py [--quick]

Micro rows time the kernel functions head to head in one process; the final
row times a full orbit-invariant construction (degree 120, icosahedral) in
two subprocesses, one per kernel, so the dispatcher does the selecting.
--quick skips that last row.
"""

import argparse
import copy
import random
import subprocess
import sys
import time
import os

from equimap._kernel import _pykernel as pk

try:
    from equimap._kernel import _cykernel as ck
except ImportError:
    ck = None

from equimap.groups import symmetric_table
from equimap.scalars import get_context


def raw(rng, ctx, span=9):
    nums = [rng.randint(-span, span) for _ in range(ctx.phi)]
    return pk.c_norm(nums, rng.randint(1, 12))


def best_of(fn, repeats=3):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_c_mul(kernel):
    ctx = get_context(12)
    rng = random.Random(0xBE01)
    vals = [raw(rng, ctx) for _ in range(200)]
    def run():
        for i in range(20000):
            kernel.c_mul(vals[i % 200], vals[(i * 7 + 3) % 200], ctx.red, ctx.phi)
    return run


def bench_c_add(kernel):
    ctx = get_context(12)
    rng = random.Random(0xBE02)
    vals = [raw(rng, ctx) for _ in range(200)]
    def run():
        for i in range(20000):
            kernel.c_add(vals[i % 200], vals[(i * 11 + 5) % 200])
    return run


def bench_rref(kernel):
    ctx = get_context(5)
    rng = random.Random(0xBE03)
    mats = [
        [[raw(rng, ctx, span=5) for _ in range(16)] for _ in range(12)]
        for _ in range(6)
    ]
    def run():
        for m in mats:
            kernel.rref(copy.deepcopy(m), ctx.red, ctx.phi, ctx.inv)
    return run


def bench_subst_cols(kernel):
    ctx = get_context(5)
    rng = random.Random(0xBE04)
    entries = [raw(rng, ctx, span=3) for _ in range(4)]
    def run():
        for _ in range(5):
            kernel.subst_cols(*entries, 24, ctx.red, ctx.phi)
    return run


def bench_divmod(kernel):
    ctx = get_context(5)
    rng = random.Random(0xBE05)
    p = [raw(rng, ctx) for _ in range(31)]
    q = [raw(rng, ctx) for _ in range(11)] + [ctx.one]
    def run():
        for _ in range(50):
            kernel.poly_divmod_monic(list(p), q, ctx.red, ctx.phi)
    return run


def bench_table_close(kernel):
    t = symmetric_table(5)
    rng = random.Random(0xBE06)
    seeds = [
        (rng.randrange(t.order), rng.randrange(t.order)) for _ in range(60)
    ]
    def run():
        for s in seeds:
            kernel.table_close(t.mul, t.order, s)
    return run


MICRO = [
    ("c_mul x20000 (n=12)", bench_c_mul),
    ("c_add x20000 (n=12)", bench_c_add),
    ("rref 6x(12x16) (n=5)", bench_rref),
    ("subst_cols d=24 x5 (n=5)", bench_subst_cols),
    ("poly_divmod deg30/11 x50", bench_divmod),
    ("table_close S5 x60", bench_table_close),
]

E2E_SNIPPET = """
import time
from equimap import _kernel
from equimap.compress import invariant_form
from equimap.groups import build_group
g = build_group("icosahedral")
t0 = time.perf_counter()
f = invariant_form(g, 120)
dt = time.perf_counter() - t0
assert f is not None
print("%s %.3f" % (_kernel.KERNEL_NAME, dt))
"""


def e2e(force_pure):
    env = dict(os.environ)
    env.pop("EQUIMAP_PURE", None)
    if force_pure:
        env["EQUIMAP_PURE"] = "1"
    out = subprocess.run(
        [sys.executable, "-c", E2E_SNIPPET],
        env=env, capture_output=True, text=True, check=True,
    )
    name, dt = out.stdout.split()
    return name, float(dt)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--quick", action="store_true",
                    help="skip the end-to-end invariant construction row")
    args = ap.parse_args(argv)

    if ck is None:
        print("compiled kernel not built; showing pure timings only")
    width = max(len(n) for n, _ in MICRO) + 2
    print("%-*s %9s %9s %9s" % (width, "operation", "pure", "cython", "speedup"))
    for name, make in MICRO:
        tp = best_of(make(pk))
        if ck is None:
            print("%-*s %8.3fs %9s %9s" % (width, name, tp, "-", "-"))
            continue
        tc = best_of(make(ck))
        print("%-*s %8.3fs %8.3fs %8.2fx" % (width, name, tp, tc, tp / tc))

    if args.quick:
        return
    print()
    pname, tp = e2e(force_pure=True)
    assert pname == "pure"
    if ck is None:
        print("%-*s %8.3fs %9s %9s" % (width, "invariant 2I d=120", tp, "-", "-"))
        return
    cname, tc = e2e(force_pure=False)
    assert cname == "cython"
    print("%-*s %8.3fs %8.3fs %8.2fx"
          % (width, "invariant 2I d=120", tp, tc, tp / tc))


if __name__ == "__main__":
    main()
