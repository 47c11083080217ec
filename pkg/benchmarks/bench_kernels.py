"""Benchmark the compiled MPFR kernels against the pure-Python fallback.

Times the two hot loops (forward recurrence, orthogonality accumulation)
on both implementations and reports the speedup.  The recurrence results
are also cross-checked bit for bit.

    python benchmarks/bench_kernels.py [--prec 256] [--n 2000] [--kmax 100000]
"""

import argparse
import json
import time

import mpmath
from mpmath import mp

from tcasym import _accel, _purekernels


def time_call(fn, *args, repeat=3):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--prec", type=int, default=256)
    ap.add_argument("--n", type=int, default=2000, help="recurrence degree")
    ap.add_argument("--kmax", type=int, default=100000, help="orthogonality nodes")
    ap.add_argument("--deg", type=int, default=4, help="orthogonality max degree")
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()

    if not _accel.HAVE_COMPILED:
        print("compiled kernels not available; nothing to compare "
              "(build the extension or unset TCASYM_PURE)")
        return 1

    with mp.workprec(args.prec):
        x = mpmath.mpc(1, 2) / mpmath.sqrt(mpmath.mpf(args.n))
        alpha = mpmath.mpf(1)
        lf = mpmath.mpf(0)

    results = {}

    t_pure, r_pure = time_call(_purekernels.recurrence_eval, x, alpha, args.n, args.prec)
    t_comp, r_comp = time_call(_accel.recurrence_eval, x, alpha, args.n, args.prec)
    assert r_pure == r_comp, "recurrence kernels disagree"
    results["recurrence"] = {
        "n": args.n, "prec": args.prec,
        "pure_s": t_pure, "compiled_s": t_comp, "speedup": t_pure / t_comp,
        "bit_identical": True,
    }

    t_pure_o, o_pure = time_call(
        _purekernels.ortho_accumulate, alpha, args.deg, 0, args.kmax + 1, lf, args.prec, repeat=1)
    t_comp_o, o_comp = time_call(
        _accel.ortho_accumulate, alpha, args.deg, 0, args.kmax + 1, lf, args.prec, repeat=1)
    with mp.workprec(args.prec):
        worst = max(abs(o_pure[0][k] - o_comp[0][k]) / max(abs(o_pure[0][k]), mpmath.mpf(1e-60))
                    for k in o_pure[0])
    results["ortho"] = {
        "k_max": args.kmax, "deg": args.deg, "prec": args.prec,
        "pure_s": t_pure_o, "compiled_s": t_comp_o, "speedup": t_pure_o / t_comp_o,
        "worst_rel_diff": float(worst),
    }

    if args.json:
        print(json.dumps(results, indent=2))
    else:
        r = results["recurrence"]
        print(f"recurrence  n={r['n']:<7d} prec={r['prec']:<4d} "
              f"pure {r['pure_s'] * 1e3:8.2f} ms   compiled {r['compiled_s'] * 1e3:8.2f} ms   "
              f"speedup {r['speedup']:5.1f}x   bit-identical: yes")
        o = results["ortho"]
        print(f"ortho       k={o['k_max']:<7d} prec={o['prec']:<4d} "
              f"pure {o['pure_s']:8.2f} s    compiled {o['compiled_s']:8.2f} s    "
              f"speedup {o['speedup']:5.1f}x   worst rel diff: {o['worst_rel_diff']:.2e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
