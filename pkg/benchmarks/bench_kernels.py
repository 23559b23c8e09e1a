"""Compare the compiled and pure-Python kernel backends on representative workloads.

Usage: python benchmarks/bench_kernels.py [--repeat N] [--end-to-end]
"""
import argparse
import os
import subprocess
import sys
import time

from ancestor import _kernels_py
from ancestor.generators import make_W_alpha, make_virasoro
from ancestor.modeops import WindowSpec
from ancestor.cutjoin import tau_alpha

try:
    from ancestor import _kernels
except ImportError:
    _kernels = None


def workloads():
    W = WindowSpec(max_ann=27)
    w1 = make_W_alpha(1, 1, W)
    grouped = w1._grouped()[0]
    tau = tau_alpha(1, 9)
    p8 = tau.coeffs[8].terms
    La = make_virasoro(1, 3, WindowSpec(max_ann=40)).terms
    Lb = make_virasoro(1, -2, WindowSpec(max_ann=40)).terms
    wt = w1.terms
    return {
        "poly_apply (W_1 on tau_1^(8))": lambda k: k.poly_apply(grouped, p8),
        "poly_mul (tau^(4) * tau^(5))": lambda k: k.poly_mul(tau.coeffs[4].terms, tau.coeffs[5].terms),
        "op_commutator ([L_3, L_-2])": lambda k: k.op_commutator(La, Lb, 40),
        "op_product (W_1 * W_1, window 27)": lambda k: k.op_product(wt, wt, 27),
    }


def bench(fn, kernel, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn(kernel)
        best = min(best, time.perf_counter() - t)
    return best


def end_to_end(order):
    """Wall time of ``compute --solver all`` on the mixed2 preset under each backend."""
    cmd = [sys.executable, "-m", "ancestor", "compute", "--config", "mixed2", "--solver", "all",
           "--order", str(order)]
    outs = {}
    for backend in ("python", "cython"):
        env = dict(os.environ, ANCESTOR_BACKEND=backend)
        t = time.perf_counter()
        r = subprocess.run(cmd, capture_output=True, text=True, env=env, check=True)
        outs[backend] = (time.perf_counter() - t, r.stdout)
    same = outs["python"][1].replace('"backend": "python"', "") == outs["cython"][1].replace('"backend": "cython"', "")
    tp, tc = outs["python"][0], outs["cython"][0]
    print(f"{'mixed2, three solvers, K=' + str(order):40s} {tp:11.4f} {tc:11.4f} {tp / tc:7.2f}x"
          f"{'' if same else '  OUTPUTS DIFFER'}")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--end-to-end", action="store_true", help="also time the full solvers in subprocesses")
    ap.add_argument("--order", type=int, default=5)
    args = ap.parse_args()
    print(f"{'workload':40s} {'python [s]':>11s} {'cython [s]':>11s} {'speedup':>8s}")
    for name, fn in workloads().items():
        tp = bench(fn, _kernels_py, args.repeat)
        if _kernels is None:
            print(f"{name:40s} {tp:11.4f} {'n/a':>11s} {'n/a':>8s}")
            continue
        assert fn(_kernels_py) == fn(_kernels), f"backends disagree on {name}"
        tc = bench(fn, _kernels, args.repeat)
        print(f"{name:40s} {tp:11.4f} {tc:11.4f} {tp / tc:7.2f}x")
    if args.end_to_end and _kernels is not None:
        end_to_end(args.order)


if __name__ == "__main__":
    main()
