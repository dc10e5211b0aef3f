"""Instrumented op counts and wall-clock times of the triangle algorithm."""

import argparse
import time

from cipolla.polyengine import op_count_formula, op_count_model


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--N", type=int, nargs="+", default=[50, 100, 200, 400, 800])
    args = ap.parse_args()
    print(f"{'N':>5} {'ops':>10} {'formula':>10} {'seconds':>9} {'ratio':>6}")
    prev = None
    for N in args.N:
        t0 = time.perf_counter()
        ops = op_count_model(N)
        dt = time.perf_counter() - t0
        ratio = f"{dt / prev:6.2f}" if prev else "     -"
        print(f"{N:>5} {ops:>10} {op_count_formula(N):>10} {dt:9.4f} {ratio}")
        prev = dt


if __name__ == "__main__":
    main()
