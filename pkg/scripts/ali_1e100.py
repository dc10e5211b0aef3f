"""Truncate the expansion of ali(10^100) at its smallest term and compare with ali."""

import argparse

import mpmath
from mpmath import mp, mpf

from cipolla.numerics import ali, auto_expand


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--digits", type=int, default=140)
    ap.add_argument("--exponent", type=int, default=100)
    args = ap.parse_args()
    with mp.workdps(args.digits + 10):
        u = mpf(10) ** args.exponent
        r = auto_expand(u, args.digits)
        a = ali(u, args.digits)
        signs = [n for n, t in enumerate(r.terms, start=1) if t > 0]
        print(f"N_used          = {r.N_used}")
        print(f"positive terms  = {signs[:10]}")
        print(f"ali(u)          = {mpmath.nstr(a, 40)}")
        print(f"integer digits  = {len(str(int(a)))}")
        print(f"|ali - f_N|     = {mpmath.nstr(abs(a - r.value), 12)}")
        print(f"last-term size  = {mpmath.nstr(r.bound.radius, 12)}")


if __name__ == "__main__":
    main()
