"""Locate the crossing y_0 and the comparison values at n = 39e29 for N = 3."""

import argparse

import mpmath

from cipolla.primes import r3_window


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--digits", type=int, default=60)
    args = ap.parse_args()
    rep = r3_window(args.digits)
    print(f"y0 in [{mpmath.nstr(rep.y0_lo, 15)}, {mpmath.nstr(rep.y0_hi, 15)}]")
    print(f"threshold n    = {mpmath.nstr(rep.threshold, 20)}")
    print(f"s_3(n)         = {mpmath.nstr(rep.s3, 50)}")
    print(f"ali(n)         = {mpmath.nstr(rep.ali_n, 50)}")
    print(f"upper estimate = {mpmath.nstr(rep.upper, 50)}")
    print(f"upper < s_3    : {rep.upper_below_s3}")


if __name__ == "__main__":
    main()
