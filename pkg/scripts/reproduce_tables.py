"""Print the c_N, d_N, x_N table, the z_N / z'_N column and the M_n values."""

import argparse

import mpmath
from mpmath import mp

from cipolla.constants import TABULATED_N, m_max, x_const, z_const


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--digits", type=int, default=30)
    ap.add_argument("--skip-z", action="store_true", help="skip the slower z_N scan")
    args = ap.parse_args()
    mp.dps = args.digits
    print(f"{'N':>3} {'c_N':>10} {'d_N':>10} {'x_N':>10}")
    for N in TABULATED_N:
        r = x_const(N, args.digits)
        print(f"{N:>3} {float(r.c_N):10.5f} {float(r.d_N):10.5f} {float(r.x_N):10.5f}")
    print()
    for n in range(2, 11):
        print(f"M_{n} = {mpmath.nstr(m_max(n, args.digits), 10)}")
    if args.skip_z:
        return
    print()
    print(f"{'N':>3} {'z_N':>12} {'z_prime':>10}")
    for N in range(2, 12):
        z = z_const(N, args.digits)
        print(f"{N:>3} {mpmath.nstr(z.z_N, 8):>12} {mpmath.nstr(z.z_prime, 6):>10}")


if __name__ == "__main__":
    main()
