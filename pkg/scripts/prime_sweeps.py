"""Run the prime-index sweeps: tdistance, classical bounds and the Schoenfeld check."""

import argparse

from cipolla.primes import check_classical, check_schoenfeld, check_tdistance


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--to", type=int, default=10**6)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()
    small = check_tdistance(1, 385)
    print(f"tdistance [1, 385] violations: {small.violations}")
    for rep in (check_tdistance(11, args.to, jobs=args.jobs), check_classical(args.to), check_schoenfeld(args.to)):
        print(rep.summary())


if __name__ == "__main__":
    main()
