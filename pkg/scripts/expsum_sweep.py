#!/usr/bin/env python3
"""Largest |S_p(L)| over every nontrivial form, against the three bound scales.

    python scripts/expsum_sweep.py --n 2 --primes 2,3,5,7
"""

import argparse

from detstat.expsums import bound_report_prime, bound_report_prime_sq


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=2)
    ap.add_argument("--primes", default="2,3,5,7")
    ap.add_argument("--family", default="all-nontrivial")
    ap.add_argument("--symmetry", action="store_true", help="one form per symmetry orbit")
    args = ap.parse_args()
    primes = [int(x) for x in args.primes.split(",")]

    print(f"{'p':>3} {'forms':>6} {'max|S|':>9} {'/first-col':>11} {'/general':>9} {'/weil':>8} {'p^2 ratio':>10}")
    prev = None
    for p in primes:
        rep = bound_report_prime(args.n, p, args.family, up_to_symmetry=args.symmetry)
        mr = rep.max_ratio
        sq = bound_report_prime_sq(args.n, p).max_ratio["prime_square"] if p <= 5 else float("nan")
        growth = "" if prev is None else f"  x{mr['general'] / prev:.3f}"
        print(f"{p:>3} {len(rep.rows):>6} {rep.max_magnitude:>9.1f} {mr['first_column']:>11.4f} "
              f"{mr['general']:>9.4f} {mr['weil']:>8.4f} {sq:>10.4f}{growth}")
        prev = mr["general"]


if __name__ == "__main__":
    main()
