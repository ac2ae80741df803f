#!/usr/bin/env python3
"""Residuals of box counts N_n(m; H) against the equidistributed main term.

With H proportional to the modulus, fits the exponent of |residual| in d.

    python scripts/residual_study.py --n 2 --ratio 1.3
"""

import argparse

from detstat.boxes import residual_report


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=2)
    ap.add_argument("--ds", default="2,3,5,6,7,10,11,13,14,15")
    ap.add_argument("--ratio", type=float, default=1.3)
    ap.add_argument("--square", action="store_true", help="use modulus d^2")
    args = ap.parse_args()
    ds = [int(x) for x in args.ds.split(",")]
    rep = residual_report(args.n, ds, square=args.square, ratio=args.ratio)
    print(f"{'m':>6} {'H':>5} {'count':>14} {'residual':>22} {'log|res|/log m':>15}")
    for r in rep.records:
        e = r.normalized_exponent
        print(f"{r.modulus:>6} {r.box.bounds[0]:>5} {r.exact_count:>14} {str(r.residual):>22} "
              f"{'' if e is None else f'{e:.3f}':>15}")
    print("fitted slope:", "n/a" if rep.slope is None else f"{rep.slope:.3f}")


if __name__ == "__main__":
    main()
