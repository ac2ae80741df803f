#!/usr/bin/env python3
"""Square-free and phi densities along a ladder of box sizes.

Prints one row per H with the exact densities, the predicted main terms and
the fitted log-log slopes of the gaps.  Slopes are descriptive only: at desk
scale they cannot pin down the power saving.

    python scripts/convergence_ladder.py --n 2 --h 1,2,5,10,20,40,80
"""

import argparse

from detstat.asymptotics import convergence_study, exponent_gamma, exponent_theta


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=2)
    ap.add_argument("--h", default="1,2,5,10,20,40")
    ap.add_argument("--prime-limit", type=int, default=10**5)
    args = ap.parse_args()
    Hs = [int(x) for x in args.h.split(",")]
    table = convergence_study(args.n, Hs, prime_limit=args.prime_limit)
    print(f"n={args.n}  S={table.constant_S:.10f}  sigma={table.constant_sigma:.10f}")
    print(f"{'H':>5} {'sf density':>12} {'predicted':>12} {'gap':>10} {'phi density':>12} {'gap':>10}")
    for r in table.rows:
        print(f"{r.H:>5} {float(r.squarefree_density):>12.8f} {r.predicted_squarefree:>12.8f} "
              f"{r.gap_squarefree:>10.3e} {float(r.phi_density):>12.8f} {r.gap_phi:>10.3e}")
    print(f"fitted gap slopes: squarefree {table.slope_squarefree:.3f} "
          f"(power saving {float(exponent_gamma(args.n)):.4f}), "
          f"phi {table.slope_phi:.3f} (power saving {float(exponent_theta(args.n)):.4f})")


if __name__ == "__main__":
    main()
