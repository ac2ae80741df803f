#!/usr/bin/env python3
"""Recompute the frozen regression values in src/detstat/goldens.py.

Everything here is brute force: determinants of every matrix in the box by
the explicit 2x2 formula, square-freeness and phi by trial division, and
the exponential-sum sweeps through the pure histogram path.  Run and paste
the printed literals into goldens.py if a value ever has to change.

    python scripts/freeze_goldens.py
"""

from __future__ import annotations

import math
import sys
from fractions import Fraction

import numpy as np

from detstat.core import LinearForm
from detstat.expsums import bound_report_prime, bound_report_prime_sq, eval_expsum

LADDER = (1, 2, 5, 10, 20, 40)
PHI_LADDER = (1, 2, 5, 10)


def trial_squarefree(k: int) -> bool:
    k = abs(k)
    if k == 0:
        return False
    q = 2
    while q * q <= k:
        if k % (q * q) == 0:
            return False
        if k % q == 0:
            k //= q
        q += 1
    return True


def trial_phi(k: int) -> int:
    out, m, q = k, k, 2
    while q * q <= m:
        if m % q == 0:
            while m % q == 0:
                m //= q
            out -= out // q
        q += 1
    if m > 1:
        out -= out // m
    return out


def brute_det_counts(H: int) -> dict[int, int]:
    """det = ad - bc over every 2x2 matrix with entries in [-H, H]."""
    r = np.arange(-H, H + 1, dtype=np.int64)
    cd = np.array([[c, d] for c in r for d in r])
    counts: dict[int, int] = {}
    for a in r:
        for b in r:
            dets = a * cd[:, 1] - b * cd[:, 0]
            vals, cnt = np.unique(dets, return_counts=True)
            for v, c in zip(vals.tolist(), cnt.tolist()):
                counts[v] = counts.get(v, 0) + c
    return counts


def main() -> int:
    print("# n = 2 square-free densities S_2(H) / (2H+1)^4")
    print("SQUAREFREE_DENSITY_N2 = {")
    phis = {}
    for H in LADDER:
        counts = brute_det_counts(H)
        assert sum(counts.values()) == (2 * H + 1) ** 4
        sf = sum(c for k, c in counts.items() if trial_squarefree(k))
        print(f"    {H}: Fraction({sf}, {(2 * H + 1) ** 4}),")
        if H in PHI_LADDER:
            phis[H] = sum((Fraction(c * trial_phi(abs(k)), abs(k)) for k, c in counts.items() if k),
                          Fraction(0))
    print("}")
    print("PHI_SUM_N2 = {")
    for H, v in phis.items():
        print(f"    {H}: Fraction({v.numerator}, {v.denominator}),")
    print("}")

    print("# max over nontrivial forms of |S_p(L)| / p^(n^2 - (n+1)/2), n = 2")
    print("PRIME_SWEEP_MAX_RATIO_N2 = {")
    for p in (2, 3, 5, 7):
        rep = bound_report_prime(2, p, "all-nontrivial")
        exact = max(round(r.magnitude) for r in rep.rows)
        print(f"    {p}: {rep.max_ratio['general']!r},  # max |S| = {exact}")
    print("}")

    print("# |S_{p^2}(L)| / p^(2n^2 - (n+3)/2), n = 2, x11 + 20 seeded forms")
    print("PRIME_SQUARE_MAX_RATIO_N2 = {")
    for p in (2, 3, 5):
        rep = bound_report_prime_sq(2, p, sample=20, seed=0)
        print(f"    {p}: {rep.max_ratio['prime_square']!r},")
    print("}")

    v = eval_expsum(2, 4, LinearForm.monomial(2, 0, 0))
    print("# S_4(x11) histogram:", v.histogram, "value", v.value)
    return 0


if __name__ == "__main__":
    sys.exit(main())
