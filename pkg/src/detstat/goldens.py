"""Frozen regression values.

Provenance: produced by ``scripts/freeze_goldens.py``, which computes them by
brute force (every matrix's determinant by the explicit 2x2 formula,
square-freeness and phi by trial division).  They are not derived from the
sieve or product-distribution code paths they are used to check.
"""

from fractions import Fraction

# S_2(H) / (2H+1)^4, unreduced as count / box size
SQUAREFREE_DENSITY_N2 = {
    1: Fraction(48, 81),
    2: Fraction(384, 625),
    5: Fraction(8416, 14641),
    10: Fraction(98464, 194481),
    20: Fraction(1413600, 2825761),
    40: Fraction(21579408, 43046721),
}

# sum over det A != 0 of phi(|det A|)/|det A|, n = 2
PHI_SUM_N2 = {
    1: Fraction(44),
    2: Fraction(4612, 15),
    5: Fraction(1233917998323864844, 152125131763605),
}

# n = 2: max over all nontrivial forms mod p of |S_p(L)|, exact
PRIME_SWEEP_MAX_N2 = {2: 2, 3: 6, 5: 20, 7: 42}

# n = 2: max |S_{p^2}(L)| / p^(2n^2 - (n+3)/2) over x11 plus 20 forms drawn with seed 0
PRIME_SQUARE_MAX_RATIO_N2 = {
    2: 0.17677669529663687,
    3: 0.12830005981991682,
    5: 0.07155417527999325,
}

# 1/(zeta(2) zeta(3)) and 6/pi^2 to 20 digits (mpmath.zeta at 30 digits)
INV_ZETA2_ZETA3 = "0.50573903802398742873"
INV_ZETA2 = "0.60792710185402662866"
