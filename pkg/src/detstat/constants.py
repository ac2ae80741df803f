"""Rigorous enclosures of the Euler-product densities.

Two products are supported, both over all primes p:

    squarefree:  prod_p prod_{j=2}^{n+1} (1 - p^-j)
    phi:         prod_p (1 - 1/p) (1 + (1/p) prod_{j=2}^{n} (1 - p^-j))

Each local factor is an exact rational.  The partial product over p <= P is
carried as a pair of MPFR numbers rounded down and up respectively.  The
tail T(P) = -sum_{p > P} log(local factor) is enclosed by

    P <  599:  0 <= T <= 2/P                       (every factor >= 1 - 2/(p(p-1)))
    P >= 599:  explicit two-sided bounds on pi(x) (Dusart) give
               sum_{p>P} p^-2 in [2/(P ln P) - pi(P)/P^2,
                                  2/(P ln P) - pi(P)/P^2 + 0.5524/(P ln^2 P)]
               and each factor's log-deficit lies in [p^-2 - 2p^-4, p^-2 + 2p^-3].

The enclosure reported at P is the intersection of the enclosures at every
prime q <= P, so enclosures nest as P grows.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import gmpy2
import mpmath
from gmpy2 import mpfr, mpq

from .core import DomainError, prime_sieve

PRECISION = 128
DUSART_FROM = 599

_DOWN = gmpy2.context(precision=PRECISION, round=gmpy2.RoundDown)
_UP = gmpy2.context(precision=PRECISION, round=gmpy2.RoundUp)


@dataclass(frozen=True)
class ConstantInterval:
    name: str  # "S" (square-free density) or "sigma" (phi density)
    n: int
    truncation_prime: int
    lo: mpmath.mpf
    hi: mpmath.mpf
    tail_bound_method: str

    @property
    def width(self) -> mpmath.mpf:
        return self.hi - self.lo

    @property
    def mid(self) -> mpmath.mpf:
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def __contains__(self, x) -> bool:
        return self.contains(x)


def local_factor(name: str, n: int, p: int) -> Fraction:
    """The exact Euler factor at p."""
    if name == "S":
        num, den = 1, 1
        for j in range(2, n + 2):
            num *= p**j - 1
            den *= p**j
        return Fraction(num, den)
    if name == "sigma":
        g = Fraction(1)
        for j in range(2, n + 1):
            g *= 1 - Fraction(1, p**j)
        return (1 - Fraction(1, p)) * (1 + g / p)
    raise DomainError(f"unknown constant {name!r}")


def _to(ctx, x) -> mpfr:
    return mpfr(x, 0, ctx)


def _tail_bounds(q: int, count: int) -> tuple[mpq, mpq, str]:
    """Enclosure [t_lo, t_hi] of the log-tail beyond q, exact rationals."""
    if q < DUSART_FROM:
        return mpq(0), mpq(2, q), "telescoping 2/P"
    ln_lo = mpq(_DOWN.log(q))
    ln_hi = mpq(_UP.log(q))
    base_lo = mpq(2) / (q * ln_hi) - mpq(count, q * q)
    base_hi = mpq(2) / (q * ln_lo) - mpq(count, q * q)
    s_hi = base_hi + mpq(5524, 10000) / (q * ln_lo * ln_lo)
    t_lo = max(mpq(0), base_lo - mpq(2, 3 * q**3))
    t_hi = s_hi + mpq(1, q * q)
    return t_lo, t_hi, "Dusart pi(x) bounds"


@lru_cache(maxsize=64)
def euler_interval(name: str, n: int, P: int) -> ConstantInterval:
    if n < 1:
        raise DomainError("n must be >= 1")
    if P < 1:
        raise DomainError("truncation prime must be >= 1")
    prod_lo = prod_hi = mpfr(1)
    t_lo, t_hi, method = _tail_bounds(1, 0)
    best_lo = _DOWN.exp(_to(_DOWN, -t_hi))
    best_hi = mpfr(1)
    for count, p in enumerate(prime_sieve(P).tolist(), start=1):
        f = local_factor(name, n, p)
        fq = mpq(f.numerator, f.denominator)
        prod_lo = _DOWN.mul(prod_lo, _to(_DOWN, fq))
        prod_hi = _UP.mul(prod_hi, _to(_UP, fq))
        t_lo, t_hi, method = _tail_bounds(p, count)
        lo = _DOWN.mul(prod_lo, _DOWN.exp(_to(_DOWN, -t_hi)))
        hi = _UP.mul(prod_hi, _UP.exp(_to(_UP, -t_lo)))
        if lo > best_lo:
            best_lo = lo
        if hi < best_hi:
            best_hi = hi
    return ConstantInterval(name, n, P, _exact_mpf(best_lo), _exact_mpf(best_hi), method)


def _exact_mpf(x: mpfr) -> mpmath.mpf:
    man, exp = x.as_mantissa_exp()
    return mpmath.mpf((int(man), int(exp)))


def euler_constant_S(n: int, P: int) -> ConstantInterval:
    """prod_p prod_{j=2}^{n+1} (1 - p^-j), truncated at P with rigorous tail."""
    return euler_interval("S", n, P)


def euler_constant_sigma(n: int, P: int) -> ConstantInterval:
    """prod_p (1 - 1/p)(1 + (1/p) prod_{j=2}^{n} (1 - p^-j)), truncated at P."""
    return euler_interval("sigma", n, P)


# ---------------------------------------------------------------------------
# independent zeta oracle
# ---------------------------------------------------------------------------


def zeta_series(s: int, terms: int = 200, corrections: int = 20, prec: int = 160) -> mpmath.mpf:
    """zeta(s) for integer s >= 2 by direct summation plus Euler-Maclaurin tail."""
    if s < 2:
        raise DomainError("s must be >= 2")
    with mpmath.workprec(prec):
        K = mpmath.mpf(terms)
        total = mpmath.fsum(mpmath.mpf(k) ** -s for k in range(1, terms))
        total += K ** (1 - s) / (s - 1) + K**-s / 2
        rising = mpmath.mpf(s)
        for j in range(1, corrections + 1):
            total += mpmath.bernoulli(2 * j) / mpmath.factorial(2 * j) * rising * K ** (-s - 2 * j + 1)
            rising *= (s + 2 * j - 1) * (s + 2 * j)
        return +total


def zeta_product_S(n: int) -> mpmath.mpf:
    """prod_{j=2}^{n+1} 1/zeta(j): the square-free density from zeta values."""
    out = mpmath.mpf(1)
    for j in range(2, n + 2):
        out /= zeta_series(j)
    return out
