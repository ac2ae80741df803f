"""Counts of singular matrices over residue rings Z_m.

``closed_form_N`` / ``closed_form_N_sq`` evaluate the product formulas for
square-free d and d^2; ``oracle_singular_count`` enumerates all m^(n^2)
matrices and is the independent check for both.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .core import (
    DomainError,
    LinearForm,
    check_budget,
    det_mod,
    factorize,
    require_prime,
    squarefree_primes,
)
from .enumerate import digits, dot_mod_zero_counts, index_chunks, last_row_cofactors, map_reduce


@dataclass(frozen=True)
class CountRecord:
    n: int
    modulus: int
    count: int
    source: str  # "closed-form" | "oracle" | "recurrence"
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not 0 <= self.count <= self.modulus ** (self.n * self.n):
            raise AssertionError(f"count {self.count} out of range for n={self.n}, m={self.modulus}")


def _integral(x: Fraction) -> int:
    if x.denominator != 1:
        raise AssertionError(f"closed form produced a non-integer {x}")
    return x.numerator


def _singular_density_factor(p: int, js: range) -> Fraction:
    prod = Fraction(1)
    for j in js:
        prod *= 1 - Fraction(1, p**j)
    return 1 - prod


def closed_form_N(n: int, d: int) -> int:
    """Number of n x n matrices over Z_d with det = 0, d square-free."""
    if n < 1:
        raise DomainError("n must be >= 1")
    val = Fraction(d ** (n * n))
    for p in squarefree_primes(d):
        val *= _singular_density_factor(p, range(1, n + 1))
    return _integral(val)


def closed_form_N_sq(n: int, d: int) -> int:
    """Number of n x n matrices over Z_{d^2} with det = 0, d square-free."""
    if n < 1:
        raise DomainError("n must be >= 1")
    val = Fraction(d ** (2 * n * n))
    for p in squarefree_primes(d):
        val *= _singular_density_factor(p, range(2, n + 2))
    return _integral(val)


def prime_recurrence_N(n: int, p: int) -> int:
    """N_n(p) from N_k(p) = (1 - p^-k) p^(2k-1) N_{k-1}(p) + p^(k^2-k), N_0 = 0."""
    require_prime(p)
    if n < 0:
        raise DomainError("n must be >= 0")
    N = 0
    for k in range(1, n + 1):
        N = (p**k - 1) * p ** (k - 1) * N + p ** (k * k - k)
    return N


def _oracle_chunk(n: int, m: int, lo: int, hi: int) -> np.ndarray:
    top = digits(np.arange(lo, hi), [m] * (n * (n - 1))).reshape(-1, n - 1, n)
    cof = last_row_cofactors(top) % m
    code = cof @ (m ** np.arange(n - 1, -1, -1, dtype=np.int64))
    return np.bincount(code, minlength=m**n).astype(np.int64)


def oracle_singular_count(n: int, m: int, *, budget: int | None = None, workers: int = 1) -> int:
    """Exhaustive count of X in [0, m)^(n x n) with det X = 0 (mod m).

    Each matrix is visited once: the top n-1 rows are tallied by their
    cofactor vector, then every last row is dotted against every tallied
    vector.  No matrix is skipped, so the count is unconditional.
    """
    if n < 1 or m < 1:
        raise DomainError("need n >= 1 and m >= 1")
    check_budget(f"oracle_singular_count(n={n}, m={m})", m ** (n * n), budget)
    if n == 1:
        return int(np.count_nonzero(np.arange(m) % m == 0))
    tops = m ** (n * (n - 1))
    weights = map_reduce(lambda r: _oracle_chunk(n, m, *r), index_chunks(tops),
                         np.add, workers)
    used = np.flatnonzero(weights)
    vecs = digits(used, [m] * n)
    last_rows = digits(np.arange(m**n), [m] * n)
    hits = dot_mod_zero_counts(vecs, last_rows, m)
    return int(np.dot(weights[used], hits))


def brute_singular_count(n: int, m: int) -> int:
    """Pure-Python enumeration with ``det_mod``; only for tiny n, m."""
    check_budget("brute_singular_count", m ** (n * n), 2 * 10**6)
    return sum(1 for e in itertools.product(range(m), repeat=n * n)
               if det_mod([e[i * n:(i + 1) * n] for i in range(n)], m) == 0)


@lru_cache(maxsize=256)
def singular_count(n: int, m: int, *, budget: int | None = None) -> int:
    """N_n(m): closed form when m is square-free or a square-free square, else oracle."""
    if m == 1:
        return 1
    fac = factorize(m)
    exps = set(fac.values())
    if exps == {1}:
        return closed_form_N(n, m)
    if exps == {2}:
        d = 1
        for p in fac:
            d *= p
        return closed_form_N_sq(n, d)
    return oracle_singular_count(n, m, budget=budget)


def singular_record(n: int, m: int, source: str = "closed-form", *,
                    budget: int | None = None, workers: int = 1) -> CountRecord:
    if source == "oracle":
        c = oracle_singular_count(n, m, budget=budget, workers=workers)
    elif source == "recurrence":
        c = prime_recurrence_N(n, m)
    else:
        c = singular_count(n, m, budget=budget)
        fac = factorize(m) if m > 1 else {}
        if fac and set(fac.values()) not in ({1}, {2}):
            source = "oracle"
    return CountRecord(n, m, c, source)


# ---------------------------------------------------------------------------
# linear sections: det(z | Z) = 0 and l(z) = 0 over F_p
# ---------------------------------------------------------------------------


def _check_first_column_form(n: int, p: int, form: LinearForm) -> None:
    if form.n != n:
        raise DomainError(f"form has dimension {form.n}, expected {n}")
    if not form.is_first_column():
        raise DomainError("form must only involve the first column")
    if form.vanishes_mod(p):
        raise DomainError(f"form vanishes identically mod {p}")


def linear_section_count(n: int, p: int, form: LinearForm) -> int:
    """Solutions of det(z|Z) = 0, l(z) = 0 over F_p for a nontrivial first-column form."""
    require_prime(p)
    if n < 2:
        raise DomainError("n must be >= 2")
    _check_first_column_form(n, p, form)
    return p ** (n * (n - 1)) + (p ** (n - 1) - 1) * p ** (n - 1) * prime_recurrence_N(n - 1, p)


def linear_section_oracle(n: int, p: int, form: LinearForm, *, budget: int | None = None) -> int:
    """Enumerate all (z, Z) with det(z|Z) = 0 and l(z) = 0.

    Expands along the first column: det = sum_i z_i c_i(Z).
    """
    require_prime(p)
    _check_first_column_form(n, p, form)
    check_budget("linear_section_oracle", p ** (n * n), budget)
    # transposing swaps the first column into the last row
    Zt = digits(np.arange(p ** (n * (n - 1))), [p] * (n * (n - 1))).reshape(-1, n, n - 1)
    cof = last_row_cofactors(np.transpose(Zt, (0, 2, 1))) % p
    ell = np.array(form.coeffs[::n], dtype=np.int64) % p
    zs = digits(np.arange(p**n), [p] * n)
    zs = zs[(zs @ ell) % p == 0]
    return int(dot_mod_zero_counts(cof, zs, p).sum())
