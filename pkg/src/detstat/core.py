"""Exact integer and modular linear algebra, sieves, and shared value types."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

DEFAULT_BUDGET = 10**9
BUDGET_ENV = "DETSTAT_BUDGET"


class DetstatError(Exception):
    """Base class for library errors."""


class InvalidModulus(DetstatError, ValueError):
    pass


class InvalidPrime(DetstatError, ValueError):
    pass


class InvalidLimit(DetstatError, ValueError):
    pass


class DomainError(DetstatError, ValueError):
    """Argument outside the domain where a formula is defined."""


class BudgetExceeded(DetstatError):
    """An enumeration would exceed the iteration budget; no partial answer is returned."""

    def __init__(self, what: str, iterations: int, budget: int):
        self.what = what
        self.iterations = iterations
        self.budget = budget
        super().__init__(f"{what}: {iterations} iterations exceeds budget {budget}")


def resolve_budget(budget: int | None = None) -> int:
    if budget is None:
        budget = int(os.environ.get(BUDGET_ENV, DEFAULT_BUDGET))
    if budget <= 0:
        raise DomainError("budget must be positive")
    return budget


def check_budget(what: str, iterations: int, budget: int | None = None) -> int:
    budget = resolve_budget(budget)
    if iterations > budget:
        raise BudgetExceeded(what, iterations, budget)
    return iterations


# ---------------------------------------------------------------------------
# small integer helpers
# ---------------------------------------------------------------------------


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    for q in range(3, math.isqrt(p) + 1, 2):
        if p % q == 0:
            return False
    return True


def require_prime(p: int) -> int:
    if not is_prime(p):
        raise InvalidPrime(f"{p} is not prime")
    return p


def factorize(k: int) -> dict[int, int]:
    """Prime factorisation of |k| by trial division (k != 0)."""
    k = abs(k)
    if k == 0:
        raise DomainError("cannot factor 0")
    out: dict[int, int] = {}
    q = 2
    while q * q <= k:
        while k % q == 0:
            out[q] = out.get(q, 0) + 1
            k //= q
        q += 1 if q == 2 else 2
    if k > 1:
        out[k] = out.get(k, 0) + 1
    return out


def squarefree_primes(d: int) -> list[int]:
    """Primes dividing a square-free d >= 1, ascending.

    Raises DomainError naming the repeated prime otherwise.
    """
    if d < 1:
        raise DomainError(f"expected a square-free integer >= 1, got {d}")
    fac = factorize(d) if d > 1 else {}
    for p, e in fac.items():
        if e > 1:
            raise DomainError(f"{d} is not square-free: {p}^2 divides it")
    return sorted(fac)


def hadamard_range(n: int, H: int) -> int:
    """n! * H^n, an a-priori bound on |det A| for entries in [-H, H]."""
    if n < 1 or H < 0:
        raise DomainError("need n >= 1 and H >= 0")
    return math.factorial(n) * H**n


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntMatrix:
    """Square matrix of exact integers, stored row-major."""

    n: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("dimension must be >= 1")
        if len(self.entries) != self.n * self.n:
            raise DomainError(f"expected {self.n * self.n} entries, got {len(self.entries)}")
        object.__setattr__(self, "entries", tuple(int(x) for x in self.entries))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "IntMatrix":
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise DomainError("matrix must be square")
        return cls(n, tuple(x for r in rows for x in r))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, tuple(int(i == j) for i in range(n) for j in range(n)))

    def rows(self) -> list[list[int]]:
        n = self.n
        return [list(self.entries[i * n:(i + 1) * n]) for i in range(n)]

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.n + j]

    def max_abs(self) -> int:
        return max(abs(x) for x in self.entries)


def _as_rows(M) -> list[list[int]]:
    if isinstance(M, IntMatrix):
        return M.rows()
    return [[int(x) for x in r] for r in M]


def det_exact(M) -> int:
    """Determinant by fraction-free (Bareiss) elimination."""
    a = _as_rows(M)
    n = len(a)
    if n == 0 or any(len(r) != n for r in a):
        raise DomainError("determinant needs a non-empty square matrix")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        piv = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                # exact division is guaranteed by Sylvester's identity
                a[i][j] = (a[i][j] * piv - a[i][k] * a[k][j]) // prev
        prev = piv
    return sign * a[n - 1][n - 1]


def det_cofactor(M) -> int:
    """Laplace expansion along the first row; independent check for small n."""
    a = _as_rows(M)
    n = len(a)
    if n == 1:
        return a[0][0]
    if n == 2:
        return a[0][0] * a[1][1] - a[0][1] * a[1][0]
    total = 0
    for j in range(n):
        if a[0][j]:
            minor = [r[:j] + r[j + 1:] for r in a[1:]]
            total += (-1) ** j * a[0][j] * det_cofactor(minor)
    return total


def det_mod(M, m: int) -> int:
    """det M reduced to [0, m), every intermediate reduced mod m.

    Works for composite m by Euclidean row reduction (no inverses needed).
    """
    if m < 1:
        raise InvalidModulus(f"modulus must be >= 1, got {m}")
    if m == 1:
        return 0
    a = [[x % m for x in r] for r in _as_rows(M)]
    n = len(a)
    det = 1
    for k in range(n):
        for i in range(k + 1, n):
            while a[i][k]:
                q = a[k][k] // a[i][k]
                if q:
                    rk, ri = a[k], a[i]
                    a[k] = [(x - q * y) % m for x, y in zip(rk, ri)]
                a[k], a[i] = a[i], a[k]
                det = -det
        det = det * a[k][k] % m
        if det == 0:
            return 0
    return det % m


def rank_mod_p(M, p: int) -> int:
    """Rank over F_p of a (possibly rectangular) integer grid."""
    require_prime(p)
    a = [[x % p for x in r] for r in _as_rows(M)]
    if not a:
        return 0
    rows, cols = len(a), len(a[0])
    rank = 0
    for c in range(cols):
        piv = next((i for i in range(rank, rows) if a[i][c]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = pow(a[rank][c], -1, p)
        a[rank] = [x * inv % p for x in a[rank]]
        for i in range(rows):
            if i != rank and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[rank])]
        rank += 1
        if rank == rows:
            break
    return rank


# ---------------------------------------------------------------------------
# linear forms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LinearForm:
    """L(X) = sum a_ij x_ij on n x n matrices; coefficients row-major."""

    n: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.n * self.n:
            raise DomainError(f"expected {self.n * self.n} coefficients, got {len(self.coeffs)}")
        object.__setattr__(self, "coeffs", tuple(int(x) for x in self.coeffs))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "LinearForm":
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise DomainError("coefficient grid must be square")
        return cls(n, tuple(x for r in rows for x in r))

    @classmethod
    def parse(cls, text: str) -> "LinearForm":
        """Parse the grid syntax ``"a11,a12;a21,a22"``."""
        try:
            rows = [[int(x) for x in row.split(",")] for row in text.strip().split(";")]
        except ValueError as exc:
            raise DomainError(f"bad form {text!r}: {exc}") from None
        return cls.from_rows(rows)

    @classmethod
    def zero(cls, n: int) -> "LinearForm":
        return cls(n, (0,) * (n * n))

    @classmethod
    def monomial(cls, n: int, i: int, j: int, a: int = 1) -> "LinearForm":
        c = [0] * (n * n)
        c[i * n + j] = a
        return cls(n, tuple(c))

    @classmethod
    def first_column(cls, z: Sequence[int]) -> "LinearForm":
        n = len(z)
        c = [0] * (n * n)
        for i, a in enumerate(z):
            c[i * n] = a
        return cls(n, tuple(c))

    def rows(self) -> list[list[int]]:
        n = self.n
        return [list(self.coeffs[i * n:(i + 1) * n]) for i in range(n)]

    def format(self) -> str:
        return ";".join(",".join(str(x) for x in r) for r in self.rows())

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    @property
    def is_monomial(self) -> bool:
        return sum(1 for x in self.coeffs if x) == 1

    def gcd_with(self, m: int) -> int:
        return math.gcd(m, *self.coeffs)

    def vanishes_mod(self, m: int) -> bool:
        return all(x % m == 0 for x in self.coeffs)

    def reduced(self, m: int) -> "LinearForm":
        return LinearForm(self.n, tuple(x % m for x in self.coeffs))

    def scaled(self, lam: int) -> "LinearForm":
        return LinearForm(self.n, tuple(lam * x for x in self.coeffs))

    def is_first_column(self) -> bool:
        n = self.n
        return all(x == 0 for k, x in enumerate(self.coeffs) if k % n)

    def transposed(self) -> "LinearForm":
        r = self.rows()
        return LinearForm.from_rows([list(col) for col in zip(*r)])

    def __call__(self, entries: Iterable[int]) -> int:
        return sum(a * x for a, x in zip(self.coeffs, entries))


# ---------------------------------------------------------------------------
# sieves
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SieveTables:
    """Smallest prime factor, Moebius, Euler phi and square-freeness up to ``limit``."""

    limit: int
    smallest_prime_factor: np.ndarray
    mobius: np.ndarray
    euler_phi: np.ndarray
    is_squarefree: np.ndarray

    def mu(self, k: int) -> int:
        return int(self.mobius[self._index(k)])

    def phi(self, k: int) -> int:
        return int(self.euler_phi[self._index(k)])

    def squarefree(self, k: int) -> bool:
        """0 is never square-free; sign is ignored."""
        if k == 0:
            return False
        return bool(self.is_squarefree[self._index(abs(k))])

    def primes(self) -> np.ndarray:
        return np.flatnonzero(self.smallest_prime_factor == np.arange(self.limit + 1))[2:] \
            if self.limit >= 2 else np.array([], dtype=np.int64)

    def _index(self, k: int) -> int:
        if not 1 <= k <= self.limit:
            raise DomainError(f"{k} outside sieve range [1, {self.limit}]")
        return k


def prime_sieve(N: int) -> np.ndarray:
    """All primes <= N as an int64 array."""
    if N < 2:
        return np.array([], dtype=np.int64)
    flags = np.ones(N + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(N) + 1):
        if flags[p]:
            flags[p * p::p] = False
    return np.flatnonzero(flags).astype(np.int64)


@lru_cache(maxsize=16)
def build_sieves(N: int) -> SieveTables:
    if N < 2:
        raise InvalidLimit(f"sieve limit must be >= 2, got {N}")
    primes = prime_sieve(N)
    spf = np.arange(N + 1, dtype=np.int64)
    for p in primes[primes <= math.isqrt(N)][::-1]:
        spf[p * p::p] = p
    mu = np.ones(N + 1, dtype=np.int8)
    phi = np.arange(N + 1, dtype=np.int64)
    for p in primes:
        mu[p::p] *= -1
        phi[p::p] -= phi[p::p] // p
        if p * p <= N:
            mu[p * p::p * p] = 0
    mu[0] = 0
    phi[0] = 0
    sqf = mu != 0
    for arr in (spf, mu, phi, sqf):
        arr.setflags(write=False)
    return SieveTables(N, spf, mu, phi, sqf)
