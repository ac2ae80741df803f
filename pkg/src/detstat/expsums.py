"""Complete exponential sums S_m(L) over the singular matrices mod m.

Sums are accumulated as exact integer histograms h[r] = #{X : det X = 0,
L(X) = r (mod m)}; the complex value is formed once from the histogram.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .core import (
    DomainError,
    LinearForm,
    check_budget,
    det_mod,
    require_prime,
    resolve_budget,
    squarefree_primes,
)
from .counts import prime_recurrence_N, singular_count
from .enumerate import digits, dot_mod_zero_mask, index_chunks, last_row_cofactors, map_reduce

CRT_TOL = 1e-6


_QUARTER = (complex(1, 0), complex(0, 1), complex(-1, 0), complex(0, -1))


def unit_root(r: int, m: int) -> complex:
    """e(r/m), folded to the nearest quarter turn so axis points are exact."""
    k = (4 * r + m // 2) // m
    t = 2 * math.pi * (4 * r - k * m) / (4 * m)
    return _QUARTER[k % 4] * complex(math.cos(t), math.sin(t))


@dataclass(frozen=True)
class ExpSumResult:
    modulus: int
    histogram: tuple[int, ...]
    value: complex
    magnitude: float

    @classmethod
    def from_histogram(cls, m: int, hist: Sequence[int]) -> "ExpSumResult":
        hist = tuple(int(h) for h in hist)
        if len(hist) != m:
            raise DomainError("histogram length must equal the modulus")
        terms = [(h, unit_root(r, m)) for r, h in enumerate(hist) if h]
        re = math.fsum(h * z.real for h, z in terms)
        im = math.fsum(h * z.imag for h, z in terms)
        value = complex(re, im)
        return cls(m, hist, value, abs(value))

    @property
    def mass(self) -> int:
        return sum(self.histogram)


@lru_cache(maxsize=32)
def _top_rows(n: int, m: int):
    """All top (n-1)-row blocks mod m: flattened entries and cofactor codes."""
    tops = digits(np.arange(m ** (n * (n - 1))), [m] * (n * (n - 1)))
    cof = last_row_cofactors(tops.reshape(-1, n - 1, n)) % m
    code = cof @ (m ** np.arange(n - 1, -1, -1, dtype=np.int64))
    tops.setflags(write=False)
    code.setflags(write=False)
    return tops, code


@lru_cache(maxsize=32)
def _last_rows(n: int, m: int) -> np.ndarray:
    rows = digits(np.arange(m**n), [m] * n)
    rows.setflags(write=False)
    return rows


def _histogram(n: int, m: int, form: LinearForm, workers: int = 1) -> np.ndarray:
    coeffs = np.array(form.coeffs, dtype=np.int64) % m
    if n == 1:
        return np.bincount(np.zeros(1, dtype=np.int64), minlength=m)
    tops, code = _top_rows(n, m)
    ltop, llast = coeffs[: n * (n - 1)], coeffs[n * (n - 1):]

    def chunk(r):
        lo, hi = r
        s1 = (tops[lo:hi] @ ltop) % m
        return np.bincount(code[lo:hi] * m + s1, minlength=m**n * m)

    W = map_reduce(chunk, index_chunks(tops.shape[0]), np.add, workers).reshape(m**n, m)
    used = np.flatnonzero(W.any(axis=1))
    rows = _last_rows(n, m)
    s2 = (rows @ llast) % m
    mask = dot_mod_zero_mask(digits(used, [m] * n), rows, m)
    onehot = np.zeros((rows.shape[0], m), dtype=np.int64)
    onehot[np.arange(rows.shape[0]), s2] = 1
    G = mask.astype(np.int64) @ onehot          # G[c, s] = #{r : c.r = 0, L_last(r) = s}
    V = G.T @ W[used]                            # V[s, s1]
    hist = np.zeros(m, dtype=np.int64)
    for s in range(m):
        hist += np.roll(V[s], s)
    return hist


def eval_expsum(n: int, m: int, form: LinearForm, *, budget: int | None = None,
                workers: int = 1) -> ExpSumResult:
    """S_m(L) with its exact residue histogram."""
    if m < 1:
        raise DomainError("modulus must be >= 1")
    if form.n != n:
        raise DomainError(f"form has dimension {form.n}, expected {n}")
    check_budget(f"eval_expsum(n={n}, m={m})", m ** (n * n), budget)
    return ExpSumResult.from_histogram(m, _histogram(n, m, form, workers))


def brute_expsum(n: int, m: int, form: LinearForm) -> ExpSumResult:
    """Pure-Python enumeration; oracle for tiny cases."""
    check_budget("brute_expsum", m ** (n * n), 2 * 10**6)
    hist = [0] * m
    for e in itertools.product(range(m), repeat=n * n):
        if det_mod([e[i * n:(i + 1) * n] for i in range(n)], m) == 0:
            hist[form(e) % m] += 1
    return ExpSumResult.from_histogram(m, hist)


def monomial_exact(n: int, p: int) -> int:
    """Exact S_p(L) for any first-column form nontrivial mod p."""
    require_prime(p)
    if n < 2:
        raise DomainError("n must be >= 2")
    return p ** (n * (n - 1)) - p ** (n - 1) * prime_recurrence_N(n - 1, p)


# ---------------------------------------------------------------------------
# CRT factorisation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CrtPart:
    prime: int
    modulus: int      # p or p^2
    weight: int       # inverse of (M / modulus) mod modulus
    form: LinearForm  # weight * L reduced mod modulus


def crt_split(d: int, form: LinearForm, *, square: bool = False) -> list[CrtPart]:
    """Factor S_M(L), M = d or d^2, into local sums with explicit unit weights.

    With q = p (or p^2) and w_q = (M/q)^(-1) mod q we have
    e_M(x) = prod_q e_q(w_q x).
    """
    primes = squarefree_primes(d)
    if d < 2:
        raise DomainError("d must be >= 2")
    M = d * d if square else d
    parts = []
    for p in primes:
        q = p * p if square else p
        w = pow(M // q, -1, q)
        parts.append(CrtPart(p, q, w, form.scaled(w).reduced(q)))
    return parts


def crt_product(n: int, d: int, form: LinearForm, *, square: bool = False,
                budget: int | None = None) -> tuple[complex, list[ExpSumResult]]:
    parts = crt_split(d, form, square=square)
    results = [eval_expsum(n, part.modulus, part.form, budget=budget) for part in parts]
    value = complex(1)
    for r in results:
        value *= r.value
    return value, results


def crt_histogram(n: int, d: int, form: LinearForm, *, square: bool = False,
                  budget: int | None = None) -> list[int]:
    """Histogram of L mod M rebuilt from local histograms of L mod q.

    By CRT, h_M[r] = prod_q h_q[r mod q] exactly.
    """
    M = d * d if square else d
    local = []
    for p in squarefree_primes(d):
        q = p * p if square else p
        local.append((q, eval_expsum(n, q, form.reduced(q), budget=budget).histogram))
    out = []
    for r in range(M):
        v = 1
        for q, h in local:
            v *= h[r % q]
        out.append(v)
    return out


def gcd_decompose_sq(form: LinearForm, d: int) -> tuple[int, int, int]:
    """gcd(L, d^2) = e f^2 with e, f square-free, coprime, dividing d."""
    primes = squarefree_primes(d)
    if form.is_zero:
        raise DomainError("gcd with the zero form is undefined")
    D = form.gcd_with(d * d)
    e = f = 1
    for p in primes:
        if D % (p * p) == 0:
            f *= p
        elif D % p == 0:
            e *= p
    assert e * f * f == D
    return D, e, f


# ---------------------------------------------------------------------------
# bound sweeps
# ---------------------------------------------------------------------------

FAMILIES = ("all-nontrivial", "monomial", "first-column")


def prime_scales(n: int, p: int) -> dict[str, float]:
    """Bound scales for S_p(L): first-column, general nontrivial, Weil."""
    return {
        "first_column": float(p) ** (n * n - n),
        "general": float(p) ** (n * n - (n + 1) / 2),
        "weil": float(p) ** (n * n - 1.5),
    }


@dataclass
class BoundRow:
    form: LinearForm
    magnitude: float
    ratios: dict[str, float]
    orbit_size: int = 1


@dataclass
class BoundReport:
    n: int
    modulus: int
    family: str
    rows: list[BoundRow] = field(default_factory=list)

    @property
    def max_ratio(self) -> dict[str, float]:
        keys = self.rows[0].ratios.keys() if self.rows else ()
        return {k: max(r.ratios[k] for r in self.rows) for k in keys}

    @property
    def max_magnitude(self) -> float:
        return max(r.magnitude for r in self.rows)


def iter_forms(n: int, p: int, family: str) -> Iterable[LinearForm]:
    """Nontrivial forms mod p in lexicographic coefficient order."""
    if family == "first-column":
        for z in itertools.product(range(p), repeat=n):
            if any(z):
                yield LinearForm.first_column(z)
    elif family == "monomial":
        for k in range(n * n):
            for a in range(1, p):
                yield LinearForm.monomial(n, k // n, k % n, a)
    elif family == "all-nontrivial":
        for c in itertools.product(range(p), repeat=n * n):
            if any(c):
                yield LinearForm(n, c)
    else:
        raise DomainError(f"unknown family {family!r}; expected one of {FAMILIES}")


def symmetry_images(form: LinearForm) -> set[tuple[int, ...]]:
    """Images under row permutations, column permutations and transpose."""
    n = form.n
    rows = form.rows()
    out = set()
    for grid in (rows, [list(c) for c in zip(*rows)]):
        for rp in itertools.permutations(range(n)):
            for cp in itertools.permutations(range(n)):
                out.add(tuple(grid[rp[i]][cp[j]] for i in range(n) for j in range(n)))
    return out


def _dedupe(forms: Iterable[LinearForm]) -> list[tuple[LinearForm, int]]:
    seen: set[tuple[int, ...]] = set()
    out = []
    for f in forms:
        if f.coeffs in seen:
            continue
        orbit = symmetry_images(f)
        seen |= orbit
        out.append((LinearForm(f.n, min(orbit)), len(orbit)))
    return out


def bound_report_prime(n: int, p: int, family: str = "all-nontrivial", *,
                       up_to_symmetry: bool = False, budget: int | None = None) -> BoundReport:
    require_prime(p)
    forms = list(iter_forms(n, p, family))
    check_budget(f"bound_report_prime(n={n}, p={p}, {family})",
                 len(forms) * p ** (n * n), budget)
    scales = prime_scales(n, p)
    pairs = _dedupe(forms) if up_to_symmetry else [(f, 1) for f in forms]
    report = BoundReport(n, p, family)
    for f, orbit in pairs:
        mag = eval_expsum(n, p, f, budget=resolve_budget(budget)).magnitude
        report.rows.append(BoundRow(f, mag, {k: mag / s for k, s in scales.items()}, orbit))
    return report


def bound_report_prime_sq(n: int, p: int, forms: Sequence[LinearForm] | None = None, *,
                          sample: int = 20, seed: int = 0,
                          budget: int | None = None) -> BoundReport:
    """|S_{p^2}(L)| against p^(2n^2 - (n+3)/2) for forms nonvanishing mod p.

    Without explicit ``forms``, sweeps the monomial x_11 plus a seeded sample
    of random residue grids mod p^2.
    """
    require_prime(p)
    q = p * p
    if forms is None:
        rng = np.random.default_rng(seed)
        forms = [LinearForm.monomial(n, 0, 0)]
        forms += [LinearForm(n, tuple(int(x) for x in rng.integers(0, q, n * n)))
                  for _ in range(sample)]
    kept = [f for f in forms if not f.vanishes_mod(p)]
    check_budget(f"bound_report_prime_sq(n={n}, p={p})", len(kept) * q ** (n * n), budget)
    scale = float(p) ** (2 * n * n - (n + 3) / 2)
    report = BoundReport(n, q, "prime-square")
    for f in kept:
        mag = eval_expsum(n, q, f.reduced(q)).magnitude
        report.rows.append(BoundRow(f, mag, {"prime_square": mag / scale}))
    return report


@dataclass
class CompositeRow:
    d: int
    kind: str
    form: LinearForm
    value: complex
    magnitude: float
    D: int
    e: int | None
    f: int | None
    scales: dict[str, float]

    @property
    def ratios(self) -> dict[str, float]:
        return {k: self.magnitude / s for k, s in self.scales.items()}


def bound_report_composite(n: int, d: int, form: LinearForm, kind: str = "d", *,
                           budget: int | None = None) -> CompositeRow:
    """Compare |S_d(L)| or |S_{d^2}(L)| with the composite-modulus scales.

    kind "d":  d^(n^2) (D/d)^n for monomials, d^(n^2) (D/d)^((n+1)/2) otherwise.
    kind "d2": d^(2n^2-(n+3)/2) e f^((n+3)/2) and the weaker
               d^(2n^2) (D/d^2)^((n+3)/4), with D = gcd(L, d^2) = e f^2.
    """
    if kind not in ("d", "d2"):
        raise DomainError("kind must be 'd' or 'd2'")
    square = kind == "d2"
    squarefree_primes(d)
    if d == 1:
        value = complex(singular_count(n, 1))
    else:
        value, _ = crt_product(n, d, form, square=square, budget=budget)
    mag = abs(value)
    if not square:
        D = form.gcd_with(d)
        expo = n if form.is_monomial else (n + 1) / 2
        scales = {"composite": d ** (n * n) * (D / d) ** expo}
        return CompositeRow(d, kind, form, value, mag, D, None, None, scales)
    if form.is_zero:
        D, e, f = d * d, 1, d
    else:
        D, e, f = gcd_decompose_sq(form, d)
    scales = {
        "square_sharp": d ** (2 * n * n - (n + 3) / 2) * e * f ** ((n + 3) / 2),
        "square_simple": d ** (2 * n * n) * (D / d**2) ** ((n + 3) / 4),
    }
    return CompositeRow(d, kind, form, value, mag, D, e, f, scales)


def histogram_scaled(hist: Sequence[int], lam: int) -> list[int]:
    """Histogram of lam*L given that of L, for lam a unit mod m."""
    m = len(hist)
    out = [0] * m
    for r, h in enumerate(hist):
        out[lam * r % m] += h
    return out


def exact_real(result: ExpSumResult) -> Fraction | None:
    """The value as an exact integer when every root of unity used is +-1."""
    m = result.modulus
    if any(h for r, h in enumerate(result.histogram) if (2 * r) % m):
        return None
    return Fraction(sum(h if r == 0 else -h for r, h in enumerate(result.histogram) if h))

