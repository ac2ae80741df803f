"""Counts of integer matrices in a box with determinant conditions.

For n = 2 everything goes through product distributions: det = ad - bc, so
counts mod m come from c_v = #{(a, d) : ad = v (mod m)} and exact
determinant counts from the convolution of the ad and bc distributions.
For n >= 3 the box is enumerated top-rows-by-cofactor against every last row.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .core import DomainError, check_budget, det_exact
from .counts import singular_count
from .enumerate import INT64_SAFE, digits, index_chunks, last_row_cofactors, map_reduce


@dataclass(frozen=True)
class BoxSpec:
    """Entry bounds |a_ij| <= H_ij, row-major."""

    n: int
    bounds: tuple[int, ...]

    def __post_init__(self):
        if len(self.bounds) != self.n * self.n:
            raise DomainError(f"expected {self.n * self.n} bounds, got {len(self.bounds)}")
        if any(h < 1 for h in self.bounds):
            raise DomainError("all bounds must be >= 1")
        object.__setattr__(self, "bounds", tuple(int(h) for h in self.bounds))

    @classmethod
    def uniform(cls, n: int, H: int) -> "BoxSpec":
        return cls(n, (H,) * (n * n))

    @classmethod
    def of(cls, n: int, H: "int | BoxSpec | Sequence[int]") -> "BoxSpec":
        if isinstance(H, BoxSpec):
            if H.n != n:
                raise DomainError("box dimension mismatch")
            return H
        if isinstance(H, int):
            return cls.uniform(n, H)
        return cls(n, tuple(H))

    @property
    def size(self) -> int:
        return math.prod(2 * h + 1 for h in self.bounds)

    @property
    def is_uniform(self) -> bool:
        return len(set(self.bounds)) == 1

    @property
    def max_det(self) -> int:
        """Hadamard-type bound: n! * prod_i max_j H_ij."""
        n = self.n
        return math.factorial(n) * math.prod(max(self.bounds[i * n:(i + 1) * n]) for i in range(n))


@dataclass(frozen=True)
class DetDistribution:
    """counts[k + offset] = #{A in box : det A = k}."""

    offset: int
    counts: np.ndarray

    def __getitem__(self, a: int) -> int:
        i = a + self.offset
        return int(self.counts[i]) if 0 <= i < self.counts.size else 0

    def items(self):
        for i in np.flatnonzero(self.counts):
            yield int(i) - self.offset, int(self.counts[i])

    @property
    def total(self) -> int:
        return int(self.counts.sum())


@dataclass
class ResidualRecord:
    n: int
    modulus: int
    box: BoxSpec
    exact_count: int
    main_term: Fraction
    residual: Fraction = field(init=False)

    def __post_init__(self):
        self.residual = self.exact_count - self.main_term

    @property
    def normalized_exponent(self) -> float | None:
        if self.residual == 0 or self.modulus < 2:
            return None
        return math.log(abs(self.residual)) / math.log(self.modulus)


def _product_distribution(h1: int, h2: int) -> tuple[int, np.ndarray]:
    """Exact distribution of a*d for |a| <= h1, |d| <= h2."""
    a = np.arange(-h1, h1 + 1, dtype=np.int64)
    d = np.arange(-h2, h2 + 1, dtype=np.int64)
    off = h1 * h2
    return off, np.bincount((np.outer(a, d) + off).ravel(), minlength=2 * off + 1)


def _residue_counts(h: int, m: int) -> np.ndarray:
    """#{a in [-h, h] : a = r (mod m)} for r in [0, m)."""
    r = np.arange(m, dtype=np.int64)
    return (h - r) // m - (-h - 1 - r) // m


def _product_residues(h1: int, h2: int, m: int) -> np.ndarray:
    """c_v = #{(a, d) : |a| <= h1, |d| <= h2, ad = v (mod m)}.

    Uses whichever is smaller: the (2h1+1)(2h2+1) products or the m^2
    residue pairs weighted by class sizes.
    """
    if (2 * h1 + 1) * (2 * h2 + 1) <= m * m:
        a = np.arange(-h1, h1 + 1, dtype=np.int64)
        d = np.arange(-h2, h2 + 1, dtype=np.int64)
        return np.bincount((np.outer(a, d) % m).ravel(), minlength=m)
    r = np.arange(m, dtype=np.int64)
    out = np.zeros(m, dtype=np.int64)
    np.add.at(out, (np.outer(r, r) % m).ravel(),
              np.outer(_residue_counts(h1, m), _residue_counts(h2, m)).ravel())
    return out


@lru_cache(maxsize=64)
def det_distribution(box: BoxSpec, *, budget: int | None = None, workers: int = 1) -> DetDistribution:
    """Exact distribution of det A over the box."""
    n, H = box.n, box.bounds
    if n == 1:
        off = H[0]
        return DetDistribution(off, np.ones(2 * off + 1, dtype=np.int64))
    if n == 2:
        o1, p_ad = _product_distribution(H[0], H[3])
        o2, p_bc = _product_distribution(H[1], H[2])
        # det = ad - bc; reversing p_bc gives the distribution of -bc
        return DetDistribution(o1 + o2, np.convolve(p_ad, p_bc[::-1]))
    check_budget(f"det_distribution(n={n})", box.size, budget)
    if box.max_det >= INT64_SAFE:
        raise DomainError("determinants exceed int64 range; use brute_det_distribution")
    radii = H[: n * (n - 1)]
    radices = [2 * h + 1 for h in radii]
    shift = np.array(radii, dtype=np.int64)
    last = digits(np.arange(math.prod(2 * h + 1 for h in H[-n:])), [2 * h + 1 for h in H[-n:]])
    last = last - np.array(H[-n:], dtype=np.int64)
    off = box.max_det

    def chunk(r):
        tops = (digits(np.arange(*r), radices) - shift).reshape(-1, n - 1, n)
        cof, wts = np.unique(last_row_cofactors(tops), axis=0, return_counts=True)
        dets = cof @ last.T
        out = np.zeros(2 * off + 1, dtype=np.int64)
        np.add.at(out, (dets + off).ravel(), np.repeat(wts, last.shape[0]))
        return out

    counts = map_reduce(chunk, index_chunks(math.prod(radices)), np.add, workers)
    return DetDistribution(off, counts)


def count_box(n: int, m: int, H: "int | BoxSpec | Sequence[int]", *,
              budget: int | None = None) -> int:
    """N_n(m; H): matrices in the box with det = 0 (mod m)."""
    if m < 1:
        raise DomainError("modulus must be >= 1")
    box = BoxSpec.of(n, H)
    if n == 2:
        b = box.bounds
        c_ad = _product_residues(b[0], b[3], m)
        c_bc = _product_residues(b[1], b[2], m)
        return int(np.dot(c_ad, c_bc))
    dist = det_distribution(box, budget=budget)
    ks = np.arange(dist.counts.size) - dist.offset
    return int(dist.counts[ks % m == 0].sum())


count_box_general = count_box


def count_box_enumerate(n: int, m: int, H: "int | BoxSpec | Sequence[int]") -> int:
    """Pure-Python enumeration with exact determinants; oracle for small boxes."""
    box = BoxSpec.of(n, H)
    check_budget("count_box_enumerate", box.size, 2 * 10**6)
    ranges = [range(-h, h + 1) for h in box.bounds]
    return sum(1 for e in itertools.product(*ranges)
               if det_exact([e[i * n:(i + 1) * n] for i in range(n)]) % m == 0)


def brute_det_distribution(n: int, H: "int | BoxSpec | Sequence[int]") -> dict[int, int]:
    box = BoxSpec.of(n, H)
    check_budget("brute_det_distribution", box.size, 2 * 10**6)
    out: dict[int, int] = {}
    for e in itertools.product(*[range(-h, h + 1) for h in box.bounds]):
        k = det_exact([e[i * n:(i + 1) * n] for i in range(n)])
        out[k] = out.get(k, 0) + 1
    return out


def main_term(n: int, m: int, H: "int | BoxSpec | Sequence[int]") -> Fraction:
    box = BoxSpec.of(n, H)
    return Fraction(singular_count(n, m) * box.size, m ** (n * n))


def residual_record(n: int, m: int, H: "int | BoxSpec | Sequence[int]", *,
                    budget: int | None = None) -> ResidualRecord:
    box = BoxSpec.of(n, H)
    return ResidualRecord(n, m, box, count_box(n, m, box, budget=budget), main_term(n, m, box))


@dataclass
class ResidualReport:
    records: list[ResidualRecord]
    slope: float | None  # fitted d-exponent of |residual|, reported only


def residual_report(n: int, ds: Sequence[int], Hs: "Sequence[int] | None" = None, *,
                    square: bool = False, ratio: float | None = None,
                    budget: int | None = None) -> ResidualReport:
    """Residuals of N_n(m; H) against the equidistributed main term, m = d or d^2.

    Either sweep every (d, H) in ``ds x Hs``, or with ``ratio`` set use
    H = round(ratio * m) per d and fit log|residual| against log d.
    """
    records = []
    for d in ds:
        m = d * d if square else d
        for H in ([max(1, round(ratio * m))] if ratio is not None else Hs):
            records.append(residual_record(n, m, H, budget=budget))
    slope = None
    if ratio is not None:
        pts = [(math.log(math.isqrt(r.modulus) if square else r.modulus), math.log(abs(r.residual)))
               for r in records if r.residual != 0 and r.modulus > 1]
        if len(pts) >= 2:
            xs, ys = zip(*pts)
            slope = float(np.polyfit(xs, ys, 1)[0])
    return ResidualReport(records, slope)


def count_fixed_det(n: int, H: "int | BoxSpec | Sequence[int]", a: int, *,
                    budget: int | None = None) -> int:
    """#{A in box : det A = a}."""
    box = BoxSpec.of(n, H)
    if abs(a) > box.max_det:
        return 0
    return det_distribution(box, budget=budget)[a]


@dataclass
class FixedDetRow:
    H: int
    argmax: int
    max_count: int
    normalized: float  # max_count / (H^(n^2-n) log(H+1))


def fixed_det_max_report(n: int, Hs: Sequence[int], *, budget: int | None = None) -> list[FixedDetRow]:
    rows = []
    for H in Hs:
        dist = det_distribution(BoxSpec.uniform(n, H), budget=budget)
        i = int(np.argmax(dist.counts))
        c = int(dist.counts[i])
        rows.append(FixedDetRow(H, i - dist.offset, c, c / (H ** (n * n - n) * math.log(H + 1))))
    return rows
