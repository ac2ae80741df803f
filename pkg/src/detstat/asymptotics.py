"""Square-free determinant counts, the Euler-function sum, and their sieve forms.

The sieve pipelines use N*_n(m; H), the box count with det = 0 (mod m) *and*
det != 0.  Zero determinants would otherwise enter every Moebius term and
the inclusion-exclusion identities would only hold up to that error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .boxes import BoxSpec, count_box, count_fixed_det, det_distribution
from .constants import euler_constant_S, euler_constant_sigma
from .core import DomainError, build_sieves, hadamard_range

KINDS = ("squarefree", "phi")


def _sieves_for(n: int, H: int, factor: int = 1):
    return build_sieves(max(2, factor * hadamard_range(n, H)))


def squarefree_direct(n: int, H: int, *, budget: int | None = None) -> int:
    """S_n(H): matrices in [-H, H]^(n x n) whose determinant is nonzero and square-free."""
    dist = det_distribution(BoxSpec.uniform(n, H), budget=budget)
    sv = _sieves_for(n, H)
    return sum(c for k, c in dist.items() if sv.squarefree(k))


def nonzero_box_count(n: int, m: int, H: int, *, budget: int | None = None) -> int:
    """N*_n(m; H) = #{A : det A = 0 (mod m), det A != 0}."""
    return count_box(n, m, H, budget=budget) - count_fixed_det(n, H, 0, budget=budget)


def squarefree_sieve(n: int, H: int, *, cutoff: int | None = None,
                     budget: int | None = None) -> int:
    """S_n(H) as sum_{d <= sqrt(n! H^n)} mu(d) N*_n(d^2; H)."""
    d_max = cutoff if cutoff is not None else math.isqrt(hadamard_range(n, H))
    sv = build_sieves(max(2, d_max))
    return sum(sv.mu(d) * nonzero_box_count(n, d * d, H, budget=budget)
               for d in range(1, d_max + 1) if sv.mu(d))


def phi_sum_direct(n: int, H: int, *, budget: int | None = None) -> Fraction:
    """Sum of phi(|det A|)/|det A| over the box, det A != 0."""
    dist = det_distribution(BoxSpec.uniform(n, H), budget=budget)
    sv = _sieves_for(n, H)
    by_abs: dict[int, int] = {}
    for k, c in dist.items():
        if k:
            by_abs[abs(k)] = by_abs.get(abs(k), 0) + c
    return sum((Fraction(c * sv.phi(k), k) for k, c in by_abs.items()), Fraction(0))


def phi_sum_sieve(n: int, H: int, *, cutoff: int | None = None,
                  budget: int | None = None) -> Fraction:
    """Sum of phi(|det A|)/|det A| as sum_{d <= n! H^n} mu(d)/d N*_n(d; H)."""
    d_max = cutoff if cutoff is not None else hadamard_range(n, H)
    sv = build_sieves(max(2, d_max))
    return sum((Fraction(sv.mu(d) * nonzero_box_count(n, d, H, budget=budget), d)
                for d in range(1, d_max + 1) if sv.mu(d)), Fraction(0))


# ---------------------------------------------------------------------------
# main/error split at a threshold
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SplitPlan:
    n: int
    H: int
    delta: int
    d_max: int
    kind: str

    def __post_init__(self):
        if not 1 <= self.delta <= self.d_max:
            raise DomainError(f"threshold {self.delta} outside [1, {self.d_max}]")


def split_plan(n: int, H: int, kind: str, delta: int | None = None) -> SplitPlan:
    if kind not in KINDS:
        raise DomainError(f"kind must be one of {KINDS}")
    hr = hadamard_range(n, H)
    d_max = math.isqrt(hr) if kind == "squarefree" else hr
    if delta is None:
        delta = min(d_max, max(1, math.floor(delta_choice(n, H, kind))))
    return SplitPlan(n, H, delta, d_max, kind)


def split_sums(plan: SplitPlan, *, budget: int | None = None) -> tuple[Fraction, Fraction]:
    """(main, error) parts of the sieve sum, split at the plan's threshold."""
    sv = build_sieves(max(2, plan.d_max))
    main = err = Fraction(0)
    for d in range(1, plan.d_max + 1):
        mu = sv.mu(d)
        if not mu:
            continue
        if plan.kind == "squarefree":
            term = Fraction(mu * nonzero_box_count(plan.n, d * d, plan.H, budget=budget))
        else:
            term = Fraction(mu * nonzero_box_count(plan.n, d, plan.H, budget=budget), d)
        if d <= plan.delta:
            main += term
        else:
            err += term
    return main, err


# ---------------------------------------------------------------------------
# exponents
# ---------------------------------------------------------------------------


def exponent_gamma(n: int) -> Fraction:
    """Power saving in the square-free count: 1/2 + (n-1)/(2(n^3+3n^2-n+1))."""
    if n < 2:
        raise DomainError("n must be >= 2")
    return Fraction(1, 2) + Fraction(n - 1, 2 * (n**3 + 3 * n**2 - n + 1))


def exponent_theta(n: int) -> Fraction:
    """Power saving in the Euler-function sum: 1 - 1/(n^3+1)."""
    if n < 2:
        raise DomainError("n must be >= 2")
    return 1 - Fraction(1, n**3 + 1)


def delta_exponent(n: int, kind: str) -> Fraction:
    if n < 2:
        raise DomainError("n must be >= 2")
    if kind == "squarefree":
        return Fraction(n * n * (n + 3), 2 * n * n * (n + 3) - 2 * n + 2)
    if kind == "phi":
        return Fraction(n**3, n**3 + 1)
    raise DomainError(f"kind must be one of {KINDS}")


def delta_choice(n: int, H: int, kind: str) -> float:
    if H < 2:
        raise DomainError("H must be >= 2")
    return float(H) ** float(delta_exponent(n, kind))


# ---------------------------------------------------------------------------
# convergence of densities
# ---------------------------------------------------------------------------


@dataclass
class ConvergenceRow:
    H: int
    box_size: int
    squarefree_count: int
    phi_sum: Fraction
    squarefree_density: Fraction
    phi_density: Fraction
    predicted_squarefree: float  # 2^(n^2) S H^(n^2) / (2H+1)^(n^2)
    predicted_phi: float
    gap_squarefree: float        # |density - predicted|
    gap_phi: float
    gap_to_constant: float       # |density - S|


@dataclass
class ConvergenceTable:
    n: int
    rows: list[ConvergenceRow]
    constant_S: float
    constant_sigma: float
    slope_squarefree: float | None
    slope_phi: float | None


def _fit_slope(Hs: Sequence[int], gaps: Sequence[float]) -> float | None:
    pts = [(math.log(h), math.log(g)) for h, g in zip(Hs, gaps) if g > 0]
    if len(pts) < 2:
        return None
    xs, ys = zip(*pts)
    return float(np.polyfit(xs, ys, 1)[0])


def convergence_study(n: int, Hs: Sequence[int], *, prime_limit: int = 10**5,
                      budget: int | None = None) -> ConvergenceTable:
    S = float(euler_constant_S(n, prime_limit).mid)
    sigma = float(euler_constant_sigma(n, prime_limit).mid)
    rows = []
    for H in Hs:
        size = (2 * H + 1) ** (n * n)
        sf = squarefree_direct(n, H, budget=budget)
        ph = phi_sum_direct(n, H, budget=budget)
        scale = 2 ** (n * n) * H ** (n * n) / size
        dsf, dph = Fraction(sf, size), ph / size
        rows.append(ConvergenceRow(
            H, size, sf, ph, dsf, dph, S * scale, sigma * scale,
            abs(float(dsf) - S * scale), abs(float(dph) - sigma * scale), abs(float(dsf) - S)))
    return ConvergenceTable(
        n, rows, S, sigma,
        _fit_slope([r.H for r in rows], [r.gap_squarefree for r in rows]),
        _fit_slope([r.H for r in rows], [r.gap_phi for r in rows]))


