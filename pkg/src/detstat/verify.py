"""Runnable checks, grouped into suites named by the result they exercise.

Suite tags: L2.1 singular counts mod d and d^2, L2.2 fixed-determinant
counts, L3.1 CRT factorisation, L3.3 linear sections, L3.4 first-column sums,
L3.5 general sums mod p, L3.6 sums mod p^2, L3.7 composite square-free
moduli, C3.9 composite square moduli, L4.2 / L4.3 box counts mod d / d^2,
T1.1 square-free counts, T1.2 Euler-function sums.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import goldens
from .asymptotics import (
    delta_exponent,
    exponent_gamma,
    exponent_theta,
    phi_sum_direct,
    phi_sum_sieve,
    squarefree_direct,
    squarefree_sieve,
)
from .boxes import (
    BoxSpec,
    count_box,
    count_box_enumerate,
    count_fixed_det,
    det_distribution,
    fixed_det_max_report,
    residual_record,
)
from .constants import euler_constant_S, euler_constant_sigma, zeta_product_S, zeta_series
from .core import LinearForm, build_sieves
from .counts import (
    closed_form_N,
    closed_form_N_sq,
    linear_section_count,
    linear_section_oracle,
    oracle_singular_count,
    prime_recurrence_N,
)
from .expsums import (
    CRT_TOL,
    bound_report_composite,
    bound_report_prime,
    bound_report_prime_sq,
    crt_histogram,
    crt_product,
    eval_expsum,
    iter_forms,
    monomial_exact,
)


@dataclass
class Check:
    suite: str
    name: str
    expected: object
    actual: object
    passed: bool

    def as_dict(self) -> dict:
        return {"suite": self.suite, "name": self.name, "expected": _show(self.expected),
                "actual": _show(self.actual), "passed": self.passed}


def _show(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, (list, tuple)):
        return [_show(v) for v in x]
    if isinstance(x, (int, float, str, bool)) or x is None:
        return x
    return str(x)


def _eq(suite, name, expected, actual) -> Check:
    return Check(suite, name, expected, actual, expected == actual)


def _random_forms(n: int, count: int, seed: int, high: int = 1000) -> list[LinearForm]:
    rng = np.random.default_rng(seed)
    return [LinearForm(n, tuple(int(x) for x in rng.integers(-high, high, n * n)))
            for _ in range(count)]


def suite_L2_1() -> list[Check]:
    out = []
    sv = build_sieves(12)
    for d in range(1, 13):
        if sv.mu(d):
            out.append(_eq("L2.1", f"N_2({d})", oracle_singular_count(2, d), closed_form_N(2, d)))
    for d in range(1, 7):
        if sv.mu(d):
            out.append(_eq("L2.1", f"N_2({d}^2)", oracle_singular_count(2, d * d), closed_form_N_sq(2, d)))
    for d in (2, 3):
        out.append(_eq("L2.1", f"N_3({d}^2)", oracle_singular_count(3, d * d), closed_form_N_sq(3, d)))
    for m, v in ((2, 10), (3, 33), (6, 330), (4, 88), (9, 945)):
        out.append(_eq("L2.1", f"anchor N_2({m})", v, oracle_singular_count(2, m)))
    return out


def suite_L2_2() -> list[Check]:
    out = [
        _eq("L2.2", "#det=0, H=1", 33, count_fixed_det(2, 1, 0)),
        _eq("L2.2", "#det=1, H=1", 20, count_fixed_det(2, 1, 1)),
        _eq("L2.2", "#det=5, H=1", 0, count_fixed_det(2, 1, 5)),
        _eq("L2.2", "sum over a, H=1", 81, det_distribution(BoxSpec.uniform(2, 1)).total),
    ]
    rows = fixed_det_max_report(2, [1, 2, 4, 8, 16, 32])
    out.append(_eq("L2.2", "max at H=2", 129, rows[1].max_count))
    out.append(Check("L2.2", "max nondecreasing in H", True,
                     all(a.max_count <= b.max_count for a, b in zip(rows, rows[1:])),
                     all(a.max_count <= b.max_count for a, b in zip(rows, rows[1:]))))
    bound = max(r.normalized for r in rows)
    out.append(Check("L2.2", "max / (H^2 log(H+1)) bounded by 50", "<= 50", bound, bound <= 50))
    return out


def suite_L3_1() -> list[Check]:
    out = []
    x11 = LinearForm.monomial(2, 0, 0)
    r4 = eval_expsum(2, 4, x11)
    out.append(_eq("L3.1", "S_4(x11) histogram", (32, 16, 24, 16), r4.histogram))
    out.append(Check("L3.1", "S_4(x11) = 8", 8.0, r4.value, abs(r4.value - 8) <= CRT_TOL))
    prod, _ = crt_product(2, 6, x11)
    out.append(Check("L3.1", "S_6(x11) = S_2 S_3 = 12", 12.0, prod, abs(prod - 12) <= CRT_TOL))
    for d in (6, 10, 15):
        worst = 0.0
        hist_ok = True
        for f in _random_forms(2, 20, seed=d):
            direct = eval_expsum(2, d, f.reduced(d))
            prod, _ = crt_product(2, d, f)
            worst = max(worst, abs(direct.value - prod))
            hist_ok &= list(direct.histogram) == crt_histogram(2, d, f)
        out.append(Check("L3.1", f"product identity d={d}, 20 forms", f"<= {CRT_TOL}", worst,
                         worst <= CRT_TOL))
        out.append(Check("L3.1", f"histogram identity d={d}", True, hist_ok, hist_ok))
    f = LinearForm.parse("1,2;3,5")
    direct = eval_expsum(2, 36, f)
    prod, _ = crt_product(2, 6, f, square=True)
    out.append(Check("L3.1", "square modulus 36", f"<= {CRT_TOL}", abs(direct.value - prod),
                     abs(direct.value - prod) <= CRT_TOL))
    return out


def suite_L3_3() -> list[Check]:
    out = []
    for n, p in ((2, 2), (2, 3), (2, 5), (3, 2), (3, 3)):
        expected = linear_section_count(n, p, LinearForm.first_column([1] + [0] * (n - 1)))
        bad = [f.format() for f in iter_forms(n, p, "first-column")
               if linear_section_oracle(n, p, f) != expected]
        out.append(Check("L3.3", f"n={n} p={p} all first-column forms", expected,
                         "mismatch: " + ",".join(bad) if bad else expected, not bad))
    for (n, p), v in (((2, 2), 6), ((2, 3), 15), ((3, 2), 184)):
        out.append(_eq("L3.3", f"anchor n={n} p={p}", v,
                       linear_section_oracle(n, p, LinearForm.first_column([1] + [0] * (n - 1)))))
    return out


def suite_L3_4() -> list[Check]:
    out = []
    for n in (2, 3):
        for p in (2, 3, 5):
            exact = monomial_exact(n, p)
            worst = max(abs(eval_expsum(n, p, f).value - exact)
                        for f in iter_forms(n, p, "first-column"))
            out.append(Check("L3.4", f"first-column sums n={n} p={p}", exact, worst, worst <= CRT_TOL))
    for (n, p), v in (((2, 2), 2), ((2, 3), 6), ((3, 2), 24)):
        out.append(_eq("L3.4", f"anchor n={n} p={p}", v, monomial_exact(n, p)))
    for p in (2, 3, 5, 7):
        for n in range(1, 5):
            out.append(_eq("L3.4", f"recurrence N_{n}({p})", closed_form_N(n, p), prime_recurrence_N(n, p)))
    return out


def suite_L3_5() -> list[Check]:
    out = []
    prev = None
    for p in (2, 3, 5, 7):
        rep = bound_report_prime(2, p, "all-nontrivial")
        pinned = goldens.PRIME_SWEEP_MAX_N2[p] / p**2.5
        ratio = rep.max_ratio["general"]
        out.append(Check("L3.5", f"p={p} max ratio <= pinned", pinned, ratio, ratio <= pinned * (1 + 1e-9)))
        if prev is not None:
            out.append(Check("L3.5", f"p={p} growth <= 10%", "<= 1.10", ratio / prev, ratio / prev <= 1.10))
        prev = ratio
    return out


def suite_L3_6() -> list[Check]:
    out = []
    for p, pinned in goldens.PRIME_SQUARE_MAX_RATIO_N2.items():
        ratio = bound_report_prime_sq(2, p, sample=20, seed=0).max_ratio["prime_square"]
        out.append(Check("L3.6", f"p={p} ratio <= pinned", pinned, ratio, ratio <= pinned * (1 + 1e-9)))
    r = bound_report_prime_sq(2, 2, [LinearForm.monomial(2, 0, 0), LinearForm.monomial(2, 0, 0, 2)])
    out.append(_eq("L3.6", "form vanishing mod p is excluded", 1, len(r.rows)))
    return out


def suite_L3_7() -> list[Check]:
    out = []
    x11 = LinearForm.monomial(2, 0, 0)
    row = bound_report_composite(2, 6, x11, "d")
    out.append(Check("L3.7", "|S_6(x11)| / 36", 1 / 3, row.ratios["composite"],
                     abs(row.ratios["composite"] - 1 / 3) <= 1e-9))
    row = bound_report_composite(2, 6, x11.scaled(6), "d")
    out.append(Check("L3.7", "vanishing form gives N_2(6)", 330, row.magnitude, abs(row.magnitude - 330) <= 1e-6))
    worst = 0.0
    for d in (6, 10, 15, 30):
        for f in [x11, LinearForm.parse("1,1;0,0"), LinearForm.parse("1,0;0,1")] + _random_forms(2, 5, d):
            worst = max(worst, bound_report_composite(2, d, f, "d").ratios["composite"])
    out.append(Check("L3.7", "all ratios <= 1", "<= 1", worst, worst <= 1))
    return out


def suite_C3_9() -> list[Check]:
    out = []
    for d in (2, 3, 6):
        for f in (LinearForm.monomial(2, 0, 0), LinearForm.parse("2,0;0,0"), LinearForm.parse("1,2;3,5")):
            row = bound_report_composite(2, d, f, "d2")
            sharp, simple = row.ratios["square_sharp"], row.ratios["square_simple"]
            out.append(Check("C3.9", f"d={d} L={f.format()} sharp scale <= simple scale", "<=",
                             [row.scales["square_sharp"], row.scales["square_simple"]],
                             row.scales["square_sharp"] <= row.scales["square_simple"] * (1 + 1e-12)))
            out.append(Check("C3.9", f"d={d} L={f.format()} ratio finite", "finite", [sharp, simple],
                             math.isfinite(sharp) and math.isfinite(simple)))
    return out


def _box_suite(tag: str, square: bool) -> list[Check]:
    out = []
    for m, H, v in ((2, 1, 41), (4, 1, 33), (3, 10, 79233)):
        out.append(_eq(tag, f"N_2({m}; {H})", v, count_box(2, m, H)))
    zero = [(m, H) for m in range(1, 7) for H in range(1, 21)
            if (2 * H + 1) % m == 0 and residual_record(2, m, H).residual != 0]
    out.append(Check(tag, "residual 0 when m | 2H+1", [], zero, not zero))
    bad = [(m, H) for m in range(1, 7) for H in range(1, 4)
           if count_box(2, m, H) != count_box_enumerate(2, m, H)]
    out.append(Check(tag, "fast path equals enumeration, m<=6, H<=3", [], bad, not bad))
    moduli = [d * d for d in (2, 3)] if square else [2, 3, 5, 6]
    for m in moduli:
        r = residual_record(2, m, 2 * m)
        out.append(Check(tag, f"residual bookkeeping m={m}",
                         str(r.exact_count - r.main_term), str(r.residual),
                         r.exact_count - r.main_term == r.residual))
    if square:
        out.append(_eq(tag, "residual N_2(4; 1)", Fraction(165, 32), residual_record(2, 4, 1).residual))
    else:
        out.append(_eq(tag, "residual N_2(2; 1)", Fraction(-77, 8), residual_record(2, 2, 1).residual))
    return out


def suite_L4_2() -> list[Check]:
    return _box_suite("L4.2", square=False)


def suite_L4_3() -> list[Check]:
    return _box_suite("L4.3", square=True)


def suite_T1_1() -> list[Check]:
    out = [_eq("T1.1", "S_2(1)", 48, squarefree_direct(2, 1)),
           _eq("T1.1", "S_2(2)", 384, squarefree_direct(2, 2))]
    for n, Hs in ((2, range(1, 9)), (3, (1, 2))):
        for H in Hs:
            out.append(_eq("T1.1", f"sieve = direct n={n} H={H}", squarefree_direct(n, H), squarefree_sieve(n, H)))
    c = euler_constant_S(2, 10**6)
    z = zeta_product_S(2)
    out.append(Check("T1.1", "interval width", "<= 1e-8", float(c.width), c.width <= 1e-8))
    out.append(Check("T1.1", "contains 1/(zeta(2) zeta(3))", str(z), [str(c.lo), str(c.hi)], c.lo <= z <= c.hi))
    out.append(Check("T1.1", "midpoint agrees with zeta oracle", "<= 1e-9", float(abs(c.mid - z)),
                     abs(c.mid - z) <= 1e-9))
    c1 = euler_constant_S(1, 10**6)
    inv = 1 / zeta_series(2)
    out.append(Check("T1.1", "n=1 contains 1/zeta(2)", str(inv), [str(c1.lo), str(c1.hi)], c1.lo <= inv <= c1.hi))
    for n in (2, 3, 4):
        out.append(_eq("T1.1", f"threshold exponent = gamma_{n}", exponent_gamma(n), delta_exponent(n, "squarefree")))
    out.append(_eq("T1.1", "gamma_2", Fraction(10, 19), exponent_gamma(2)))
    out.append(_eq("T1.1", "gamma_3", Fraction(27, 52), exponent_gamma(3)))
    for H, g in goldens.SQUAREFREE_DENSITY_N2.items():
        out.append(_eq("T1.1", f"density golden H={H}", g, Fraction(squarefree_direct(2, H), (2 * H + 1) ** 4)))
    return out


def suite_T1_2() -> list[Check]:
    out = [_eq("T1.2", "Phi_2(1)", Fraction(44), phi_sum_direct(2, 1)),
           _eq("T1.2", "Phi_2(2)", Fraction(4612, 15), phi_sum_direct(2, 2))]
    for n, Hs in ((2, range(1, 9)), (3, (1, 2))):
        for H in Hs:
            out.append(_eq("T1.2", f"sieve = direct n={n} H={H}", phi_sum_direct(n, H), phi_sum_sieve(n, H)))
    c = euler_constant_sigma(1, 10**6)
    inv = 1 / zeta_series(2)
    out.append(Check("T1.2", "n=1 contains 1/zeta(2)", str(inv), [str(c.lo), str(c.hi)], c.lo <= inv <= c.hi))
    c2 = euler_constant_sigma(2, 10**6)
    out.append(Check("T1.2", "n=2 interval width", "<= 1e-8", float(c2.width), c2.width <= 1e-8))
    for n in (2, 3, 4):
        out.append(_eq("T1.2", f"threshold exponent = theta_{n}", exponent_theta(n), delta_exponent(n, "phi")))
    out.append(_eq("T1.2", "theta_2", Fraction(8, 9), exponent_theta(2)))
    out.append(_eq("T1.2", "theta_3", Fraction(27, 28), exponent_theta(3)))
    return out


SUITES: dict[str, Callable[[], list[Check]]] = {
    "L2.1": suite_L2_1,
    "L2.2": suite_L2_2,
    "L3.1": suite_L3_1,
    "L3.3": suite_L3_3,
    "L3.4": suite_L3_4,
    "L3.5": suite_L3_5,
    "L3.6": suite_L3_6,
    "L3.7": suite_L3_7,
    "C3.9": suite_C3_9,
    "L4.2": suite_L4_2,
    "L4.3": suite_L4_3,
    "T1.1": suite_T1_1,
    "T1.2": suite_T1_2,
}


def run_suite(tag: str) -> list[Check]:
    if tag == "all":
        return [c for fn in SUITES.values() for c in fn()]
    if tag not in SUITES:
        raise KeyError(tag)
    return SUITES[tag]()

