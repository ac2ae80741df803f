import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from detstat.core import BudgetExceeded, DomainError, LinearForm
from detstat.counts import singular_count
from detstat.expsums import (
    CRT_TOL,
    ExpSumResult,
    bound_report_composite,
    bound_report_prime,
    bound_report_prime_sq,
    brute_expsum,
    crt_histogram,
    crt_product,
    crt_split,
    eval_expsum,
    exact_real,
    gcd_decompose_sq,
    histogram_scaled,
    iter_forms,
    monomial_exact,
    symmetry_images,
    unit_root,
)

forms2 = st.lists(st.integers(-50, 50), min_size=4, max_size=4).map(lambda c: LinearForm(2, tuple(c)))


def test_unit_root_axes_exact():
    assert unit_root(0, 4) == 1
    assert unit_root(1, 4) == 1j
    assert unit_root(2, 4) == -1
    assert unit_root(3, 6) == -1
    assert abs(unit_root(1, 3) - complex(-0.5, math.sqrt(3) / 2)) < 1e-15


def test_worked_values():
    x11 = LinearForm.monomial(2, 0, 0)
    assert eval_expsum(2, 2, x11).histogram == (6, 4)
    assert eval_expsum(2, 2, x11).value == 2
    assert eval_expsum(2, 4, x11).histogram == (32, 16, 24, 16)
    assert eval_expsum(2, 4, x11).value == 8
    assert eval_expsum(2, 3, LinearForm.parse("1,0;0,1")).value == pytest.approx(-3)
    assert eval_expsum(2, 2, LinearForm.parse("1,0;0,1")).value == -2
    assert exact_real(eval_expsum(2, 6, x11)) is None
    assert exact_real(eval_expsum(2, 2, x11)) == 2


@given(forms2, st.integers(1, 6))
def test_matches_brute_force(form, m):
    fast = eval_expsum(2, m, form.reduced(m))
    assert fast.histogram == brute_expsum(2, m, form).histogram
    assert fast.mass == singular_count(2, m)


@settings(max_examples=15)
@given(st.lists(st.integers(0, 2), min_size=9, max_size=9))
def test_matches_brute_force_n3(coeffs):
    form = LinearForm(3, tuple(coeffs))
    assert eval_expsum(3, 3, form).histogram == brute_expsum(3, 3, form).histogram


@given(forms2, st.sampled_from([5, 7]), st.integers(1, 6))
def test_unit_scaling_permutes_histogram(form, p, lam):
    if lam % p:
        h = eval_expsum(2, p, form.reduced(p)).histogram
        assert tuple(histogram_scaled(h, lam)) == eval_expsum(2, p, form.scaled(lam).reduced(p)).histogram


@given(forms2)
def test_transpose_invariance(form):
    assert eval_expsum(2, 5, form.reduced(5)).histogram == eval_expsum(2, 5, form.transposed().reduced(5)).histogram


@given(forms2, st.sampled_from([6, 10, 15, 30]))
def test_crt_identity(form, d):
    direct = eval_expsum(2, d, form.reduced(d))
    prod, _ = crt_product(2, d, form)
    assert abs(direct.value - prod) <= CRT_TOL
    assert list(direct.histogram) == crt_histogram(2, d, form)


@settings(max_examples=8)
@given(forms2)
def test_crt_identity_square(form):
    d = 6
    direct = eval_expsum(2, d * d, form.reduced(d * d))
    prod, _ = crt_product(2, d, form, square=True)
    assert abs(direct.value - prod) <= CRT_TOL * max(1.0, abs(prod))


def test_crt_weights():
    parts = crt_split(30, LinearForm.monomial(2, 0, 0))
    for part in parts:
        assert (30 // part.modulus) * part.weight % part.modulus == 1
    with pytest.raises(DomainError):
        crt_split(12, LinearForm.monomial(2, 0, 0))


@pytest.mark.parametrize("n,p", [(2, 2), (2, 3), (2, 5), (3, 2), (3, 3)])
def test_first_column_family_is_constant(n, p):
    exact = monomial_exact(n, p)
    for f in iter_forms(n, p, "first-column"):
        assert eval_expsum(n, p, f).value == pytest.approx(exact, abs=1e-6)


def test_vanishing_form_gives_count():
    assert eval_expsum(2, 6, LinearForm.zero(2)).value == singular_count(2, 6)


def test_family_sizes_and_symmetry():
    assert len(list(iter_forms(2, 3, "all-nontrivial"))) == 80
    assert len(list(iter_forms(2, 3, "monomial"))) == 8
    assert len(list(iter_forms(3, 2, "first-column"))) == 7
    assert len(symmetry_images(LinearForm.monomial(2, 0, 0))) == 4
    full = bound_report_prime(2, 3)
    reduced = bound_report_prime(2, 3, up_to_symmetry=True)
    assert sum(r.orbit_size for r in reduced.rows) == len(full.rows)
    assert reduced.max_magnitude == pytest.approx(full.max_magnitude)
    with pytest.raises(DomainError):
        list(iter_forms(2, 3, "nope"))


def test_budget_refusal():
    with pytest.raises(BudgetExceeded):
        eval_expsum(2, 11, LinearForm.monomial(2, 0, 0), budget=100)


def test_prime_square_report_filters():
    rep = bound_report_prime_sq(2, 3, [LinearForm.parse("3,6;0,0"), LinearForm.monomial(2, 0, 0)])
    assert len(rep.rows) == 1
    assert rep.modulus == 9


def test_gcd_decomposition():
    assert gcd_decompose_sq(LinearForm.parse("4,0;0,0"), 6) == (4, 1, 2)
    assert gcd_decompose_sq(LinearForm.parse("12,0;0,0"), 6) == (12, 3, 2)
    assert gcd_decompose_sq(LinearForm.parse("1,0;0,0"), 6) == (1, 1, 1)
    with pytest.raises(DomainError):
        gcd_decompose_sq(LinearForm.zero(2), 6)


def test_composite_rows():
    row = bound_report_composite(2, 6, LinearForm.monomial(2, 0, 0))
    assert row.magnitude == pytest.approx(12)
    assert row.scales["composite"] == pytest.approx(6**4 * (1 / 6) ** 2)
    sq = bound_report_composite(2, 6, LinearForm.parse("1,2;3,5"), "d2")
    assert sq.scales["square_sharp"] <= sq.scales["square_simple"]
    with pytest.raises(DomainError):
        bound_report_composite(2, 6, LinearForm.zero(2), "x")


def test_result_validates_length():
    with pytest.raises(DomainError):
        ExpSumResult.from_histogram(3, [1, 2])
    r = ExpSumResult.from_histogram(4, np.array([3, 0, 1, 0]))
    assert r.value == 2 and r.mass == 4
