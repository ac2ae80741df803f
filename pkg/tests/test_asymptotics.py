from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from detstat import goldens
from detstat.asymptotics import (
    convergence_study,
    delta_choice,
    delta_exponent,
    exponent_gamma,
    exponent_theta,
    nonzero_box_count,
    phi_sum_direct,
    phi_sum_sieve,
    split_plan,
    split_sums,
    squarefree_direct,
    squarefree_sieve,
)
from detstat.core import DomainError


def test_anchors():
    assert squarefree_direct(2, 1) == 48
    assert squarefree_direct(2, 2) == 384
    assert nonzero_box_count(2, 2, 1) == 41 - 33
    assert phi_sum_direct(2, 1) == 44
    assert phi_sum_direct(2, 2) == Fraction(4612, 15)
    assert phi_sum_direct(1, 2) == 3


@pytest.mark.parametrize("H", range(1, 7))
def test_sieves_match_direct(H):
    assert squarefree_sieve(2, H) == squarefree_direct(2, H)
    assert phi_sum_sieve(2, H) == phi_sum_direct(2, H)


def test_goldens():
    for H in (1, 2, 5, 10):
        assert Fraction(squarefree_direct(2, H), (2 * H + 1) ** 4) == goldens.SQUAREFREE_DENSITY_N2[H]
    for H, v in goldens.PHI_SUM_N2.items():
        assert phi_sum_direct(2, H) == v


@given(st.integers(2, 6), st.sampled_from(["squarefree", "phi"]))
def test_split_reassembles(H, kind):
    plan = split_plan(2, H, kind)
    main, err = split_sums(plan)
    whole = squarefree_direct(2, H) if kind == "squarefree" else phi_sum_direct(2, H)
    assert main + err == whole


@given(st.integers(2, 40))
def test_exponents(n):
    assert Fraction(1, 2) < exponent_gamma(n) < 1
    assert exponent_theta(n) < 1
    assert delta_exponent(n, "squarefree") == exponent_gamma(n)
    assert delta_exponent(n, "phi") == exponent_theta(n)


def test_exponent_values():
    assert (exponent_gamma(2), exponent_gamma(3)) == (Fraction(10, 19), Fraction(27, 52))
    assert (exponent_theta(2), exponent_theta(3)) == (Fraction(8, 9), Fraction(27, 28))
    assert delta_choice(2, 16, "phi") == pytest.approx(16 ** (8 / 9))
    with pytest.raises(DomainError):
        delta_exponent(2, "other")
    with pytest.raises(DomainError):
        split_plan(2, 3, "phi", delta=0)


def test_convergence_table():
    table = convergence_study(2, [1, 2, 5, 10], prime_limit=10**4)
    gaps = [r.gap_squarefree for r in table.rows]
    assert all(b < a for a, b in zip(gaps, gaps[1:]))
    assert table.slope_squarefree < 0
    assert table.rows[0].squarefree_count == 48
