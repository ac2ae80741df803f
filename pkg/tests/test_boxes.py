from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from detstat.core import BudgetExceeded, DomainError
from detstat.boxes import (
    BoxSpec,
    brute_det_distribution,
    count_box,
    count_box_enumerate,
    count_fixed_det,
    det_distribution,
    fixed_det_max_report,
    main_term,
    residual_record,
    residual_report,
)


def test_anchors():
    assert count_box(2, 2, 1) == 41
    assert count_box(2, 4, 1) == 33
    assert count_box(2, 3, 10) == 79233
    assert residual_record(2, 2, 1).residual == Fraction(-77, 8)
    assert residual_record(2, 4, 1).residual == Fraction(165, 32)
    assert count_fixed_det(2, 1, 0) == 33
    assert count_fixed_det(2, 1, 1) == 20
    assert count_fixed_det(2, 1, 5) == 0


@given(st.lists(st.integers(1, 3), min_size=4, max_size=4))
def test_distribution_matches_brute_n2(bounds):
    box = BoxSpec(2, tuple(bounds))
    dist = det_distribution(box)
    brute = brute_det_distribution(2, box)
    assert {k: c for k, c in dist.items() if c} == brute
    assert dist.total == box.size


@pytest.mark.parametrize("bounds", [(1,) * 9, (1, 2, 1, 1, 1, 2, 1, 1, 1)])
def test_distribution_matches_brute_n3(bounds):
    box = BoxSpec(3, bounds)
    dist = det_distribution(box)
    assert {k: c for k, c in dist.items() if c} == brute_det_distribution(3, box)


@given(st.integers(1, 8), st.lists(st.integers(1, 3), min_size=4, max_size=4))
def test_fast_path_matches_enumeration(m, bounds):
    assert count_box(2, m, bounds) == count_box_enumerate(2, m, bounds)


@pytest.mark.parametrize("m", [2, 3, 4])
def test_n3_count_matches_enumeration(m):
    assert count_box(3, m, 1) == count_box_enumerate(3, m, 1)


@given(st.integers(1, 9), st.integers(1, 30))
def test_exact_equidistribution(m, H):
    # a box whose side is a multiple of m covers each residue class equally
    if (2 * H + 1) % m == 0:
        assert residual_record(2, m, H).residual == 0


@given(st.integers(1, 3), st.integers(-30, 30))
def test_fixed_det_symmetric(H, a):
    assert count_fixed_det(2, H, a) == count_fixed_det(2, H, -a)


def test_main_term_and_report():
    assert main_term(2, 2, 1) == Fraction(10 * 81, 16)
    rep = residual_report(2, [2, 3], [1, 2])
    assert len(rep.records) == 4 and rep.slope is None
    fitted = residual_report(2, [2, 3, 5, 7], ratio=0.7)
    assert fitted.slope is not None


def test_fixed_det_max():
    rows = fixed_det_max_report(2, [1, 2, 3])
    assert rows[0].argmax == 0 and rows[0].max_count == 33
    assert rows[1].max_count == 129


def test_box_validation():
    with pytest.raises(DomainError):
        BoxSpec(2, (1, 1, 1))
    with pytest.raises(DomainError):
        BoxSpec(2, (0, 1, 1, 1))
    with pytest.raises(DomainError):
        count_box(2, 0, 1)
    with pytest.raises(BudgetExceeded):
        det_distribution(BoxSpec.uniform(3, 5), budget=1000)
    assert BoxSpec.of(2, [1, 2, 3, 4]).max_det == 2 * 2 * 4
