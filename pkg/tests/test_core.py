import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from detstat.core import (
    BudgetExceeded,
    DomainError,
    IntMatrix,
    InvalidLimit,
    InvalidPrime,
    LinearForm,
    build_sieves,
    check_budget,
    det_cofactor,
    det_exact,
    det_mod,
    factorize,
    hadamard_range,
    is_prime,
    prime_sieve,
    rank_mod_p,
    require_prime,
    resolve_budget,
    squarefree_primes,
)


def square_matrices(max_n=5, bound=50):
    return st.integers(1, max_n).flatmap(
        lambda n: st.lists(st.lists(st.integers(-bound, bound), min_size=n, max_size=n),
                           min_size=n, max_size=n))


def test_small_determinants():
    assert det_exact([[1, 2, 3], [4, 5, 6], [7, 8, 10]]) == -3
    assert det_exact([[2, 0, 0, 0], [0, 2, 0, 0], [0, 0, 2, 0], [0, 0, 0, -4]]) == -32
    assert det_exact(IntMatrix.identity(4)) == 1
    assert det_mod([[1, 2], [3, 4]], 5) == 3
    assert det_mod([[2, 1], [1, 1]], 4) == 1


@given(square_matrices())
def test_bareiss_matches_cofactor(rows):
    assert det_exact(rows) == det_cofactor(rows)


@given(square_matrices(max_n=4), st.integers(1, 60))
def test_det_mod_is_reduced_det(rows, m):
    assert det_mod(rows, m) == det_exact(rows) % m


@given(square_matrices(max_n=4, bound=20))
def test_hadamard_bound(rows):
    n = len(rows)
    H = max(abs(x) for r in rows for x in r)
    assert abs(det_exact(rows)) <= hadamard_range(n, H)


@given(square_matrices(max_n=4, bound=6), st.sampled_from([2, 3, 5, 7]))
def test_rank_full_iff_nonsingular(rows, p):
    n = len(rows)
    assert (rank_mod_p(rows, p) == n) == (det_exact(rows) % p != 0)


def test_rank_examples():
    assert rank_mod_p([[1, 2], [2, 4]], 7) == 1
    assert rank_mod_p([[1, 2, 3]], 5) == 1
    assert rank_mod_p([[0, 0], [0, 0]], 3) == 0


def test_int_matrix():
    M = IntMatrix.from_rows([[1, -7], [3, 4]])
    assert M.rows() == [[1, -7], [3, 4]]
    assert M.max_abs() == 7
    with pytest.raises(DomainError):
        IntMatrix.from_rows([[1, 2], [3]])


def test_primes_and_factorisation():
    assert [p for p in range(30) if is_prime(p)] == prime_sieve(30).tolist()
    assert factorize(360) == {2: 3, 3: 2, 5: 1}
    assert squarefree_primes(30) == [2, 3, 5]
    assert squarefree_primes(1) == []
    with pytest.raises(DomainError, match="3"):
        squarefree_primes(18)
    with pytest.raises(InvalidPrime):
        require_prime(9)


@given(st.integers(1, 10**6))
def test_factorisation_roundtrip(k):
    assert math.prod(p**e for p, e in factorize(k).items()) == k
    assert all(is_prime(p) for p in factorize(k))


def test_sieve_anchors():
    sv = build_sieves(100)
    assert (sv.mu(6), sv.mu(12), sv.mu(30)) == (1, 0, -1)
    assert sv.phi(10) == 4
    assert not sv.squarefree(0)
    assert sv.squarefree(-15) and not sv.squarefree(-18)
    assert sv.primes().tolist() == prime_sieve(100).tolist()
    with pytest.raises(InvalidLimit):
        build_sieves(1)
    with pytest.raises(DomainError):
        sv.mu(101)


@settings(max_examples=50)
@given(st.integers(1, 2000), st.integers(1, 2000))
def test_sieve_multiplicativity(a, b):
    sv = build_sieves(4 * 10**6)
    if math.gcd(a, b) == 1:
        assert sv.mu(a * b) == sv.mu(a) * sv.mu(b)
        assert sv.phi(a * b) == sv.phi(a) * sv.phi(b)
    assert sv.squarefree(a) == all(e == 1 for e in factorize(a).values())


def test_mobius_sums_vanish():
    sv = build_sieves(500)
    for k in range(2, 200):
        assert sum(sv.mu(d) for d in range(1, k + 1) if k % d == 0) == 0
        assert sum(sv.phi(d) for d in range(1, k + 1) if k % d == 0) == k


@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.integers(-99, 99), min_size=n * n, max_size=n * n)))
def test_linear_form_roundtrip(coeffs):
    n = math.isqrt(len(coeffs))
    L = LinearForm(n, tuple(coeffs))
    assert LinearForm.parse(L.format()) == L
    assert L.transposed().transposed() == L


def test_linear_form_helpers():
    L = LinearForm.parse("1,0;0,0")
    assert L.is_monomial and L.is_first_column()
    assert L == LinearForm.monomial(2, 0, 0)
    assert L([5, 6, 7, 8]) == 5
    assert LinearForm.first_column([2, 3]).coeffs == (2, 0, 3, 0)
    assert LinearForm.parse("2,4;6,8").gcd_with(12) == 2
    assert LinearForm.parse("3,6;9,0").vanishes_mod(3)
    assert LinearForm.zero(3).is_zero
    assert LinearForm.parse("-1,5;7,2").reduced(5).coeffs == (4, 0, 2, 2)
    with pytest.raises(DomainError):
        LinearForm.parse("1,2;3")
    with pytest.raises(DomainError):
        LinearForm.parse("a,b;c,d")


def test_budget(monkeypatch):
    assert resolve_budget(5) == 5
    monkeypatch.setenv("DETSTAT_BUDGET", "77")
    assert resolve_budget() == 77
    with pytest.raises(BudgetExceeded) as info:
        check_budget("thing", 78)
    assert info.value.iterations == 78 and info.value.budget == 77
    with pytest.raises(DomainError):
        resolve_budget(0)


def test_hadamard_range():
    assert hadamard_range(2, 3) == 18
    assert hadamard_range(3, 2) == 48
    assert np.int64(hadamard_range(4, 10)) == 240000
