"""Exact and oracle-checked computations around integer matrix determinants.

Singular-matrix counts over residue rings, complete exponential sums along
the determinant variety, box-restricted divisibility counts, square-free
determinant counts, the Euler-function sum and their Euler-product constants.
"""

__version__ = "0.1.0"

from .asymptotics import (
    convergence_study,
    delta_choice,
    exponent_gamma,
    exponent_theta,
    phi_sum_direct,
    phi_sum_sieve,
    squarefree_direct,
    squarefree_sieve,
)
from .boxes import BoxSpec, count_box, count_box_enumerate, count_fixed_det, det_distribution
from .constants import ConstantInterval, euler_constant_S, euler_constant_sigma
from .core import (
    BudgetExceeded,
    DetstatError,
    DomainError,
    IntMatrix,
    InvalidLimit,
    InvalidModulus,
    InvalidPrime,
    LinearForm,
    build_sieves,
    det_exact,
    det_mod,
)
from .counts import closed_form_N, closed_form_N_sq, linear_section_count, oracle_singular_count
from .expsums import crt_product, eval_expsum, monomial_exact

__all__ = [name for name in dir() if not name.startswith("_")]
