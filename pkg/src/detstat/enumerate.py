"""Vectorised enumeration primitives shared by the counting modules.

Every matrix is enumerated by splitting it into its first n-1 rows ("top")
and its last row.  Laplace expansion along the last row gives
det X = sum_j x_nj * c_j(top), so the top rows are reduced to their cofactor
vector once and every (top, last-row) pair is then a dot product.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

import numpy as np

T = TypeVar("T")

CHUNK = 1 << 17
INT64_SAFE = 1 << 62


def digits(idx: np.ndarray, radices: Sequence[int]) -> np.ndarray:
    """Mixed-radix digits of ``idx``; the last position varies fastest."""
    out = np.empty((idx.size, len(radices)), dtype=np.int64)
    rem = idx.astype(np.int64, copy=True)
    for k in range(len(radices) - 1, -1, -1):
        rem, out[:, k] = np.divmod(rem, radices[k])
    return out


def index_chunks(total: int, chunk: int = CHUNK) -> list[tuple[int, int]]:
    return [(lo, min(lo + chunk, total)) for lo in range(0, total, chunk)]


def map_reduce(func: Callable[[tuple[int, int]], T], ranges: Iterable[tuple[int, int]],
               reduce: Callable[[T, T], T], workers: int = 1) -> T:
    """Apply ``func`` to index ranges and fold results in range order.

    The fold order is fixed, so the result is identical for any worker count.
    """
    ranges = list(ranges)
    if workers > 1 and len(ranges) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(func, ranges))
    else:
        parts = [func(r) for r in ranges]
    acc = parts[0]
    for part in parts[1:]:
        acc = reduce(acc, part)
    return acc


def det_batch(a: np.ndarray) -> np.ndarray:
    """Exact determinants of a stack of k x k integer matrices, shape (N, k, k)."""
    k = a.shape[-1]
    if k == 0:
        return np.ones(a.shape[0], dtype=a.dtype)
    if k == 1:
        return a[:, 0, 0].copy()
    if k == 2:
        return a[:, 0, 0] * a[:, 1, 1] - a[:, 0, 1] * a[:, 1, 0]
    out = np.zeros(a.shape[0], dtype=a.dtype)
    for j in range(k):
        minor = np.delete(a[:, 1:, :], j, axis=2)
        term = a[:, 0, j] * det_batch(minor)
        out = out + term if j % 2 == 0 else out - term
    return out


def last_row_cofactors(top: np.ndarray) -> np.ndarray:
    """Cofactors c_j with det = sum_j x_nj c_j, for tops of shape (N, n-1, n)."""
    N, r, n = top.shape
    out = np.empty((N, n), dtype=top.dtype)
    for j in range(n):
        minor = np.delete(top, j, axis=2)
        sign = 1 if (r + j) % 2 == 0 else -1
        out[:, j] = sign * det_batch(minor)
    return out


def dot_mod_zero_counts(vecs: np.ndarray, rows: np.ndarray, m: int,
                        block: int = 2048) -> np.ndarray:
    """For each vector c in ``vecs`` count rows r with c.r == 0 (mod m).

    Inputs are residues in [0, m); products are formed in float64, which is
    exact while n*m^2 < 2^53.
    """
    rt = rows.T.astype(np.float64)
    out = np.empty(vecs.shape[0], dtype=np.int64)
    for lo in range(0, vecs.shape[0], block):
        prod = vecs[lo:lo + block].astype(np.float64) @ rt
        out[lo:lo + block] = np.count_nonzero(np.fmod(prod, m) == 0, axis=1)
    return out


def dot_mod_zero_mask(vecs: np.ndarray, rows: np.ndarray, m: int) -> np.ndarray:
    prod = vecs.astype(np.float64) @ rows.T.astype(np.float64)
    return np.fmod(prod, m) == 0
