import itertools

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from detstat.core import det_exact
from detstat.enumerate import (
    det_batch,
    digits,
    dot_mod_zero_counts,
    dot_mod_zero_mask,
    index_chunks,
    last_row_cofactors,
    map_reduce,
)


def test_digits_order():
    got = digits(np.arange(6), [2, 3])
    assert got.tolist() == [list(t) for t in itertools.product(range(2), range(3))]


def test_index_chunks_cover():
    chunks = index_chunks(10, 3)
    assert chunks == [(0, 3), (3, 6), (6, 9), (9, 10)]


def test_map_reduce_deterministic():
    ranges = index_chunks(1000, 7)
    f = lambda r: [r[0]]  # noqa: E731
    serial = map_reduce(f, ranges, lambda a, b: a + b, workers=1)
    threaded = map_reduce(f, ranges, lambda a, b: a + b, workers=8)
    assert serial == threaded == [lo for lo, _ in ranges]


@given(st.integers(1, 4).flatmap(
    lambda n: st.lists(st.integers(-30, 30), min_size=n * n, max_size=n * n)))
def test_det_batch_and_cofactors(flat):
    n = int(len(flat) ** 0.5)
    A = np.array(flat, dtype=np.int64).reshape(1, n, n)
    expected = det_exact(A[0].tolist())
    assert int(det_batch(A)[0]) == expected
    if n >= 2:
        cof = last_row_cofactors(A[:, :-1, :])
        assert int(cof[0] @ A[0, -1]) == expected


@given(st.integers(2, 30), st.data())
def test_dot_mod_zero(m, data):
    vecs = np.array(data.draw(st.lists(st.lists(st.integers(0, m - 1), min_size=3, max_size=3),
                                       min_size=1, max_size=6)))
    rows = np.array(list(itertools.product(range(m), repeat=3))[:200])
    expected = [sum(int(v @ r) % m == 0 for r in rows) for v in vecs]
    assert dot_mod_zero_counts(vecs, rows, m, block=2).tolist() == expected
    assert dot_mod_zero_mask(vecs, rows, m).sum(axis=1).tolist() == expected
