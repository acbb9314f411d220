import itertools

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from qdsim.snf import diagonal, image_order_mod, smith_normal_form

matrices = st.integers(1, 4).flatmap(
    lambda m: st.integers(1, 4).flatmap(
        lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n),
                           min_size=m, max_size=m)))


def _span_size(rows, n):
    """Brute force: enumerate all Z_n combinations of the rows."""
    cols = len(rows[0])
    seen = set()
    for coeffs in itertools.product(range(n), repeat=len(rows)):
        seen.add(tuple(sum(c * r[j] for c, r in zip(coeffs, rows)) % n for j in range(cols)))
    return len(seen)


@settings(max_examples=80, deadline=None)
@given(matrices)
def test_integer_factorization(a):
    u, d, v = smith_normal_form(a)
    assert (np.array(u) @ np.array(a) @ np.array(v) == np.array(d)).all()
    assert round(abs(np.linalg.det(np.array(u, dtype=float)))) == 1
    assert round(abs(np.linalg.det(np.array(v, dtype=float)))) == 1
    diag = [abs(x) for x in diagonal(d)]
    off = np.array(d) - np.diag(diagonal(d)) if len(d) == len(d[0]) else None
    if off is not None:
        assert not off.any()
    for x, y in zip(diag, diag[1:]):
        assert (y == 0) or (x != 0 and y % x == 0)


@settings(max_examples=80, deadline=None)
@given(matrices, st.sampled_from([2, 3, 4, 6]))
def test_modular_factorization(a, n):
    u, d, v = smith_normal_form(a, n)
    assert ((np.array(u) @ np.array(a) @ np.array(v) - np.array(d)) % n == 0).all()


@settings(max_examples=60, deadline=None)
@given(matrices, st.sampled_from([2, 3, 4, 6]))
def test_image_order_matches_enumeration(a, n):
    assert image_order_mod(a, n) == _span_size(a, n)


def test_composite_modulus_example():
    # rows 2 and 3 generate all of Z_6
    assert image_order_mod([[2], [3]], 6) == 6
    assert image_order_mod([[2, 0], [0, 4]], 6) == 9
