from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qdsim.group import GroupSpec, GroupSpecError, frac_mod1
from qdsim.weyl import (DenseCapError, WeylWord, clock_shift, commutator_phase, multiply,
                        order_phase, power, to_dense)

EDGES = 3


@st.composite
def words(draw, n=None, edges=EDGES):
    n = n if n is not None else draw(st.integers(2, 5))
    xs = draw(st.lists(st.integers(-7, 7), min_size=edges, max_size=edges))
    zs = draw(st.lists(st.integers(-7, 7), min_size=edges, max_size=edges))
    ph = Fraction(draw(st.integers(0, 11)), 12)
    spec = GroupSpec((n,))
    return WeylWord(spec, edges, np.array(xs)[:, None], np.array(zs)[:, None], ph)


@st.composite
def word_pairs(draw, k=2):
    n = draw(st.integers(2, 4))
    return tuple(draw(words(n)) for _ in range(k))


def test_clock_shift_relation():
    for n in range(2, 6):
        x, z = clock_shift(n, 1, 0), clock_shift(n, 0, 1)
        w = np.exp(2j * np.pi / n)
        assert np.allclose(z @ x, w * x @ z)
        assert np.allclose(np.linalg.matrix_power(x, n), np.eye(n))


@settings(max_examples=60, deadline=None)
@given(word_pairs(3))
def test_multiplication_associative(ws):
    a, b, c = ws
    assert multiply(multiply(a, b), c) == multiply(a, multiply(b, c))


@settings(max_examples=60, deadline=None)
@given(word_pairs(2))
def test_product_matches_dense(ws):
    a, b = ws
    assert np.allclose(to_dense(multiply(a, b)), to_dense(a) @ to_dense(b))


@settings(max_examples=60, deadline=None)
@given(word_pairs(2))
def test_commutator_phase_matches_dense(ws):
    a, b = ws
    phi = commutator_phase(a, b)
    lhs = to_dense(a) @ to_dense(b)
    rhs = np.exp(2j * np.pi * float(phi)) * to_dense(b) @ to_dense(a)
    assert np.allclose(lhs, rhs)


@settings(max_examples=80, deadline=None)
@given(word_pairs(3))
def test_commutator_antisymmetric_and_bilinear(ws):
    a, b, c = ws
    assert frac_mod1(commutator_phase(a, b) + commutator_phase(b, a)) == 0
    assert commutator_phase(multiply(a, b), c) == frac_mod1(
        commutator_phase(a, c) + commutator_phase(b, c))


@settings(max_examples=60, deadline=None)
@given(words(), st.integers(-4, 6))
def test_power_matches_repeated_product(w, k):
    dense = np.linalg.matrix_power(to_dense(w), k) if k >= 0 else \
        np.linalg.matrix_power(np.linalg.inv(to_dense(w)), -k)
    assert np.allclose(to_dense(power(w, k)), dense)


@settings(max_examples=40, deadline=None)
@given(words())
def test_inverse(w):
    assert multiply(w, w.inverse()).is_identity()


@settings(max_examples=40, deadline=None)
@given(words())
def test_order_phase_is_scalar(w):
    m = w.spec.exponent
    dense = np.linalg.matrix_power(to_dense(w), m)
    assert np.allclose(dense, np.exp(2j * np.pi * float(order_phase(w))) * np.eye(len(dense)))


@settings(max_examples=30, deadline=None)
@given(words())
def test_json_round_trip(w):
    assert WeylWord.from_json(w.to_json()) == w


def test_exponents_reduced_mod_n():
    spec = GroupSpec((3,))
    assert WeylWord.single(spec, 2, 0, x=4, z=-1) == WeylWord.single(spec, 2, 0, x=1, z=2)


def test_product_group_factor_independence():
    spec = GroupSpec((2, 3))
    a = WeylWord.single(spec, 1, 0, x=(1, 0), z=(0, 0))
    b = WeylWord.single(spec, 1, 0, x=(0, 0), z=(0, 1))
    assert commutator_phase(a, b) == 0
    c = WeylWord.single(spec, 1, 0, x=(0, 1), z=(0, 0))
    assert commutator_phase(b, c) == Fraction(1, 3)


def test_dense_cap():
    spec = GroupSpec((5,))
    with pytest.raises(DenseCapError):
        to_dense(WeylWord.identity(spec, 8), cap=10**6)


def test_group_spec_validation():
    with pytest.raises(GroupSpecError):
        GroupSpec.from_json([1])
    with pytest.raises(GroupSpecError):
        GroupSpec.from_json("Z3")
    assert GroupSpec.from_json([2, 3]).order == 6
