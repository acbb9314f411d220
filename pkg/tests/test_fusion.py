import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qdsim.fusion import (FusionError, TYCategory, algebra_from_labels, anyon_name,
                          boundary_rules, build_anyon_data, check_anyon_data, default_ty,
                          defect_name, electric_algebra, em_swap, fixed_point_rank,
                          grading_check, lagrangian_census, lagrangian_check, magnetic_algebra,
                          pentagon_check, sector_fpdim_check, set_action, set_ring,
                          symmetry_breaking_check, symmetry_invariance, ty_ring,
                          unitarity_check, verify_ring_axioms)


def _fuse_many(ring, left: Counter, b: int) -> Counter:
    out = Counter()
    for a, m in left.items():
        for c, k in ring.fuse(a, b).items():
            out[c] += m * k
    return out


@settings(max_examples=150, deadline=None)
@given(st.integers(2, 5).flatmap(lambda n: st.tuples(
    st.just(n), *(st.integers(0, n * n + n - 1) for _ in range(3)))))
def test_set_fusion_associative(args):
    n, a, b, c = args
    ring = set_ring(n)
    ab_c = _fuse_many(ring, _fuse_many(ring, Counter({a: 1}), b), c)
    a_bc = Counter()
    for x, m in ring.fuse(b, c).items():
        for y, k in ring.fuse(a, x).items():
            a_bc[y] += m * k
    assert ab_c == a_bc


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_set_rules(n):
    ring = set_ring(n)
    for g in range(n):
        for h in range(n):
            for k in range(n):
                got = ring.fuse_names(anyon_name(g, h), defect_name(k))
                assert got == {defect_name((k + g - h) % n): 1}
    for k in range(n):
        for l in range(n):
            got = ring.fuse_names(defect_name(k), defect_name(l))
            assert got == {anyon_name((g + k + l) % n, g): 1 for g in range(n)}
    assert verify_ring_axioms(ring)["ok"]
    assert grading_check(ring)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_anyon_ring_is_group_algebra(n):
    data = build_anyon_data(n)
    for a in range(n * n):
        for b in range(n * n):
            (g1, h1), (g2, h2) = data.pair(a), data.pair(b)
            assert data.ring.fuse(a, b) == {((g1 + g2) % n) * n + (h1 + h2) % n: 1}
    assert np.allclose(data.ring.fpdims(), 1)
    assert check_anyon_data(data)["ok"]


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_defect_sector_dimensions(n):
    rep = sector_fpdim_check(set_ring(n))
    assert rep["ok"]
    assert rep["sector_dims"] == pytest.approx([n * n, n * n], abs=1e-9)
    assert rep["defect_dims"] == pytest.approx([math.sqrt(n)] * n, abs=1e-9)
    assert fixed_point_rank(em_swap(n)) == n


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_em_swap_is_a_symmetry(n):
    data = build_anyon_data(n)
    assert symmetry_invariance(data, em_swap(n))["ok"]
    # swapping only two charges breaks the fusion rules
    act = list(range(n * n))
    act[n], act[n + 1] = n + 1, n
    assert not symmetry_invariance(data, act)["ok"]


def test_set_action_preserves_set_ring():
    ring = set_ring(3)
    p = np.array(set_action(3))
    assert (ring.mult == ring.mult[p][:, p][:, :, p]).all()


def test_spins_and_s_closed_forms():
    n = 4
    data = build_anyon_data(n)
    for a in range(n * n):
        g, h = data.pair(a)
        assert data.theta[a] == Fraction(g * h, n) % 1
    s = data.s_matrix()
    assert np.allclose(s @ s.conj().T, np.eye(n * n))


@pytest.mark.parametrize("n", [2, 3, 4, 5])
@pytest.mark.parametrize("nu", [1, -1])
def test_ty_pentagon(n, nu):
    cat = default_ty(n, nu)
    rep = pentagon_check(cat)
    assert rep["instances"] > 0
    assert rep["max_residual"] < 1e-10
    assert unitarity_check(cat) < 1e-10
    d = ty_ring(cat).fpdims()
    assert d[-1] == pytest.approx(math.sqrt(n))


def test_ty_rejects_degenerate_bicharacter():
    cat = TYCategory(4, lambda a, b: Fraction(2 * a * b, 4))
    with pytest.raises(FusionError):
        pentagon_check(cat)
    with pytest.raises(FusionError):
        TYCategory(3, lambda a, b: Fraction(a * b, 3), nu=2)


def test_wrong_sign_breaks_pentagon():
    good = default_ty(3, 1)
    bad = TYCategory(3, good.chi, 1)
    bad.F = lambda *args: -good.F(*args) if 3 in args[:3] else good.F(*args)
    assert pentagon_check(bad)["max_residual"] > 1e-3


@pytest.mark.parametrize("n", range(2, 8))
def test_electric_and_magnetic_are_lagrangian(n):
    data = build_anyon_data(n)
    for alg in (electric_algebra(n), magnetic_algebra(n)):
        assert lagrangian_check(alg, data)["lagrangian"]
    assert symmetry_breaking_check(electric_algebra(n), em_swap(n))["verdict"] == "broken"
    image = symmetry_breaking_check(electric_algebra(n), em_swap(n))["image"]
    assert image == magnetic_algebra(n).mult.tolist()


def test_fermion_candidate_not_bosonic():
    data = build_anyon_data(2)
    rep = lagrangian_check(algebra_from_labels(2, [(0, 0), (1, 1)]), data)
    assert not rep["bosonic"]
    assert not rep["lagrangian"]


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6, 7, 8, 9])
def test_lagrangian_count_is_divisor_count(n):
    # Lagrangian subgroups of Z_N x Z_N with q(g,h) = gh/N are indexed by divisors of N
    divisors = sum(1 for d in range(1, n + 1) if n % d == 0)
    assert len(lagrangian_census(n)) == divisors


def test_boundary_table_tension_is_reported():
    rep = boundary_rules(electric_algebra(3), 3)
    assert rep["associative"]
    assert not rep["rigid"]
    assert rep["tension"]
