import numpy as np
import pytest

from conftest import MIXED, disk, dislocated, torus
from qdsim.stabilizers import (MethodInapplicable, assemble, check_commutation, face_word,
                               ground_space_dimension, logical_count, vertex_word)
from qdsim.statevector import StateVector, apply, ground_space_basis, joint_eigenspace
from qdsim.weyl import multiply, power, to_dense


@pytest.mark.parametrize("n", [2, 3, 4])
def test_bulk_terms_have_order_n(n):
    sset = assemble(torus(n))
    for t in sset.terms:
        assert power(t.word, n).is_identity()
        assert t.order == n


def test_kinds_on_dislocated_torus():
    kinds = assemble(dislocated(3)).kinds()
    assert kinds["Q1"] == 2
    assert kinds.get("BtildeF", 0) + kinds.get("AtildeV", 0) >= 1


@pytest.mark.parametrize("lat", [torus(2), torus(5), dislocated(2), dislocated(3),
                                 torus(2, 3, 6, [(0, 1, 2, 3)]), disk(3, 3, 3, MIXED)],
                         ids=["t2", "t5", "d2", "d3", "long2", "mixed3"])
def test_all_terms_commute(lat):
    rep = check_commutation(assemble(lat))
    assert rep["violations"] == []
    assert rep["pairs_checked"] > 0


def test_bare_endpoint_factors_do_not_commute():
    lat = dislocated(3)
    h = next(h for h in lat.hybrids if h.kind == "Q1")
    a, b = vertex_word(lat, h.vertex), face_word(lat, h.face)
    from qdsim.weyl import commutator_phase
    assert commutator_phase(a, b) != 0


def test_vertex_term_dense_projector_is_idempotent():
    lat = torus(2, 2, 2)
    w = vertex_word(lat, 0)
    m = to_dense(w)
    p = (np.eye(len(m)) + m) / 2
    assert np.allclose(p @ p, p)


@pytest.mark.parametrize("n", [2, 3])
def test_gsd_routes_agree_on_small_torus(n):
    sset = assemble(torus(n, 2, 2))
    assert ground_space_dimension(sset, "symplectic") == n * n
    assert ground_space_dimension(sset, "exact") == n * n
    assert logical_count(sset) == 2


def test_mixed_disk_has_unique_ground_state():
    sset = assemble(disk(2, 2, 2, MIXED))
    assert ground_space_dimension(sset, "symplectic") == 1
    assert ground_space_dimension(sset, "exact") == 1


def test_alternating_disk_has_two_dimensional_ground_space():
    sset = assemble(disk(3, 1, 1, ["rough", "smooth", "rough", "smooth"]))
    assert ground_space_dimension(sset, "exact") == 3


def test_even_n_hybrids_refuse_symplectic_count():
    with pytest.raises(MethodInapplicable):
        ground_space_dimension(assemble(dislocated(2)), "symplectic")
    assert ground_space_dimension(assemble(dislocated(2)), "exact") == 4


def test_unknown_method():
    with pytest.raises(ValueError):
        ground_space_dimension(assemble(torus(2, 2, 2)), "guess")


def test_orbit_route_matches_projector_route():
    sset = assemble(dislocated(3))
    js = joint_eigenspace(sset)
    proj = ground_space_basis(sset)
    assert js.dimension == len(proj) == 9
    for s in js.basis(sset.spec, sset.edge_count):
        for t in sset.terms:
            assert np.allclose(apply(t.word, s).amplitudes, s.amplitudes)


def test_apply_matches_dense():
    lat = torus(2, 2, 2)
    sset = assemble(lat)
    rng = np.random.default_rng(1)
    amps = rng.standard_normal(2 ** 8) + 1j * rng.standard_normal(2 ** 8)
    st = StateVector(lat.spec, lat.edge_count, amps)
    w = multiply(sset.terms[0].word, sset.terms[-1].word)
    assert np.allclose(apply(w, st).amplitudes, to_dense(w) @ amps)
