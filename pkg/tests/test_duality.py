import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import MIXED, disk, dislocated, torus
from qdsim.duality import (DualityMap, conjugate_word, dense_conjugation_residual,
                           dense_duality, double_dual_check, dualize_model, dualize_state,
                           hadamard_dense)
from qdsim.stabilizers import assemble, syndrome
from qdsim.statevector import joint_eigenspace
from qdsim.weyl import WeylWord, commutator_phase, multiply, to_dense

MAP3 = DualityMap.of(torus(3, 2, 2))


@st.composite
def torus_words(draw, max_support=8):
    e = MAP3.source.edge_count
    edges = draw(st.lists(st.integers(0, e - 1), max_size=max_support, unique=True))
    local = {q: (draw(st.integers(0, 2)), draw(st.integers(0, 2))) for q in edges}
    return WeylWord.from_sparse(MAP3.source.spec, e, local)


@settings(max_examples=60, deadline=None)
@given(torus_words(), torus_words())
def test_conjugation_is_a_homomorphism(a, b):
    lhs = conjugate_word(multiply(a, b), MAP3)
    rhs = multiply(conjugate_word(a, MAP3), conjugate_word(b, MAP3))
    assert lhs == rhs
    assert commutator_phase(conjugate_word(a, MAP3), conjugate_word(b, MAP3)) == \
        commutator_phase(a, b)


@settings(max_examples=25, deadline=None)
@given(torus_words(max_support=3))
def test_symbolic_matches_local_dense(w):
    assert dense_conjugation_residual(w, MAP3) < 1e-10


def test_hadamard_intertwines_clock_and_shift():
    from qdsim.weyl import clock_shift
    for n in (2, 3, 5):
        u = hadamard_dense(n)
        assert np.allclose(u @ clock_shift(n, 0, 1) @ u.conj().T, clock_shift(n, -1, 0))
        assert np.allclose(u @ clock_shift(n, 1, 0) @ u.conj().T, clock_shift(n, 0, 1))


def test_full_dense_conjugation_on_z2_torus():
    dmap = DualityMap.of(torus(2, 2, 2))
    u = dense_duality(dmap)
    assert np.allclose(u @ u.conj().T, np.eye(len(u)))
    native = {t.location: t for t in assemble(dmap.target).terms}
    for t in assemble(dmap.source).terms:
        img = u @ to_dense(t.word) @ u.conj().T
        loc = ("face", dmap.face_of_vertex(t.location[1])) if t.location[0] == "vertex" \
            else ("vertex", dmap.vertex_of_face(t.location[1]))
        assert np.abs(img - to_dense(native[loc].word)).max() < 1e-10
        assert np.abs(img - to_dense(conjugate_word(t.word, dmap))).max() < 1e-10


@pytest.mark.parametrize("lat", [torus(2, 2, 2), torus(3, 2, 2), disk(3, 1, 2, "smooth"),
                                 disk(2, 1, 2, MIXED)], ids=["t2", "t3", "smooth3", "mixed2"])
def test_model_maps_to_dual_model(lat):
    dmap = DualityMap.of(lat)
    sset = assemble(lat)
    _, rep = dualize_model(sset, dmap)
    assert rep["ok"] and rep["exact"] == rep["terms"]
    native = assemble(dmap.target)
    for psi in joint_eigenspace(sset).basis(sset.spec, sset.edge_count):
        assert not any(syndrome(dualize_state(psi, dmap), native).values())


def test_rough_and_smooth_exchange():
    dmap = DualityMap.of(disk(2, 1, 2, "rough"))
    assert set(dmap.target.boundaries.values()) == {"smooth"}
    kinds = assemble(dmap.target).kinds()
    assert kinds.get("AbarSmooth", 0) == assemble(dmap.source).kinds().get("BbarRough", 0)


def test_hybrids_match_only_up_to_phase():
    dmap = DualityMap.of(dislocated(3))
    _, rep = dualize_model(assemble(dmap.source), dmap)
    assert not rep["unmatched"]
    assert len(rep["phase_only"]) == 2


@pytest.mark.parametrize("n", [2, 3])
def test_double_dual_is_charge_conjugation(n):
    lat = torus(n, 2, 2)
    sset = assemble(lat)
    psi = joint_eigenspace(sset).basis(sset.spec, sset.edge_count)[0]
    assert double_dual_check(psi, DualityMap.of(lat)) == pytest.approx(1.0, abs=1e-9)
