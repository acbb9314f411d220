import numpy as np
import pytest

from qdsim.group import GroupSpec
from qdsim.statevector import (CapExceeded, StateVector, check_cap, monomial_action,
                               subspace_distance)
from qdsim.weyl import WeylWord, to_dense


def test_cap_enforced():
    with pytest.raises(CapExceeded):
        check_cap(GroupSpec((3,)), 20, cap=3 ** 10)


def test_basis_state_index():
    spec = GroupSpec((3,))
    s = StateVector.basis(spec, 2, digits=(1, 2))
    assert s.amplitudes[1 * 3 + 2] == 1


def test_save_load_round_trip(tmp_path):
    spec = GroupSpec((3,))
    rng = np.random.default_rng(0)
    s = StateVector(spec, 3, rng.standard_normal(27) + 0j).normalized()
    s.save(tmp_path / "psi.bin", edge_names=["a", "b", "c"])
    t = StateVector.load(tmp_path / "psi.bin")
    assert t.edge_count == 3
    assert np.allclose(t.amplitudes, s.amplitudes, atol=1e-6)


def test_monomial_action_matches_dense():
    spec = GroupSpec((3,))
    w = WeylWord.from_sparse(spec, 3, {0: (1, 2), 2: (2, 1)})
    perm, ph = monomial_action(w, 3)
    dense = np.zeros((27, 27), dtype=complex)
    dense[perm, np.arange(27)] = np.exp(2j * np.pi * ph / 3)
    assert np.allclose(dense, to_dense(w))


def test_subspace_distance():
    spec = GroupSpec((2,))
    a = [StateVector.basis(spec, 2, (0, 0))]
    b = [StateVector.basis(spec, 2, (0, 0)).scaled(1j)]
    assert subspace_distance(a, b) < 1e-12
    assert subspace_distance(a, [StateVector.basis(spec, 2, (1, 0))]) > 0.9
