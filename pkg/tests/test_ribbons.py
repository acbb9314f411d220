import itertools

import pytest

from conftest import dislocated, torus
from qdsim.fusion import build_anyon_data
from qdsim.lattice import Site
from qdsim.ribbons import (AnyonLabel, RibbonError, absorb_at_defect, build_ribbon,
                           commutation_away_from_ends, double_braid_exponent, exchange_exponent,
                           find_closed_ribbon, ribbon_walk, symbolic_syndrome,
                           transport_and_measure, validate_closed_ribbon)
from qdsim.stabilizers import assemble, syndrome
from qdsim.statevector import apply, joint_eigenspace
from qdsim.weyl import commutator_phase

MOVES = {0: "ULul", 1: "RDD", 2: "URDdD"}


def _setup(n):
    lat = dislocated(n)
    sset = assemble(lat)
    ground = joint_eigenspace(sset).basis(sset.spec, sset.edge_count)[0]
    start = Site(lat.vertex("(0,0)"), lat.face("F(2,0)"))
    return lat, sset, ground, start


@pytest.fixture(scope="module", params=[2, 3])
def model(request):
    return _setup(request.param)


def test_crossing_counts(model):
    lat, _, _, start = model
    for k, mv in MOVES.items():
        assert ribbon_walk(lat, start, mv).crossing_count == k


def test_transport_swaps_on_odd_crossings(model):
    lat, sset, ground, start = model
    n = lat.spec.factors[0]
    for k, mv in MOVES.items():
        path = ribbon_walk(lat, start, mv)
        for g, h in itertools.product(range(n), repeat=2):
            out = transport_and_measure(lat, sset, ground, path, AnyonLabel(g, h, n))
            assert out["ok"], (k, g, h, out)
            want = (h, g) if k % 2 else (g, h)
            assert out["end"].to_json() == list(want)


def test_symbolic_syndrome_agrees_with_state(model):
    lat, sset, ground, start = model
    n = lat.spec.factors[0]
    rib = build_ribbon(lat, ribbon_walk(lat, start, MOVES[1]), 1, n - 1)
    assert symbolic_syndrome(rib.word, sset) == syndrome(apply(rib.word, ground), sset)


def test_ribbon_commutes_away_from_ends(model):
    lat, sset, _, start = model
    rib = build_ribbon(lat, ribbon_walk(lat, start, MOVES[2]), 1, 1)
    assert commutation_away_from_ends(rib, sset)["ok"]


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_closed_ribbon_parity(model, k):
    lat, sset, _, _ = model
    n = lat.spec.factors[0]
    path = find_closed_ribbon(lat, k)
    assert path.moves and path.is_closed
    verdict = validate_closed_ribbon(lat, path)["verdict"]
    phases = [commutator_phase(t.word, build_ribbon(lat, path, g, h).word)
              for g, h in itertools.product(range(n), repeat=2) for t in sset.terms]
    if k % 2:
        assert verdict == "parity_error"
        assert any(phases)
    else:
        assert verdict == "ok"
        assert not any(phases)


def test_open_path_rejected_by_parity_check(model):
    lat, _, _, start = model
    with pytest.raises(RibbonError):
        validate_closed_ribbon(lat, ribbon_walk(lat, start, "RDD"))


ENDPOINT_MOVES = ("uR", "Lul")


def _absorbed(n):
    lat, sset, ground, start = _setup(n)
    out = set()
    for mv in ENDPOINT_MOVES:
        path = ribbon_walk(lat, start, mv)
        got = {(g, h) for g, h in itertools.product(range(n), repeat=2)
               if absorb_at_defect(lat, sset, ground, path, g, h)["absorbed"]}
        out.add(frozenset(got))
    assert len(out) == 1, "both endpoints should absorb the same labels"
    return set(out.pop())


@pytest.mark.parametrize("n", [2, 3])
def test_endpoint_absorbs_conjugate_diagonal(n):
    assert _absorbed(n) == {(g, -g % n) for g in range(n)}


@pytest.mark.parametrize("n", [2, pytest.param(3, marks=pytest.mark.xfail(
    strict=True, reason="the endpoint absorbs eps(g,-g); eps(g,g) only coincides at N=2"))])
def test_endpoint_absorbs_diagonal(n):
    assert _absorbed(n) == {(g, g) for g in range(n)}


@pytest.mark.parametrize("n", [2, 3])
def test_braiding_oracle_matches_installed_data(n):
    lat = torus(n, 7, 7)
    data = build_anyon_data(n)
    for a in range(n * n):
        la = AnyonLabel(*data.pair(a), n)
        assert exchange_exponent(lat, la) == data.theta[a]
        for b in range(n * n):
            lb = AnyonLabel(*data.pair(b), n)
            assert -double_braid_exponent(lat, la, lb) % 1 == data.s_exp[a, b]


def test_labels_reduce_mod_n():
    assert AnyonLabel(4, -1, 3) == AnyonLabel(1, 2, 3)
    assert AnyonLabel(1, 2, 3).swapped() == AnyonLabel(2, 1, 3)
    assert (AnyonLabel(1, 2, 3) + AnyonLabel(1, 2, 3).dual).is_vacuum()
