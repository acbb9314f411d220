"""One test per acceptance criterion; each records a PASS/FAIL line for the summary."""

import json
import math
import time
from pathlib import Path

import numpy as np
import pytest

from conftest import ACCEPTANCE, torus
from qdsim.cli import build_report, verdict_body
from qdsim.duality import DualityMap, dense_conjugation_residual, dense_duality
from qdsim.fusion import build_anyon_data, default_ty, pentagon_check, validate_braiding
from qdsim.lattice import lattice_from_json
from qdsim.stabilizers import assemble
from qdsim.statevector import ground_space_basis, joint_eigenspace, subspace_distance
from qdsim.suites import _lattice_only
from qdsim.weyl import to_dense

SPECS = Path(__file__).resolve().parent.parent / "specs"


def _record(num: int, ok: bool, what: str, seconds: float, budget: float):
    line = f"{'PASS' if ok else 'FAIL'}  criterion {num:>2}: {what} [{seconds:.1f}s / {budget:g}s]"
    ACCEPTANCE.append(line)
    print(line)


def _run(name: str) -> tuple[dict, float]:
    t0 = time.perf_counter()
    rep = build_report(json.loads((SPECS / f"{name}.json").read_text()))
    return rep, time.perf_counter() - t0


def _passed(rep: dict) -> bool:
    return all(s["verdict"] == "pass" for s in rep["suites"])


def test_criterion_01_commutation():
    rep, dt = _run("c01_commutation")
    rows = rep["suites"][0]["details"]["lattices"]
    ok = _passed(rep) and len(rows) == 16 and dt < 10
    _record(1, ok, f"all-pairs commutator phases zero on {len(rows)} lattices", dt, 10)
    assert ok


def test_criterion_02_ground_space():
    rep, dt = _run("c02_ground_space")
    t0 = time.perf_counter()
    worst = 0.0
    spec = json.loads((SPECS / "c02_ground_space.json").read_text())
    for entry in spec["lattices"]:
        lat = lattice_from_json(_lattice_only(entry))
        assert lat.edge_count <= 12
        sset = assemble(lat)
        worst = max(worst, subspace_distance(
            joint_eigenspace(sset).basis(sset.spec, sset.edge_count), ground_space_basis(sset)))
    dt += time.perf_counter() - t0
    ok = _passed(rep) and worst < 1e-9 and dt < 120
    _record(2, ok, f"eigenspace = projector image, max subspace residual {worst:.1e}", dt, 120)
    assert ok


def test_criterion_03_gsd():
    rep, dt = _run("c03_gsd")
    rows = rep["suites"][0]["details"]["lattices"]
    torus_rows = [r for r in rows if "torus" in r["lattice"] and "line" not in r["lattice"]]
    both = [r for r in torus_rows if isinstance(r.get("exact"), int)]
    ok = (_passed(rep) and dt < 120 and all(r["agree"] for r in both)
          and {int(r["lattice"][1]) for r in both} >= {2, 3}
          and {int(r["lattice"][1]) for r in torus_rows} >= {2, 3, 4, 5})
    _record(3, ok, f"GSD N^2 on tori ({len(both)} with both routes), 1 on mixed disks", dt, 120)
    assert ok


def test_criterion_04_transport():
    rep, dt = _run("c04_transport")
    rows = rep["suites"][0]["details"]["transports"]
    seen = {(r["lattice"], r["crossings"]) for r in rows}
    ok = _passed(rep) and dt < 180 and len(seen) == 6
    _record(4, ok, f"{len(rows)} transports, eps(g,h) -> eps(h,g) exactly on odd crossings",
            dt, 180)
    assert ok


def test_criterion_05_parity():
    rep, dt = _run("c05_parity")
    loops = rep["suites"][0]["details"]["loops"]
    ok = _passed(rep) and dt < 10 and {r["crossings"] for r in loops} == {0, 1, 2, 3}
    _record(5, ok, "odd closed ribbons rejected, even ones commute with every term", dt, 10)
    assert ok


@pytest.mark.xfail(strict=True, reason="the Q1 endpoint absorbs eps(g,-g), which equals "
                   "eps(g,g) only at N=2; see test_ribbons.py::test_endpoint_absorbs_conjugate_diagonal")
def test_criterion_06_absorption():
    rep, dt = _run("c06_absorption")
    rows = rep["suites"][0]["details"]["endpoints"]
    by_n = {}
    for r in rows:
        by_n.setdefault(r["lattice"][1], []).append(r["diagonal_claim_holds"])
    conj = all(r["absorbed_is_conjugate_diagonal"] for r in rows)
    ok = _passed(rep) and dt < 120
    detail = ", ".join(f"N={n} {'holds' if all(v) else 'fails'}" for n, v in sorted(by_n.items()))
    _record(6, ok, f"eps(g,g) absorbed at Q1 endpoints: {detail}; "
            f"observed rule eps(g,-g) {'holds' if conj else 'fails'}", dt, 120)
    assert ok


def test_criterion_07_set_fusion():
    rep, dt = _run("c07_set_fusion")
    rings = rep["suites"][0]["details"]["rings"]
    ok = (_passed(rep) and dt < 5 and [r["n"] for r in rings] == [2, 3, 4, 5]
          and all(r["set_ring"] and r["set_rules"] for r in rings))
    _record(7, ok, "crossed fusion associative with the stated defect rules, N <= 5", dt, 5)
    assert ok


def test_criterion_08_defect_sector():
    rep, dt = _run("c08_defect_sector")
    rings = rep["suites"][0]["details"]["rings"]
    ok = _passed(rep) and dt < 1 and all(
        r["fixed_points"] == r["n"] and abs(r["defect_dim"] - math.sqrt(r["n"])) < 1e-9
        and all(abs(d - r["n"] ** 2) < 1e-9 for d in r["sector_dims"]) for r in rings)
    # budget counts suite time only; interpreter start-up is excluded
    _record(8, ok, "N fixed points, both sectors of dimension N^2, d_sigma = sqrt(N)", dt, 1)
    assert ok


def test_criterion_09_pentagon():
    t0 = time.perf_counter()
    worst = max(pentagon_check(default_ty(n, nu))["max_residual"]
                for n in (2, 3, 4, 5) for nu in (1, -1))
    dt = time.perf_counter() - t0
    rep, dt2 = _run("c09_pentagon")
    ok = _passed(rep) and worst < 1e-10 and dt + dt2 < 30
    _record(9, ok, f"TY pentagon max residual {worst:.1e}", dt + dt2, 30)
    assert ok


def test_criterion_10_lagrangian():
    rep, dt = _run("c10_lagrangian")
    ok = _passed(rep) and dt < 1
    _record(10, ok, "A_e, A_m Lagrangian for N <= 7; 1+eps(1,1) not bosonic; swap breaks", dt, 1)
    assert ok


def test_criterion_11_symmetry():
    rep, dt = _run("c11_symmetry")
    t0 = time.perf_counter()
    oracle = all(validate_braiding(build_anyon_data(n))["ok"] for n in (2, 3))
    dt += time.perf_counter() - t0
    ok = _passed(rep) and oracle and dt < 10
    _record(11, ok, "e<->m preserves fusion, d, theta, S; lattice oracle agrees at N=2,3", dt, 10)
    assert ok


def test_criterion_12_duality():
    rep, dt = _run("c12_duality")
    t0 = time.perf_counter()
    worst = 0.0
    for n in (2, 3):
        dmap = DualityMap.of(torus(n, 2, 2))
        for t in assemble(dmap.source).terms:
            worst = max(worst, dense_conjugation_residual(t.word, dmap))
    dmap = DualityMap.of(torus(2, 2, 2))
    u = dense_duality(dmap)
    target = assemble(dmap.target)
    for t in assemble(dmap.source).terms:
        img = u @ to_dense(t.word) @ u.conj().T
        worst = max(worst, min(np.abs(img - to_dense(s.word)).max() for s in target.terms))
    dt += time.perf_counter() - t0
    ok = _passed(rep) and worst < 1e-10 and dt < 180
    _record(12, ok, f"Hadamard duality maps A(v) <-> B(f*), max residual {worst:.1e}", dt, 180)
    assert ok


def test_criterion_13_determinism():
    t0 = time.perf_counter()
    bodies = {}
    for spec in sorted(SPECS.glob("*.json")):
        data = json.loads(spec.read_text())
        bodies[spec.name] = [verdict_body(build_report(data)) for _ in range(2)]
    dt = time.perf_counter() - t0
    same = [k for k, (a, b) in bodies.items() if a == b]
    ok = len(same) == len(bodies) and dt < 900
    _record(13, ok, f"{len(same)}/{len(bodies)} bundled specs byte-identical across two runs",
            dt, 900)
    assert ok
