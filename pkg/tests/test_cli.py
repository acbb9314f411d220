import json
from pathlib import Path

import pytest

from qdsim.cli import DELIMITER, EXIT_CAP, EXIT_FAIL, EXIT_PASS, EXIT_SPEC, main

SPECS = Path(__file__).resolve().parent.parent / "specs"
SMALL = {"suites": ["commutation", "gsd"],
         "lattice": {"group": [3], "topology": "torus", "rows": 2, "cols": 2}}


def _write(tmp_path, data, name="spec.json"):
    p = tmp_path / name
    p.write_text(data if isinstance(data, str) else json.dumps(data))
    return str(p)


def test_passing_run(tmp_path, capsys):
    assert main(["run", _write(tmp_path, SMALL)]) == EXIT_PASS
    assert capsys.readouterr().out.strip().endswith("ALL PASS")


def test_failing_commutation_prints_pair_and_phase(capsys):
    code = main(["run", str(SPECS / "cli_failing_commutation.json")])
    out = capsys.readouterr().out
    assert code == EXIT_FAIL
    assert "vs" in out and "phase 2/3" in out
    assert "FAILED: commutation" in out


def test_empty_suite_list(tmp_path, capsys):
    assert main(["run", _write(tmp_path, {"suites": []})]) == EXIT_PASS
    assert "NO SUITES SELECTED" in capsys.readouterr().out


@pytest.mark.parametrize("bad", ["{not json", {"suites": ["nope"]}, {"bogus": 1},
                                 {"suites": ["gsd"], "lattice": {"group": [3]}},
                                 {"lattice": {}, "lattices": []}])
def test_spec_errors(tmp_path, capsys, bad):
    assert main(["run", _write(tmp_path, bad)]) == EXIT_SPEC
    assert "spec error" in capsys.readouterr().err


def test_missing_file(capsys):
    assert main(["run", "/nonexistent/spec.json"]) == EXIT_SPEC


def test_resource_cap(tmp_path, capsys):
    spec = dict(SMALL, params={"gsd": {"exact": True}})
    assert main(["run", _write(tmp_path, spec), "--cap-amplitudes", "100"]) == EXIT_CAP
    assert "resource cap" in capsys.readouterr().err
    assert main(["run", _write(tmp_path, spec), "--cap-amplitudes", "0"]) == EXIT_SPEC


def test_suite_flag_overrides_spec(tmp_path, capsys):
    main(["run", _write(tmp_path, SMALL), "--suite", "commutation", "--format", "json"])
    rep = json.loads(capsys.readouterr().out)
    assert [s["name"] for s in rep["suites"]] == ["commutation"]


def test_both_format_has_delimiter(tmp_path, capsys):
    main(["run", _write(tmp_path, SMALL), "--format", "both", "--no-figures"])
    text, body = capsys.readouterr().out.split(DELIMITER + "\n")
    assert "ALL PASS" in text
    assert json.loads(body)["version"]


def test_reports_are_reproducible(tmp_path):
    spec = _write(tmp_path, dict(SMALL, suites=["commutation", "gsd", "fusion"]))
    outs = []
    for i, extra in enumerate(([], [], ["--parallel"])):
        out = tmp_path / f"r{i}.json"
        main(["run", spec, "--out", str(out), "--no-timings", "--no-figures", *extra])
        outs.append(out.read_bytes())
    assert outs[0] == outs[1] == outs[2]
    assert b"timings" not in outs[0]


def test_figures_written_next_to_report(tmp_path):
    out = tmp_path / "reports" / "demo.json"
    main(["run", str(SPECS / "demo_z3_dislocation.json"), "--out", str(out)])
    pngs = sorted(p.name for p in out.parent.glob("*.png"))
    assert "demo_lattice0.png" in pngs and "demo_gsd.png" in pngs


def test_sketch(tmp_path):
    out = tmp_path / "s.svg"
    code = main(["sketch", str(SPECS / "demo_z3_dislocation.json"), "--out", str(out),
                 "--start", "(0,0)", "F(2,0)", "--moves", "RDD"])
    assert code == EXIT_PASS
    assert out.read_text().lstrip().startswith("<?xml")


def test_sketch_bad_site(tmp_path):
    assert main(["sketch", str(SPECS / "demo_z3_dislocation.json"),
                 "--start", "nowhere", "F(0,0)", "--moves", "R"]) == EXIT_SPEC
