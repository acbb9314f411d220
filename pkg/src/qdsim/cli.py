"""Command line front end: ``qdsim run`` and ``qdsim sketch``."""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import __version__
from .lattice import LatticeError, Site, lattice_from_json
from .ribbons import RibbonError, ribbon_between
from .statevector import CapExceeded
from .suites import (REPORT_VERSION, SUITES, SpecError, canonical, parse_experiment,
                     run_suite, _lattice_only)

EXIT_PASS, EXIT_FAIL, EXIT_SPEC, EXIT_CAP = 0, 1, 2, 3
DELIMITER = "----- report -----"


def _load_spec(path: str) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SpecError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def build_report(data: dict, suites: list[str] | None = None, cap: int | None = None,
                 tol: float | None = None, parallel: bool = False) -> dict:
    if suites:
        data = dict(data, suites=list(suites))
    if cap is not None:
        data = dict(data, caps=dict(data.get("caps", {}), amplitudes=cap))
    if tol is not None:
        data = dict(data, tol=tol)
    exp = parse_experiment(data)
    timings = {}

    def timed(name):
        t0 = time.perf_counter()
        out = run_suite(name, exp)
        timings[name] = round(time.perf_counter() - t0, 3)
        return out

    if parallel and len(exp.suites) > 1:
        with ThreadPoolExecutor() as pool:
            results = list(pool.map(timed, exp.suites))
    else:
        results = [timed(name) for name in exp.suites]
    order = {name: i for i, name in enumerate(exp.suites)}
    results.sort(key=lambda r: order[r["name"]])
    return {"version": REPORT_VERSION, "spec_echo": data, "suites": results,
            "timings": {k: timings[k] for k in exp.suites}}


def verdict_body(report: dict) -> str:
    """The deterministic part of a report: everything but the timings."""
    return canonical({k: v for k, v in report.items() if k != "timings"})


def text_summary(report: dict) -> str:
    lines = []
    if not report["suites"]:
        return "NO SUITES SELECTED"
    for s in report["suites"]:
        line = f"{s['name']:<18} {s['verdict'].upper()}"
        if s["name"] == "commutation" and s["verdict"] == "fail":
            for row in s["details"]["lattices"]:
                for v in row["violations"][:1]:
                    line += f"  {v['a']} vs {v['b']}: phase {v['phase_num']}/{v['phase_den']}"
        lines.append(line)
    failed = [s["name"] for s in report["suites"] if s["verdict"] != "pass"]
    lines.append("ALL PASS" if not failed else "FAILED: " + ", ".join(failed))
    return "\n".join(lines)


def render_figures(report: dict, outdir: Path, stem: str) -> list[Path]:
    from . import plotting
    from .suites import _explicit_path

    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    lattices = report["spec_echo"].get("lattices") or (
        [report["spec_echo"]["lattice"]] if "lattice" in report["spec_echo"] else [])
    transports = next((s["details"]["transports"] for s in report["suites"]
                       if s["name"] == "ribbon_transport"), [])
    for i, entry in enumerate(lattices):
        lat = lattice_from_json(_lattice_only(entry))
        paths = []
        for row in transports:
            if row["lattice"] == (entry.get("label") or repr(lat)):
                paths.append(_explicit_path(lat, {"start": row["path"]["start"],
                                                  "end": row["path"]["end"],
                                                  "moves": row["path"]["moves"]}))
        written.append(plotting.save_lattice_sketch(
            lat, outdir / f"{stem}_lattice{i}.png", paths, entry.get("label") or repr(lat)))
    for s in report["suites"]:
        if s["name"] == "gsd" and s["details"]["lattices"]:
            written.append(plotting.gsd_bars(s["details"]["lattices"], outdir / f"{stem}_gsd.png"))
        if s["name"] == "fusion":
            for row in s["details"]["rings"]:
                written.append(plotting.s_phase_plot(row["n"], outdir / f"{stem}_S{row['n']}.png"))
    return written


def cmd_run(args) -> int:
    try:
        data = _load_spec(args.spec)
        report = build_report(data, args.suite, args.cap_amplitudes, args.tol, args.parallel)
    except SpecError as exc:
        print(f"spec error: {exc}", file=sys.stderr)
        return EXIT_SPEC
    except CapExceeded as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    body = verdict_body(report) if args.no_timings else canonical(report)
    if args.out:
        out = Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(body + "\n", encoding="utf-8")
    if args.format in ("text", "both"):
        print(text_summary(report))
    if args.format in ("json", "both"):
        if args.format == "both":
            print(DELIMITER)
        print(body)
    figdir = args.figures or (Path(args.out).parent if args.out else None)
    if figdir and not args.no_figures and report["suites"]:
        stem = Path(args.out).stem if args.out else Path(args.spec).stem
        for p in render_figures(report, Path(figdir), stem):
            print(f"figure: {p}", file=sys.stderr)
    if not report["suites"]:
        return EXIT_PASS
    return EXIT_PASS if all(s["verdict"] == "pass" for s in report["suites"]) else EXIT_FAIL


def cmd_sketch(args) -> int:
    from . import plotting

    try:
        data = _load_spec(args.spec)
        entries = data.get("lattices") or [data.get("lattice", data)]
        entry = entries[args.index]
        lat = lattice_from_json(_lattice_only(entry))
        paths = []
        if args.start:
            s1 = Site(lat.vertex(args.start[0]), lat.face(args.start[1]))
            s2 = Site(lat.vertex(args.end[0]), lat.face(args.end[1])) if args.end else None
            if args.moves is not None:
                from .ribbons import ribbon_walk
                paths.append(ribbon_walk(lat, s1, args.moves))
            elif s2 is not None:
                paths.append(ribbon_between(lat, s1, s2, {"crossings": args.crossings}))
    except (SpecError, LatticeError, RibbonError, IndexError, KeyError) as exc:
        print(f"spec error: {exc}", file=sys.stderr)
        return EXIT_SPEC
    out = Path(args.out or Path(args.spec).with_suffix(".svg").name)
    plotting.save_lattice_sketch(lat, out, paths, entry.get("label") or repr(lat))
    print(out)
    return EXIT_PASS


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qdsim", description="Z_N quantum double lattice verifier")
    p.add_argument("--version", action="version", version=f"qdsim {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run verification suites from an experiment spec")
    r.add_argument("spec")
    r.add_argument("--suite", action="append", choices=SUITES,
                   help="suite to run (repeatable; overrides the experiment file)")
    r.add_argument("--out", help="write the JSON report here")
    r.add_argument("--cap-amplitudes", type=int, dest="cap_amplitudes")
    r.add_argument("--tol", type=float)
    r.add_argument("--format", choices=("json", "text", "both"), default="text")
    r.add_argument("--parallel", action="store_true", help="run suites concurrently")
    r.add_argument("--figures", help="directory for PNG figures (default: next to --out)")
    r.add_argument("--no-figures", action="store_true")
    r.add_argument("--no-timings", action="store_true",
                   help="drop the timings field so the report is byte-reproducible")
    r.set_defaults(func=cmd_run)

    s = sub.add_parser("sketch", help="draw a lattice (geometry only)")
    s.add_argument("spec")
    s.add_argument("--index", type=int, default=0, help="which lattice of the experiment file")
    s.add_argument("--out", help="output file; .svg or .png")
    s.add_argument("--start", nargs=2, metavar=("VERTEX", "FACE"))
    s.add_argument("--end", nargs=2, metavar=("VERTEX", "FACE"))
    s.add_argument("--moves")
    s.add_argument("--crossings", type=int, default=0)
    s.set_defaults(func=cmd_sketch)
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    if args.command == "run" and args.cap_amplitudes is not None and args.cap_amplitudes <= 0:
        print("spec error: --cap-amplitudes must be positive", file=sys.stderr)
        return EXIT_SPEC
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
