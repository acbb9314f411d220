"""Directed square lattices as combinatorial maps.

Horizontal edges point right, vertical edges point up.  Faces carry a
counterclockwise boundary walk of (edge, sign) entries, sign +1 when the
walk agrees with the edge direction.  Dotted edges close walks
geometrically but carry no qudit; they appear on rough boundaries and
along dislocation lines.

A dislocation line sits on the top edges of a horizontal run of faces.
Each face below the line is paired with a midpoint vertex on its top edge,
and each line vertex is paired with the face above it; a paired vertex and
face contribute a single product term (see ``stabilizers.assemble``).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .group import GroupSpec

SIDES = ("bottom", "right", "top", "left")
BOUNDARY_KINDS = ("rough", "smooth")
TOPOLOGIES = ("torus", "planar", "cylinder")
DIRECTIONS = {"U": (0, 1), "D": (0, -1), "L": (-1, 0), "R": (1, 0)}


class LatticeError(ValueError):
    pass


@dataclass(frozen=True)
class Vertex:
    name: str
    pos: tuple[float, float]
    role: str = "bulk"  # bulk | side | pseudo | mid | line


@dataclass(frozen=True)
class Edge:
    name: str
    tail: int
    head: int
    disp: tuple[float, float]
    dotted: bool = False


@dataclass(frozen=True)
class Face:
    name: str
    walk: tuple[tuple[int, int], ...]
    role: str = "bulk"  # bulk | open | corner | line


@dataclass(frozen=True)
class Hybrid:
    """A vertex and a face whose operators are fused into one term."""
    vertex: int
    face: int
    kind: str  # BtildeF | Q1 | AtildeV
    line: int


@dataclass(frozen=True)
class DislocationLine:
    faces: tuple[int, ...]
    endpoints: tuple[int, int]
    dotted: tuple[int, ...]
    extra: tuple[int, int]
    midpoints: tuple[int, ...]
    row: int
    start: int
    stop: int


@dataclass(frozen=True)
class Site:
    vertex: int
    face: int


@dataclass(frozen=True)
class RibbonPath:
    """Direct (vertex-to-vertex) and dual (face-to-face) strings of a ribbon.

    Entries are (qudit, sign, part) where ``part`` counts the dislocation
    crossings made before the step; sign +1 means the string runs along the
    edge direction (direct) or along the counterclockwise-rotated edge
    direction (dual).
    """
    start: Site
    end: Site
    direct: tuple[tuple[int, int, int], ...] = ()
    dual: tuple[tuple[int, int, int], ...] = ()
    crossings: tuple[int, ...] = ()
    moves: str = ""

    @property
    def crossing_count(self) -> int:
        return len(self.crossings)

    @property
    def is_closed(self) -> bool:
        return self.start == self.end

    def to_json(self) -> dict:
        return {"start": [self.start.vertex, self.start.face],
                "end": [self.end.vertex, self.end.face],
                "moves": self.moves, "crossings": list(self.crossings),
                "direct": [list(t) for t in self.direct],
                "dual": [list(t) for t in self.dual]}


def _classify(dx: float, dy: float) -> str:
    if abs(dx) >= abs(dy):
        if dx == 0:
            raise LatticeError("zero-length direction")
        return "R" if dx > 0 else "L"
    return "U" if dy > 0 else "D"


class Lattice:
    """Immutable lattice; build with the ``build_*`` functions."""

    def __init__(self, spec: GroupSpec, topology: str, rows: int, cols: int,
                 boundaries: Mapping[str, str], vertices: Sequence[Vertex],
                 edges: Sequence[Edge], faces: Sequence[Face],
                 hybrids: Sequence[Hybrid] = (), dislocations: Sequence[DislocationLine] = (),
                 line_specs: Sequence[Sequence[int]] = (), dual_of: str | None = None):
        self.spec = spec
        self.topology = topology
        self.rows = rows
        self.cols = cols
        self.boundaries = dict(boundaries)
        self.vertices = tuple(vertices)
        self.edges = tuple(edges)
        self.faces = tuple(faces)
        self.hybrids = tuple(hybrids)
        self.dislocations = tuple(dislocations)
        self.line_specs = tuple(tuple(x) for x in line_specs)
        self.dual_of = dual_of

        self.qudit_of: list[int] = []
        self.edge_of_qudit: list[int] = []
        for e in self.edges:
            if e.dotted:
                self.qudit_of.append(-1)
            else:
                self.qudit_of.append(len(self.edge_of_qudit))
                self.edge_of_qudit.append(len(self.qudit_of) - 1)
        self.vertex_index = {v.name: i for i, v in enumerate(self.vertices)}
        self.edge_index = {e.name: i for i, e in enumerate(self.edges)}
        self.face_index = {f.name: i for i, f in enumerate(self.faces)}

        self.star: list[list[int]] = [[] for _ in self.vertices]
        for i, e in enumerate(self.edges):
            self.star[e.tail].append(i)
            if e.head != e.tail:
                self.star[e.head].append(i)
        self.left_face: list[int | None] = [None] * len(self.edges)
        self.right_face: list[int | None] = [None] * len(self.edges)
        for fi, f in enumerate(self.faces):
            for e, s in f.walk:
                slot = self.left_face if s > 0 else self.right_face
                if slot[e] is not None:
                    raise LatticeError(f"edge {self.edges[e].name} on the same side of two faces")
                slot[e] = fi
        self.hybrid_of_vertex = {h.vertex: h for h in self.hybrids}
        self.hybrid_of_face = {h.face: h for h in self.hybrids}
        self.dotted_line_edges = {e for d in self.dislocations for e in d.dotted}

    # counts and lookups

    @property
    def edge_count(self) -> int:
        return len(self.edge_of_qudit)

    def vertex(self, name: str) -> int:
        return self.vertex_index[name]

    def edge(self, name: str) -> int:
        return self.edge_index[name]

    def face(self, name: str) -> int:
        return self.face_index[name]

    def qudit(self, edge_name: str) -> int:
        q = self.qudit_of[self.edge_index[edge_name]]
        if q < 0:
            raise LatticeError(f"edge {edge_name} is dotted and carries no qudit")
        return q

    def face_vertices(self, f: int) -> list[int]:
        out = []
        for e, s in self.faces[f].walk:
            ed = self.edges[e]
            out.append(ed.tail if s > 0 else ed.head)
        return out

    def is_site(self, s: Site) -> bool:
        return s.vertex in self.face_vertices(s.face)

    def euler_characteristic(self) -> int:
        return len(self.vertices) - len(self.edges) + len(self.faces)

    # term supports

    def vertex_has_term(self, v: int) -> bool:
        return self.vertices[v].role != "pseudo" and v not in self.hybrid_of_vertex

    def face_has_term(self, f: int) -> bool:
        return f not in self.hybrid_of_face

    def vertex_signs(self, v: int) -> list[tuple[int, int]]:
        """(qudit, +1 incoming / -1 outgoing) for every solid edge at v."""
        out = []
        for e in self.star[v]:
            ed = self.edges[e]
            if ed.dotted:
                continue
            q = self.qudit_of[e]
            if ed.head == v:
                out.append((q, 1))
            if ed.tail == v:
                out.append((q, -1))
        return out

    def face_signs(self, f: int) -> list[tuple[int, int]]:
        return [(self.qudit_of[e], s) for e, s in self.faces[f].walk
                if not self.edges[e].dotted]

    def vertex_kind(self, v: int) -> str:
        return "AbarSmooth" if self.vertices[v].role == "side" else "Av"

    def face_kind(self, f: int) -> str:
        return "BbarRough" if self.faces[f].role in ("open", "corner") else "Bf"

    # geometry used by ribbon walkers

    def outward(self, v: int, e: int) -> tuple[float, float]:
        ed = self.edges[e]
        dx, dy = ed.disp
        return (dx, dy) if ed.tail == v else (-dx, -dy)

    def side_normal(self, e: int, s: int) -> tuple[float, float]:
        dx, dy = self.edges[e].disp
        return (s * dy, -s * dx)

    def other_vertex(self, v: int, e: int) -> int:
        ed = self.edges[e]
        return ed.head if ed.tail == v else ed.tail

    def other_face(self, f: int, e: int) -> int | None:
        lf, rf = self.left_face[e], self.right_face[e]
        return rf if lf == f else lf

    # serialization

    def spec_json(self) -> dict:
        return {"group": self.spec.to_json(), "topology": self.topology,
                "rows": self.rows, "cols": self.cols,
                "boundaries": dict(self.boundaries),
                "dislocations": [list(x) for x in self.line_specs]}

    def to_json(self) -> dict:
        out = self.spec_json()
        out["incidence"] = {
            "vertices": [{"name": v.name, "pos": list(v.pos), "role": v.role}
                         for v in self.vertices],
            "edges": [{"name": e.name, "tail": e.tail, "head": e.head,
                       "dotted": e.dotted, "qudit": self.qudit_of[i]}
                      for i, e in enumerate(self.edges)],
            "faces": [{"name": f.name, "role": f.role, "walk": [list(w) for w in f.walk]}
                      for f in self.faces],
            "hybrids": [{"vertex": h.vertex, "face": h.face, "kind": h.kind}
                        for h in self.hybrids],
        }
        return out

    def __repr__(self) -> str:
        return (f"Lattice({self.topology}, {self.rows}x{self.cols}, {self.spec!r}, "
                f"V={len(self.vertices)}, E={self.edge_count}, F={len(self.faces)}, "
                f"lines={len(self.dislocations)})")


class _Builder:
    """Name-keyed mutable staging area; ``freeze`` assigns integer ids."""

    def __init__(self):
        self.vertices: dict[str, Vertex] = {}
        self.edges: dict[str, tuple[str, str, tuple[float, float], bool]] = {}
        self.faces: dict[str, tuple[list[tuple[str, int]], str]] = {}
        self.hybrids: list[tuple[str, str, str, int]] = []
        self.lines: list[dict] = []

    @classmethod
    def from_lattice(cls, lat: Lattice) -> "_Builder":
        b = cls()
        for v in lat.vertices:
            b.vertices[v.name] = v
        for e in lat.edges:
            b.edges[e.name] = (lat.vertices[e.tail].name, lat.vertices[e.head].name, e.disp, e.dotted)
        for f in lat.faces:
            b.faces[f.name] = ([(lat.edges[e].name, s) for e, s in f.walk], f.role)
        for h in lat.hybrids:
            b.hybrids.append((lat.vertices[h.vertex].name, lat.faces[h.face].name, h.kind, h.line))
        for d in lat.dislocations:
            b.lines.append({
                "faces": [lat.faces[f].name for f in d.faces],
                "dotted": [lat.edges[e].name for e in d.dotted],
                "extra": [lat.edges[e].name for e in d.extra],
                "midpoints": [lat.vertices[m].name for m in d.midpoints],
                "row": d.row, "start": d.start, "stop": d.stop})
        return b

    def vertex(self, name, pos, role="bulk"):
        self.vertices[name] = Vertex(name, (float(pos[0]), float(pos[1])), role)

    def edge(self, name, tail, head, disp, dotted=False):
        self.edges[name] = (tail, head, (float(disp[0]), float(disp[1])), dotted)

    def face(self, name, walk, role="bulk"):
        self.faces[name] = (list(walk), role)

    def freeze(self, spec, topology, rows, cols, boundaries, line_specs, dual_of=None) -> Lattice:
        vnames = list(self.vertices)
        vid = {n: i for i, n in enumerate(vnames)}
        enames = list(self.edges)
        eid = {n: i for i, n in enumerate(enames)}
        fnames = list(self.faces)
        fid = {n: i for i, n in enumerate(fnames)}
        edges = [Edge(n, vid[t], vid[h], d, dot) for n, (t, h, d, dot) in self.edges.items()]
        faces = [Face(n, tuple((eid[e], s) for e, s in walk), role)
                 for n, (walk, role) in self.faces.items()]
        hybrids = [Hybrid(vid[v], fid[f], k, li) for v, f, k, li in self.hybrids]
        lines = [DislocationLine(tuple(fid[f] for f in d["faces"]),
                                 (fid[d["faces"][0]], fid[d["faces"][-1]]),
                                 tuple(eid[e] for e in d["dotted"]),
                                 (eid[d["extra"][0]], eid[d["extra"][1]]),
                                 tuple(vid[m] for m in d["midpoints"]),
                                 d["row"], d["start"], d["stop"]) for d in self.lines]
        return Lattice(spec, topology, rows, cols, boundaries, list(self.vertices.values()),
                       edges, faces, hybrids, lines, line_specs, dual_of)


def _check_size(rows: int, cols: int, least: int = 2) -> None:
    if rows < least or cols < least:
        raise LatticeError(f"lattice needs rows, cols >= {least}, got {rows}x{cols}")


def build_torus(spec: GroupSpec, rows: int, cols: int) -> Lattice:
    _check_size(rows, cols)
    b = _Builder()
    for j in range(rows):
        for i in range(cols):
            b.vertex(f"({i},{j})", (i, j))
    for j in range(rows):
        for i in range(cols):
            b.edge(f"h({i},{j})", f"({i},{j})", f"({(i + 1) % cols},{j})", (1, 0))
            b.edge(f"v({i},{j})", f"({i},{j})", f"({i},{(j + 1) % rows})", (0, 1))
    for j in range(rows):
        for i in range(cols):
            b.face(f"F({i},{j})", [(f"h({i},{j})", 1), (f"v({(i + 1) % cols},{j})", 1),
                                   (f"h({i},{(j + 1) % rows})", -1), (f"v({i},{j})", -1)])
    return b.freeze(spec, "torus", rows, cols, {}, ())


def _normalize_boundaries(topology: str, boundaries) -> dict[str, str]:
    sides = ("bottom", "top") if topology == "cylinder" else SIDES
    if isinstance(boundaries, str):
        boundaries = {s: boundaries for s in sides}
    elif isinstance(boundaries, (list, tuple)):
        if len(boundaries) == 1:
            boundaries = list(boundaries) * len(sides)
        if len(boundaries) != len(sides):
            raise LatticeError(f"{topology} needs {len(sides)} boundary kinds {sides}, "
                               f"got {list(boundaries)}")
        boundaries = dict(zip(sides, boundaries))
    out = {}
    for s in sides:
        k = boundaries.get(s)
        if k not in BOUNDARY_KINDS:
            raise LatticeError(f"boundary side {s!r} must be one of {BOUNDARY_KINDS}, got {k!r}")
        out[s] = k
    extra = set(boundaries) - set(sides)
    if extra:
        raise LatticeError(f"unknown boundary sides {sorted(extra)} for {topology}")
    return out


def build_planar(spec: GroupSpec, rows: int, cols: int, boundaries,
                 topology: str = "planar") -> Lattice:
    """Disk (``planar``) or annulus periodic in x (``cylinder``).

    ``boundaries`` maps sides to ``rough``/``smooth``; a list is read in the
    order bottom, right, top, left (bottom, top for a cylinder).
    """
    if topology not in ("planar", "cylinder"):
        raise LatticeError(f"build_planar does not build {topology!r}")
    _check_size(rows, cols, 1)
    if topology == "cylinder" and cols < 2:
        # one column would make every horizontal edge a loop
        raise LatticeError("cylinder needs at least 2 columns")
    kinds = _normalize_boundaries(topology, boundaries)
    per = topology == "cylinder"
    vcols = cols if per else cols + 1
    b = _Builder()

    def smooth_side(i, j):
        on = []
        if j == 0:
            on.append("bottom")
        if j == rows:
            on.append("top")
        if not per and i == 0:
            on.append("left")
        if not per and i == cols:
            on.append("right")
        return any(kinds[s] == "smooth" for s in on)

    for j in range(rows + 1):
        for i in range(vcols):
            b.vertex(f"({i},{j})", (i, j), "side" if smooth_side(i, j) else "bulk")
    for j in range(rows + 1):
        for i in range(vcols):
            if per or i < cols:
                b.edge(f"h({i},{j})", f"({i},{j})", f"({(i + 1) % vcols},{j})", (1, 0))
            if j < rows:
                b.edge(f"v({i},{j})", f"({i},{j})", f"({i},{j + 1})", (0, 1))
    for j in range(rows):
        for i in range(cols):
            b.face(f"F({i},{j})", [(f"h({i},{j})", 1), (f"v({(i + 1) % vcols},{j})", 1),
                                   (f"h({i},{j + 1})", -1), (f"v({i},{j})", -1)])

    nxt = lambda i: (i + 1) % vcols
    if kinds["bottom"] == "rough":
        for i in range(vcols):
            b.vertex(f"pb({i})", (i, -1), "pseudo")
            b.edge(f"db({i})", f"pb({i})", f"({i},0)", (0, 1))
        for i in range(cols):
            b.edge(f"xb({i})", f"pb({i})", f"pb({nxt(i)})", (1, 0), dotted=True)
            b.face(f"Ob({i})", [(f"xb({i})", 1), (f"db({nxt(i)})", 1),
                                (f"h({i},0)", -1), (f"db({i})", -1)], "open")
    if kinds["top"] == "rough":
        for i in range(vcols):
            b.vertex(f"pt({i})", (i, rows + 1), "pseudo")
            b.edge(f"dt({i})", f"({i},{rows})", f"pt({i})", (0, 1))
        for i in range(cols):
            b.edge(f"xt({i})", f"pt({i})", f"pt({nxt(i)})", (1, 0), dotted=True)
            b.face(f"Ot({i})", [(f"h({i},{rows})", 1), (f"dt({nxt(i)})", 1),
                                (f"xt({i})", -1), (f"dt({i})", -1)], "open")
    if not per:
        if kinds["left"] == "rough":
            for j in range(rows + 1):
                b.vertex(f"pl({j})", (-1, j), "pseudo")
                b.edge(f"dl({j})", f"pl({j})", f"(0,{j})", (1, 0))
            for j in range(rows):
                b.edge(f"xl({j})", f"pl({j})", f"pl({j + 1})", (0, 1), dotted=True)
                b.face(f"Ol({j})", [(f"dl({j})", 1), (f"v(0,{j})", 1),
                                    (f"dl({j + 1})", -1), (f"xl({j})", -1)], "open")
        if kinds["right"] == "rough":
            for j in range(rows + 1):
                b.vertex(f"pr({j})", (cols + 1, j), "pseudo")
                b.edge(f"dr({j})", f"({cols},{j})", f"pr({j})", (1, 0))
            for j in range(rows):
                b.edge(f"xr({j})", f"pr({j})", f"pr({j + 1})", (0, 1), dotted=True)
                b.face(f"Or({j})", [(f"dr({j})", 1), (f"xr({j})", 1),
                                    (f"dr({j + 1})", -1), (f"v({cols},{j})", -1)], "open")
        # where two rough sides meet, the two danglings at the corner bound a 2-edge face
        if kinds["bottom"] == kinds["left"] == "rough":
            b.edge("cbl", "pl(0)", "pb(0)", (1, -1), dotted=True)
            b.face("Cbl", [("db(0)", 1), ("dl(0)", -1), ("cbl", 1)], "corner")
        if kinds["bottom"] == kinds["right"] == "rough":
            b.edge("cbr", f"pb({cols})", "pr(0)", (1, 1), dotted=True)
            b.face("Cbr", [("cbr", 1), ("dr(0)", -1), (f"db({cols})", -1)], "corner")
        if kinds["top"] == kinds["right"] == "rough":
            b.edge("ctr", f"pr({rows})", f"pt({cols})", (-1, 1), dotted=True)
            b.face("Ctr", [(f"dr({rows})", 1), ("ctr", 1), (f"dt({cols})", -1)], "corner")
        if kinds["top"] == kinds["left"] == "rough":
            b.edge("ctl", "pt(0)", f"pl({rows})", (-1, -1), dotted=True)
            b.face("Ctl", [("dt(0)", 1), ("ctl", 1), (f"dl({rows})", 1)], "corner")
    return b.freeze(spec, topology, rows, cols, kinds, ())


_FACE_RE = re.compile(r"F\((\d+),(\d+)\)")


def insert_dislocation(lat: Lattice, face_path: Sequence[int]) -> Lattice:
    """Insert a straight horizontal dislocation along the top of ``face_path``.

    Face ids are core faces ``row * cols + col`` listed left to right.
    """
    if lat.dual_of is not None:
        raise LatticeError("dislocations are inserted on direct lattices only")
    path = [int(f) for f in face_path]
    if len(path) < 2:
        raise LatticeError("a dislocation needs at least 2 faces")
    if len(set(path)) != len(path):
        raise LatticeError("dislocation face path intersects itself")
    cells = []
    for fid in path:
        if not 0 <= fid < len(lat.faces):
            raise LatticeError(f"face id {fid} out of range")
        m = _FACE_RE.fullmatch(lat.faces[fid].name)
        if not m:
            raise LatticeError(f"face {fid} ({lat.faces[fid].name}) is not a core face")
        cells.append((int(m.group(1)), int(m.group(2))))
    rows, cols = lat.rows, lat.cols
    per_x = lat.topology in ("torus", "cylinder")
    per_y = lat.topology == "torus"
    j0 = cells[0][1]
    if any(c[1] != j0 for c in cells):
        raise LatticeError("dislocation lines must be straight horizontal face runs")
    a = cells[0][0]
    for k, (i, _) in enumerate(cells):
        want = (a + k) % cols if per_x else a + k
        if i != want:
            raise LatticeError("dislocation faces must be consecutive left to right")
    L = len(cells)
    b = a + L - 1
    Y = j0 + 1
    if per_x and L + 1 > cols:
        raise LatticeError(f"a length-{L} line needs at least {L + 1} columns")
    if not per_x and (a < 1 or b > cols - 2):
        raise LatticeError("dislocation line touches a boundary")
    if per_y:
        Y %= rows
        if rows < 2:
            raise LatticeError("dislocation needs at least 2 rows")
    elif not 1 <= Y <= rows - 1:
        raise LatticeError("dislocation line touches a boundary")

    n = (lambda i: i % cols) if per_x else (lambda i: i)
    ny = (lambda j: j % rows) if per_y else (lambda j: j)
    F = lambda i, j: f"F({n(i)},{ny(j)})"
    P = lambda i: f"({n(i)},{Y})"
    H = lambda i: f"h({n(i)},{Y})"
    V = lambda i: f"v({n(i)},{Y})"
    Mid = lambda i: f"m({n(i)},{Y})"

    bld = _Builder.from_lattice(lat)
    touched = {F(k, Y - 1) for k in range(a - 1, b + 2)} | {F(k, Y) for k in range(a - 1, b + 2)}
    for name in touched:
        if name not in bld.faces or bld.faces[name][1] != "bulk":
            raise LatticeError(f"face {name} near the line is not a plain bulk face")
    line_no = len(bld.lines)
    dotted: list[str] = []

    for k in range(a, b + 1):
        bld.vertex(Mid(k), (k + 0.5, Y), "mid")
        t, h, _, _ = bld.edges[V(k)]
        bld.edges[V(k)] = (Mid(k), h, (-0.5, 1.0), False)
    # left end: x3 = h(a,Y) now stops at the midpoint
    bld.edges[H(a)] = (P(a), Mid(a), (0.5, 0.0), False)
    bld.edge(f"dot+{Mid(a)}", Mid(a), P(a + 1), (0.5, 0), dotted=True)
    dotted.append(f"dot+{Mid(a)}")
    for k in range(a + 1, b):
        del bld.edges[H(k)]
        bld.edge(f"dot-{Mid(k)}", P(k), Mid(k), (0.5, 0), dotted=True)
        bld.edge(f"dot+{Mid(k)}", Mid(k), P(k + 1), (0.5, 0), dotted=True)
        dotted += [f"dot-{Mid(k)}", f"dot+{Mid(k)}"]
    # right end: x3' = h(b,Y) starts at the midpoint
    t, h, _, _ = bld.edges[H(b)]
    bld.edges[H(b)] = (Mid(b), h, (0.5, 0.0), False)
    bld.edge(f"dot-{Mid(b)}", P(b), Mid(b), (0.5, 0), dotted=True)
    dotted.append(f"dot-{Mid(b)}")

    def top_run(k):  # from (k+1,Y) back to (k,Y) through the midpoint
        right = f"dot+{Mid(k)}" if k < b else H(b)
        left = H(a) if k == a else f"dot-{Mid(k)}"
        return [(right, -1), (left, -1)]

    for k in range(a, b + 1):
        name = F(k, Y - 1)
        bld.faces[name] = ([(f"h({n(k)},{ny(Y - 1)})", 1), (f"v({n(k + 1)},{ny(Y - 1)})", 1)]
                           + top_run(k) + [(f"v({n(k)},{ny(Y - 1)})", -1)], "line")
    top = lambda k: (f"h({n(k)},{ny(Y + 1)})", -1)
    bld.faces[F(a - 1, Y)] = ([(H(a - 1), 1), (H(a), 1), (V(a), 1), top(a - 1), (V(a - 1), -1)],
                              "line")
    for k in range(a, b):
        walk = [(f"dot+{Mid(k)}", 1), (f"dot-{Mid(k + 1)}", 1)]
        bld.faces[F(k, Y)] = (walk + [(V(k + 1), 1), top(k), (V(k), -1)], "line")
    bld.faces[F(b, Y)] = (bld.faces[F(b, Y)][0], "line")

    for k in range(a + 1, b + 1):
        bld.vertices[P(k)] = Vertex(P(k), bld.vertices[P(k)].pos, "line")
    bld.hybrids.append((Mid(a), F(a, Y - 1), "Q1", line_no))
    for k in range(a + 1, b):
        bld.hybrids.append((Mid(k), F(k, Y - 1), "BtildeF", line_no))
    bld.hybrids.append((Mid(b), F(b, Y - 1), "Q1", line_no))
    for k in range(a + 1, b + 1):
        bld.hybrids.append((P(k), F(k - 1, Y), "AtildeV", line_no))
    bld.lines.append({"faces": [F(k, Y - 1) for k in range(a, b + 1)], "dotted": dotted,
                      "extra": [H(a), H(b)], "midpoints": [Mid(k) for k in range(a, b + 1)],
                      "row": Y, "start": n(a), "stop": n(b)})
    lat2 = bld.freeze(lat.spec, lat.topology, rows, cols, lat.boundaries,
                      list(lat.line_specs) + [path])
    validate(lat2)
    return lat2


def build_lattice(spec: GroupSpec, topology: str, rows: int, cols: int,
                  boundaries=None, dislocations: Iterable[Sequence[int]] = ()) -> Lattice:
    if topology == "torus":
        if boundaries:
            raise LatticeError("a torus has no boundaries")
        lat = build_torus(spec, rows, cols)
    elif topology in ("planar", "cylinder"):
        if boundaries is None:
            raise LatticeError(f"{topology} lattice needs boundary kinds")
        lat = build_planar(spec, rows, cols, boundaries, topology)
    else:
        raise LatticeError(f"unknown topology {topology!r}; expected one of {TOPOLOGIES}")
    for path in dislocations:
        lat = insert_dislocation(lat, path)
    return lat


def lattice_from_json(data: Mapping) -> Lattice:
    for key in ("group", "topology", "rows", "cols"):
        if key not in data:
            raise LatticeError(f"lattice spec missing field {key!r}")
    spec = GroupSpec.from_json(data["group"])
    return build_lattice(spec, data["topology"], int(data["rows"]), int(data["cols"]),
                         data.get("boundaries") or None, data.get("dislocations") or ())


EXPECTED_EULER = {"torus": 0, "planar": 1, "cylinder": 0}


def validate(lat: Lattice) -> list[str]:
    """Structural checks; raises LatticeError listing every problem found."""
    problems = []
    for f in lat.faces:
        walk = f.walk
        if not walk:
            problems.append(f"face {f.name} has an empty walk")
            continue
        ends = []
        for e, s in walk:
            ed = lat.edges[e]
            ends.append((ed.tail, ed.head) if s > 0 else (ed.head, ed.tail))
        for (a0, a1), (b0, _) in zip(ends, ends[1:] + ends[:1]):
            if a1 != b0:
                problems.append(f"face {f.name} walk is not a closed cycle")
                break
        # counterclockwise orientation from the signed area of the walk
        x = y = area = 0.0
        for e, s in walk:
            dx, dy = lat.edges[e].disp
            dx, dy = s * dx, s * dy
            area += x * dy - y * dx
            x += dx
            y += dy
        if abs(x) > 1e-9 or abs(y) > 1e-9:
            problems.append(f"face {f.name} walk does not close geometrically")
        elif area <= 0:
            problems.append(f"face {f.name} walk is not counterclockwise")
    for i, e in enumerate(lat.edges):
        n_faces = (lat.left_face[i] is not None) + (lat.right_face[i] is not None)
        if lat.topology == "torus" and lat.dual_of is None and n_faces != 2:
            problems.append(f"edge {e.name} borders {n_faces} faces on a torus")
        if n_faces > 2:
            problems.append(f"edge {e.name} borders {n_faces} faces")
    chi = lat.euler_characteristic()
    if lat.dual_of is None and chi != EXPECTED_EULER[lat.topology]:
        problems.append(f"Euler characteristic {chi} does not match {lat.topology}")
    for h in lat.hybrids:
        if h.vertex not in lat.face_vertices(h.face):
            problems.append(f"hybrid vertex {lat.vertices[h.vertex].name} "
                            f"not on face {lat.faces[h.face].name}")
    for d in lat.dislocations:
        for end in d.endpoints:
            hv = lat.hybrid_of_face.get(end)
            if hv is None or hv.kind != "Q1":
                problems.append("dislocation endpoint face is not a Q1 hybrid")
                continue
            support = {q for q, _ in lat.face_signs(end)} | {q for q, _ in lat.vertex_signs(hv.vertex)}
            if len(support) != 5:
                problems.append(f"endpoint {lat.faces[end].name} has {len(support)} edges, not 5")
    if problems:
        raise LatticeError("; ".join(problems))
    return problems


# dual lattice

def dual_lattice(lat: Lattice) -> Lattice:
    """Faces become vertices and vertices become faces.

    Each edge e maps to e* running from the face on its right to the face on
    its left (the edge rotated a quarter turn counterclockwise).  Edges with
    a missing side dangle to a pseudo vertex; rough and smooth tags swap.
    Hybrid pairs (v, f) become (f*, v*).
    """
    b = _Builder()
    cent = {}
    for fi, f in enumerate(lat.faces):
        x = y = 0.0
        pts = []
        for e, s in f.walk:
            pts.append((x, y))
            dx, dy = lat.edges[e].disp
            x += s * dx
            y += s * dy
        first = lat.face_vertices(fi)[0]
        ox, oy = lat.vertices[first].pos
        cx = ox + sum(p[0] for p in pts) / len(pts)
        cy = oy + sum(p[1] for p in pts) / len(pts)
        cent[fi] = (cx, cy)
        role = {"open": "side", "corner": "side", "line": "bulk"}.get(f.role, "bulk")
        b.vertex(f"{f.name}*", (cx, cy), role)

    def dname(e):
        return f"{lat.edges[e].name}*"

    ends = {}
    for i, e in enumerate(lat.edges):
        dx, dy = e.disp
        nx, ny = -dy, dx
        mx = lat.vertices[e.tail].pos[0] + dx / 2
        my = lat.vertices[e.tail].pos[1] + dy / 2
        lf, rf = lat.left_face[i], lat.right_face[i]
        if rf is None:
            t = f"o-{e.name}*"
            b.vertex(t, (mx - nx / 2, my - ny / 2), "pseudo")
        else:
            t = f"{lat.faces[rf].name}*"
        if lf is None:
            h = f"o+{e.name}*"
            b.vertex(h, (mx + nx / 2, my + ny / 2), "pseudo")
        else:
            h = f"{lat.faces[lf].name}*"
        b.edge(dname(i), t, h, (nx, ny), dotted=e.dotted)
        ends[i] = (t, h)

    n_closures = 0
    for vi, v in enumerate(lat.vertices):
        # walk counterclockwise around v: each incident edge in angular order
        inc = []
        for e in lat.star[vi]:
            ox, oy = lat.outward(vi, e)
            inc.append((math.atan2(oy, ox), e))
        inc.sort()
        walk = []
        for k, (_, e) in enumerate(inc):
            ed = lat.edges[e]
            # e* crosses the ray from v; counterclockwise motion agrees with
            # e* exactly when e points away from v
            s = 1 if ed.tail == vi else -1
            walk.append((dname(e), s))
            nxt = inc[(k + 1) % len(inc)][1]
            here = ends[e][1] if s > 0 else ends[e][0]
            there_s = 1 if lat.edges[nxt].tail == vi else -1
            there = ends[nxt][0] if there_s > 0 else ends[nxt][1]
            if here != there:
                cname = f"c{n_closures}*"
                n_closures += 1
                p0 = b.vertices[here].pos
                p1 = b.vertices[there].pos
                b.edge(cname, here, there, (p1[0] - p0[0], p1[1] - p0[1]), dotted=True)
                walk.append((cname, 1))
        if not walk:
            continue
        if v.role == "pseudo":
            role = "outer"
        elif v.role == "side":
            role = "open"
        else:
            role = "bulk"
        b.face(f"{v.name}*", walk, role)
    # pseudo-vertex faces of the direct lattice sit outside the dual region
    for name in [n for n, (_, r) in b.faces.items() if r == "outer"]:
        del b.faces[name]
    for h in lat.hybrids:
        b.hybrids.append((f"{lat.faces[h.face].name}*", f"{lat.vertices[h.vertex].name}*",
                          h.kind, h.line))
    swap = {"rough": "smooth", "smooth": "rough"}
    kinds = {s: swap[k] for s, k in lat.boundaries.items()}
    return b.freeze(lat.spec, lat.topology, lat.rows, lat.cols, kinds, lat.line_specs,
                    dual_of=lat.topology)


def reverse_edges(lat: Lattice) -> Lattice:
    b = _Builder.from_lattice(lat)
    for n, (t, h, (dx, dy), dot) in list(b.edges.items()):
        b.edges[n] = (h, t, (-dx, -dy), dot)
    for n, (walk, role) in list(b.faces.items()):
        b.faces[n] = ([(e, -s) for e, s in walk], role)
    return b.freeze(lat.spec, lat.topology, lat.rows, lat.cols, lat.boundaries,
                    lat.line_specs, lat.dual_of)
