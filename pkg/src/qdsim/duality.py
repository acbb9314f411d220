"""Electric-magnetic duality through the generalized Hadamard on every edge.

With U = sum_g |psi_g><g| and psi_g = N^-1/2 sum_h w^{gh} |h>:
    U Z U^dag = X^-1,   U X U^dag = Z,
so X^x Z^z maps to Z^x X^-z = w^{-xz} X^-z Z^x on the dual edge.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .lattice import Lattice, dual_lattice
from .stabilizers import StabilizerSet, StabilizerTerm, assemble
from .statevector import DEFAULT_CAP, StateVector, check_cap
from .weyl import WeylWord, clock_shift


class DualityError(ValueError):
    pass


def hadamard_dense(n: int) -> np.ndarray:
    g = np.arange(n)
    return np.exp(2j * np.pi * np.outer(g, g) / n) / np.sqrt(n)


KIND_SWAP = {"Av": "Bf", "Bf": "Av", "AbarSmooth": "BbarRough", "BbarRough": "AbarSmooth",
             "Q1": "Q1", "BtildeF": "AtildeV", "AtildeV": "BtildeF"}


@dataclass
class DualityMap:
    source: Lattice
    target: Lattice
    qudits: np.ndarray      # source qudit -> target qudit

    @classmethod
    def of(cls, lat: Lattice) -> "DualityMap":
        dual = dual_lattice(lat)
        q = np.array([dual.qudit(lat.edges[lat.edge_of_qudit[i]].name + "*")
                      for i in range(lat.edge_count)], dtype=np.int64)
        if sorted(q.tolist()) != list(range(dual.edge_count)):
            raise DualityError("edge correspondence is not a bijection")
        return cls(lat, dual, q)

    def face_of_vertex(self, v: int) -> int:
        return self.target.face(self.source.vertices[v].name + "*")

    def vertex_of_face(self, f: int) -> int:
        return self.target.vertex(self.source.faces[f].name + "*")

    def to_json(self) -> dict:
        return {"edges": {self.source.edges[self.source.edge_of_qudit[i]].name:
                          self.target.edges[self.target.edge_of_qudit[int(j)]].name
                          for i, j in enumerate(self.qudits)}}


def conjugate_word(word: WeylWord, dmap: DualityMap) -> WeylWord:
    """U_Sigma word U_Sigma^dag, re-indexed onto the dual lattice."""
    if word.edge_count != dmap.source.edge_count or word.spec != dmap.source.spec:
        raise DualityError("word does not live on the source lattice")
    e = dmap.target.edge_count
    x = np.zeros((e, word.spec.rank), dtype=np.int64)
    z = np.zeros((e, word.spec.rank), dtype=np.int64)
    x[dmap.qudits] = -word.z
    z[dmap.qudits] = word.x
    phase = word.phase
    for i, n in enumerate(word.spec.factors):
        phase -= Fraction(int((word.x[:, i] * word.z[:, i]).sum()), n)
    return WeylWord(word.spec, e, x, z, phase)


def dense_duality(dmap: DualityMap) -> np.ndarray:
    """U_Sigma as a dense matrix from source basis to target basis (small systems only)."""
    src = dmap.source
    mats = [hadamard_dense(n) for _ in range(src.edge_count) for n in src.spec.factors]
    u = np.ones((1, 1), dtype=complex)
    for m in mats:
        u = np.kron(u, m)
    return _permute_edges(u, dmap)


def _permute_edges(u: np.ndarray, dmap: DualityMap) -> np.ndarray:
    dims = [n for _ in range(dmap.source.edge_count) for n in dmap.source.spec.factors]
    rank = dmap.source.spec.rank
    axes = []
    inv = np.argsort(dmap.qudits)
    for tq in range(dmap.target.edge_count):
        sq = int(inv[tq])
        axes.extend(sq * rank + i for i in range(rank))
    t = u.reshape(dims + [u.shape[1]])
    t = np.transpose(t, axes + [len(dims)])
    return t.reshape(u.shape)


def dualize_state(state: StateVector, dmap: DualityMap, cap: int = DEFAULT_CAP) -> StateVector:
    check_cap(state.spec, state.edge_count, cap)
    dims = state.dims
    t = state.amplitudes.reshape(dims) if dims else state.amplitudes.copy()
    for ax, n in enumerate(dims):
        t = np.moveaxis(np.tensordot(hadamard_dense(n), t, axes=([1], [ax])), 0, ax)
    rank = state.spec.rank
    inv = np.argsort(dmap.qudits)
    axes = [int(inv[tq]) * rank + i for tq in range(dmap.target.edge_count) for i in range(rank)]
    t = np.transpose(t, axes)
    return StateVector(state.spec, dmap.target.edge_count, t.reshape(-1))


def _target_location(term: StabilizerTerm, dmap: DualityMap) -> tuple:
    loc = term.location
    if loc[0] == "vertex":
        return ("face", dmap.face_of_vertex(loc[1]))
    if loc[0] == "face":
        return ("vertex", dmap.vertex_of_face(loc[1]))
    return ("hybrid", dmap.vertex_of_face(loc[2]), dmap.face_of_vertex(loc[1]))


def dualize_model(sset: StabilizerSet, dmap: DualityMap) -> tuple[StabilizerSet, dict]:
    """Conjugate every term and compare with the model assembled on the dual lattice."""
    native = assemble(dmap.target)
    by_loc = {(t.location, t.factor): t for t in native.terms}
    terms, exact, phase_only, missing = [], [], [], []
    for t in sset.terms:
        w = conjugate_word(t.word, dmap)
        loc = _target_location(t, dmap)
        kind = KIND_SWAP[t.kind]
        ref = by_loc.get((loc, t.factor))
        name = ref.name if ref is not None else f"{kind}*{t.name}"
        terms.append(StabilizerTerm(w, kind, loc, t.factor, name))
        if ref is None:
            missing.append(t.name)
        elif ref.word == w:
            exact.append(t.name)
        elif ref.word.with_phase(0) == w.with_phase(0):
            phase_only.append({"term": t.name, "dual": ref.name,
                               "phase": str(w.phase - ref.word.phase)})
        else:
            missing.append(t.name)
    out = StabilizerSet(terms, sset.spec, dmap.target.edge_count, dmap.target)
    report = {"terms": len(terms), "exact": len(exact), "phase_only": phase_only,
              "unmatched": missing, "dual_terms": len(native.terms),
              "ok": not missing and len(terms) == len(native.terms)}
    return out, report


def _local_dense(word: WeylWord, edges) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for e in edges:
        xe, ze = word.local(e)
        for i, n in enumerate(word.spec.factors):
            out = np.kron(out, clock_shift(n, xe[i], ze[i]))
    return out * np.exp(2j * np.pi * float(word.phase))


def dense_conjugation_residual(word: WeylWord, dmap: DualityMap) -> float:
    """max |U P U^dag - P*| with U the Hadamard product on the support of P."""
    support = list(word.support)
    if not support:
        return 0.0
    u = np.ones((1, 1), dtype=complex)
    for _ in support:
        for n in word.spec.factors:
            u = np.kron(u, hadamard_dense(n))
    lhs = u @ _local_dense(word, support) @ u.conj().T
    image = conjugate_word(word, dmap)
    rhs = _local_dense(image, [int(dmap.qudits[e]) for e in support])
    return float(np.abs(lhs - rhs).max())


def charge_conjugate(state: StateVector) -> StateVector:
    """|h> -> |-h> on every edge, i.e. reversing every edge orientation."""
    dims = state.dims
    t = state.amplitudes.reshape(dims)
    for ax, n in enumerate(dims):
        t = np.take(t, (-np.arange(n)) % n, axis=ax)
    return StateVector(state.spec, state.edge_count, t.reshape(-1))


def double_dual_check(state: StateVector, dmap: DualityMap) -> float:
    """|<C psi | U U psi>| after matching edges of the double dual by name."""
    second = DualityMap.of(dmap.target)
    twice = dualize_state(dualize_state(state, dmap), second)
    order = second.qudits[dmap.qudits]
    rank = state.spec.rank
    inv = np.argsort(order)
    axes = [int(inv[q]) * rank + i for q in range(state.edge_count) for i in range(rank)]
    c = charge_conjugate(state).amplitudes.reshape(state.dims)
    c = np.transpose(c, axes).reshape(-1)
    return float(abs(np.vdot(c, twice.amplitudes)))
