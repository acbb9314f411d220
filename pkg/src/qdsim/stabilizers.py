"""Local Hamiltonian terms as Weyl words, commutation checks and
ground-space dimension.

Vertex terms put X on incoming edges and X^-1 on outgoing ones; face terms
put Z^-1 on edges whose direction agrees with the counterclockwise walk
and Z on the rest.  A paired vertex and face (see ``lattice.Hybrid``)
yield the single product term A(v) B(f).  When that product has order 2N
(an edge carrying both X and Z at even N) it is rescaled by a phase so its
N-th power is the identity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .group import GroupSpec
from .lattice import Lattice
from .snf import smith_normal_form
from .weyl import WeylWord, commutator_phase, multiply, power

TERM_KINDS = ("Av", "Bf", "BtildeF", "Q1", "AbarSmooth", "BbarRough", "AtildeV")
HYBRID_KINDS = ("BtildeF", "Q1", "AtildeV")


class StabilizerError(ValueError):
    pass


class MethodInapplicable(StabilizerError):
    pass


class FrustratedError(StabilizerError):
    """A product of terms equals a nontrivial phase times the identity."""


@dataclass(frozen=True)
class StabilizerTerm:
    word: WeylWord
    kind: str
    location: tuple  # ("vertex", v) | ("face", f) | ("hybrid", v, f)
    factor: int = 0
    name: str = ""

    @property
    def order(self) -> int:
        return self.word.spec.factors[self.factor]


@dataclass
class StabilizerSet:
    terms: list[StabilizerTerm]
    spec: GroupSpec
    edge_count: int
    lattice: Lattice | None = field(default=None, repr=False)

    def __post_init__(self):
        self.by_name = {t.name: i for i, t in enumerate(self.terms)}

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def term(self, name: str) -> StabilizerTerm:
        return self.terms[self.by_name[name]]

    def kinds(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for t in self.terms:
            out[t.kind] = out.get(t.kind, 0) + 1
        return out

    def has_hybrids(self) -> bool:
        return any(t.kind in HYBRID_KINDS for t in self.terms)


def vertex_word(lat: Lattice, v: int, factor: int = 0, exponent: int = 1) -> WeylWord:
    unit = [0] * lat.spec.rank
    local = {}
    for q, s in lat.vertex_signs(v):
        x = list(local.get(q, (unit, unit))[0])
        x[factor] += s * exponent
        local[q] = (tuple(x), tuple(unit))
    return WeylWord.from_sparse(lat.spec, lat.edge_count, local)


def face_word(lat: Lattice, f: int, factor: int = 0, exponent: int = 1) -> WeylWord:
    unit = [0] * lat.spec.rank
    local = {}
    for q, s in lat.face_signs(f):
        z = list(local.get(q, (unit, unit))[1])
        z[factor] -= s * exponent
        local[q] = (tuple(unit), tuple(z))
    return WeylWord.from_sparse(lat.spec, lat.edge_count, local)


def fix_order(word: WeylWord, n: int) -> WeylWord:
    """Rescale by exp(-2 pi i c / n) where word^n = exp(2 pi i c) I."""
    wn = power(word, n)
    if wn.support:
        raise StabilizerError("word does not have order dividing n up to phase")
    if wn.phase == 0:
        return word
    return word.times_phase(-wn.phase / n)


def assemble(lat: Lattice) -> StabilizerSet:
    terms: list[StabilizerTerm] = []
    rescaled: list[int] = []
    spec = lat.spec
    for fac, n in enumerate(spec.factors):
        suffix = f"#{fac}" if spec.rank > 1 else ""
        for v, vert in enumerate(lat.vertices):
            if not lat.vertex_has_term(v):
                continue
            w = vertex_word(lat, v, fac)
            if w.support:
                kind = lat.vertex_kind(v)
                terms.append(StabilizerTerm(w, kind, ("vertex", v), fac,
                                            f"{kind}{vert.name}{suffix}"))
        for f, face in enumerate(lat.faces):
            if not lat.face_has_term(f):
                continue
            w = face_word(lat, f, fac)
            if w.support:
                kind = lat.face_kind(f)
                terms.append(StabilizerTerm(w, kind, ("face", f), fac,
                                            f"{kind}{face.name}{suffix}"))
        for h in lat.hybrids:
            raw = multiply(vertex_word(lat, h.vertex, fac), face_word(lat, h.face, fac))
            w = fix_order(raw, n)
            if w != raw:
                rescaled.append(len(terms))
            name = f"{h.kind}[{lat.vertices[h.vertex].name}|{lat.faces[h.face].name}]{suffix}"
            terms.append(StabilizerTerm(w, h.kind, ("hybrid", h.vertex, h.face), fac, name))
    sset = StabilizerSet(terms, spec, lat.edge_count, lat)
    if rescaled:
        sset = _remove_frustration(sset, rescaled)
    return sset


def relation_generators(sset: StabilizerSet, fac: int) -> tuple[list[list[int]], list[int]]:
    """Coefficient vectors (mod N) generating all term products proportional to I."""
    pres = presentations(sset)[fac]
    n = pres.modulus
    if not pres.matrix:
        return [], pres.term_index
    u, d, _ = smith_normal_form(pres.matrix, n)
    diag = [d[i][i] for i in range(min(len(d), len(d[0])))]
    gens = []
    for i, row in enumerate(u):
        mult = n // math.gcd(diag[i], n) if i < len(diag) else 1
        coeffs = [(mult * c) % n for c in row]
        if any(coeffs):
            gens.append(coeffs)
    return gens, pres.term_index


def relation_word(sset: StabilizerSet, coeffs, term_index) -> WeylWord:
    w = WeylWord.identity(sset.spec, sset.edge_count)
    for c, ti in zip(coeffs, term_index):
        if c:
            w = multiply(w, power(sset.terms[ti].word, c))
    return w


def _solve_mod(rows: list[list[int]], rhs: list[int], n: int) -> list[int] | None:
    """Some k with rows @ k = rhs mod n, or None."""
    if not rows:
        return []
    u, d, v = smith_normal_form(rows, n)
    ut = [sum(a * b for a, b in zip(r, rhs)) % n for r in u]
    width = len(rows[0])
    y = [0] * width
    for i, val in enumerate(ut):
        di = d[i][i] if i < min(len(rows), width) else 0
        if di == 0:
            if val:
                return None
        else:
            if val % di:
                return None
            y[i] = val // di
    return [sum(v[i][j] * y[j] for j in range(width)) % n for i in range(width)]


def _remove_frustration(sset: StabilizerSet, rescaled: list[int]) -> StabilizerSet:
    """Pick the free N-th-root phase of rescaled hybrid terms so every
    relation among terms multiplies to +I."""
    terms = list(sset.terms)
    for fac, n in enumerate(sset.spec.factors):
        adj = [i for i in rescaled if terms[i].factor == fac]
        if not adj:
            continue
        gens, index = relation_generators(sset, fac)
        pos = {ti: k for k, ti in enumerate(index)}
        rows, rhs = [], []
        for g in gens:
            w = relation_word(sset, g, index)
            rows.append([g[pos[i]] for i in adj])
            rhs.append(int(-w.phase * n) % n)
        ks = _solve_mod(rows, rhs, n)
        if ks is None:
            continue  # genuinely frustrated; exact GSD will report 0
        for i, k in zip(adj, ks):
            if k:
                t = terms[i]
                terms[i] = StabilizerTerm(t.word.times_phase(Fraction(k, n)), t.kind,
                                          t.location, t.factor, t.name)
    return StabilizerSet(terms, sset.spec, sset.edge_count, sset.lattice)


# commutation

def _overlapping_pairs(words: Sequence[WeylWord]) -> Iterable[tuple[int, int]]:
    by_edge: dict[int, list[int]] = {}
    for i, w in enumerate(words):
        for e in w.support:
            by_edge.setdefault(e, []).append(i)
    seen = set()
    for idx in by_edge.values():
        for a in range(len(idx)):
            for b in range(a + 1, len(idx)):
                p = (idx[a], idx[b])
                if p not in seen:
                    seen.add(p)
    return sorted(seen)


def check_commutation(sset: StabilizerSet) -> dict:
    """All-pairs commutator phases; disjoint supports commute trivially."""
    n = len(sset.terms)
    words = [t.word for t in sset.terms]
    violations = []
    for i, j in _overlapping_pairs(words):
        phi = commutator_phase(words[i], words[j])
        if phi:
            violations.append({"a": sset.terms[i].name, "b": sset.terms[j].name,
                               "phase_num": phi.numerator, "phase_den": phi.denominator})
    return {"pairs_checked": n * (n - 1) // 2, "violations": violations}


# symplectic ground-space dimension

@dataclass
class SymplecticPresentation:
    matrix: list[list[int]]  # rows (x | z) exponent vectors for one factor
    phases: list[Fraction]
    modulus: int
    term_index: list[int]


def presentations(sset: StabilizerSet) -> list[SymplecticPresentation]:
    out = []
    for fac, n in enumerate(sset.spec.factors):
        rows, phases, idx = [], [], []
        for i, t in enumerate(sset.terms):
            if t.factor != fac:
                continue
            rows.append([int(c) for c in np.concatenate([t.word.x[:, fac], t.word.z[:, fac]])])
            phases.append(t.word.phase)
            idx.append(i)
        out.append(SymplecticPresentation(rows, phases, n, idx))
    return out


def ground_space_dimension_symplectic(sset: StabilizerSet) -> int:
    for n in sset.spec.factors:
        if n % 2 == 0 and sset.has_hybrids():
            raise MethodInapplicable(
                "symplectic counting refuses even N with dislocation terms; use method='exact'")
    bad = check_commutation(sset)["violations"]
    if bad:
        raise StabilizerError(f"terms do not commute: {bad[0]}")
    total = Fraction(1)
    for fac, pres in enumerate(presentations(sset)):
        n = pres.modulus
        qudits = sset.edge_count
        if not pres.matrix:
            total *= n ** qudits
            continue
        u, d, _ = smith_normal_form(pres.matrix, n)
        diag = [d[i][i] for i in range(min(len(d), len(d[0])))]
        image = 1
        for x in diag:
            image *= n // math.gcd(x, n)
        _check_relations(sset, fac)
        total *= Fraction(n ** qudits, image)
    if total.denominator != 1:
        raise StabilizerError("non-integer ground-space dimension")
    return int(total)


def _check_relations(sset: StabilizerSet, fac: int) -> None:
    gens, index = relation_generators(sset, fac)
    for g in gens:
        w = relation_word(sset, g, index)
        if w.support:
            raise StabilizerError("relation vector does not cancel; SNF bookkeeping error")
        if w.phase:
            raise FrustratedError(f"terms multiply to phase {w.phase} times identity")


def ground_space_dimension(sset: StabilizerSet, method: str = "symplectic",
                           cap: int | None = None) -> int:
    if method == "symplectic":
        return ground_space_dimension_symplectic(sset)
    if method == "exact":
        from .statevector import DEFAULT_CAP, joint_eigenspace
        return joint_eigenspace(sset, cap or DEFAULT_CAP).dimension
    raise StabilizerError(f"unknown method {method!r}; use 'symplectic' or 'exact'")


def logical_count(sset: StabilizerSet) -> int:
    """log_N of the symplectic GSD for a single cyclic factor."""
    g = ground_space_dimension_symplectic(sset)
    n = sset.spec.factors[0]
    k = round(math.log(g, n)) if g > 1 else 0
    return k


def syndrome(state, sset: StabilizerSet, tol: float = 1e-9) -> dict[str, int]:
    """Eigenvalue exponent of every term on an eigenstate."""
    from .statevector import apply
    out = {}
    for t in sset.terms:
        tv = apply(t.word, state).amplitudes
        lam = np.vdot(state.amplitudes, tv)
        if np.linalg.norm(tv - lam * state.amplitudes) > tol:
            raise StabilizerError(f"state is not an eigenvector of term {t.name}")
        n = t.order
        out[t.name] = int(round(np.angle(lam) / (2 * np.pi) * n)) % n
    return out


def projector_idempotence_residual(word_dense: np.ndarray, n: int) -> float:
    p = sum(np.linalg.matrix_power(word_dense, k) for k in range(n)) / n
    return float(np.abs(p @ p - p).max())


def stabilizer_report(sset: StabilizerSet, method: str | None = None, cap: int | None = None) -> dict:
    rep = check_commutation(sset)
    if method:
        rep["gsd"] = {"method": method, "value": ground_space_dimension(sset, method, cap)}
    return rep
