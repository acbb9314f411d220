"""Dense statevectors over the edge Hilbert space, used as a brute-force oracle.

Basis order is edge-major with one tensor axis per (edge, cyclic factor),
edge 0 most significant, matching ``weyl.to_dense``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .group import GroupSpec
from .weyl import WeylWord

DEFAULT_CAP = 2**26


class CapExceeded(RuntimeError):
    pass


class StateError(ValueError):
    pass


def hilbert_dims(spec: GroupSpec, edge_count: int) -> tuple[int, ...]:
    return tuple(n for _ in range(edge_count) for n in spec.factors)


def check_cap(spec: GroupSpec, edge_count: int, cap: int = DEFAULT_CAP) -> int:
    dim = spec.order ** edge_count
    if dim > cap:
        raise CapExceeded(f"Hilbert dimension {dim} exceeds amplitude cap {cap}")
    return dim


@dataclass
class StateVector:
    spec: GroupSpec
    edge_count: int
    amplitudes: np.ndarray

    @property
    def dims(self) -> tuple[int, ...]:
        return hilbert_dims(self.spec, self.edge_count)

    @property
    def dimension(self) -> int:
        return self.amplitudes.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "StateVector":
        nrm = self.norm()
        if nrm == 0:
            raise StateError("cannot normalize the zero vector")
        return StateVector(self.spec, self.edge_count, self.amplitudes / nrm)

    def scaled(self, c: complex) -> "StateVector":
        return StateVector(self.spec, self.edge_count, c * self.amplitudes)

    @classmethod
    def basis(cls, spec: GroupSpec, edge_count: int, digits=None,
              cap: int = DEFAULT_CAP) -> "StateVector":
        dim = check_cap(spec, edge_count, cap)
        amps = np.zeros(dim, dtype=complex)
        dims = hilbert_dims(spec, edge_count)
        idx = 0 if digits is None else int(np.ravel_multi_index(tuple(digits), dims)) if dims else 0
        amps[idx] = 1.0
        return cls(spec, edge_count, amps)

    def save(self, path: str | Path, edge_names=None) -> None:
        path = Path(path)
        self.amplitudes.astype("<c8").tofile(path)
        meta = {"group": self.spec.to_json(), "edge_count": self.edge_count,
                "dtype": "complex64", "byteorder": "little",
                "basis": "edge-major, group-element lexicographic",
                "edges": list(edge_names) if edge_names is not None else None}
        path.with_suffix(path.suffix + ".json").write_text(json.dumps(meta, indent=2) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "StateVector":
        path = Path(path)
        meta = json.loads(path.with_suffix(path.suffix + ".json").read_text())
        amps = np.fromfile(path, dtype="<c8").astype(complex)
        spec = GroupSpec.from_json(meta["group"])
        if amps.size != spec.order ** meta["edge_count"]:
            raise StateError("state file length does not match its sidecar")
        return cls(spec, int(meta["edge_count"]), amps)


def _check(word: WeylWord, state: StateVector) -> None:
    if word.spec != state.spec or word.edge_count != state.edge_count:
        raise StateError("word and state live on different edge sets")


def apply(word: WeylWord, state: StateVector) -> StateVector:
    """Monomial action X^x Z^z |h> = omega^{z h} |h + x>, no dense matrix."""
    _check(word, state)
    dims = state.dims
    t = state.amplitudes.reshape(dims) if dims else state.amplitudes.copy()
    rank = word.spec.rank
    out = t
    copied = False
    for e in word.support:
        for i, n in enumerate(word.spec.factors):
            ax = e * rank + i
            z = int(word.z[e, i])
            if z:
                shape = [1] * len(dims)
                shape[ax] = n
                ph = np.exp(2j * np.pi * z * np.arange(n) / n).reshape(shape)
                out = out * ph
                copied = True
            x = int(word.x[e, i])
            if x:
                out = np.roll(out, x, axis=ax)
                copied = True
    if not copied:
        out = out.copy()
    amps = out.reshape(-1)
    if word.phase:
        amps = amps * np.exp(2j * np.pi * float(word.phase))
    return StateVector(state.spec, state.edge_count, amps)


def overlap(a: StateVector, b: StateVector) -> complex:
    if a.amplitudes.shape != b.amplitudes.shape:
        raise StateError("overlap of states with different dimensions")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def apply_projector(word: WeylWord, n: int, amps: np.ndarray, spec, edge_count) -> np.ndarray:
    """(1/n) sum_k word^k applied to a raw amplitude vector."""
    state = StateVector(spec, edge_count, amps)
    acc = amps.copy()
    cur = state
    for _ in range(1, n):
        cur = apply(word, cur)
        acc += cur.amplitudes
    return acc / n


def project(sset, amps: np.ndarray) -> np.ndarray:
    for t in sset.terms:
        amps = apply_projector(t.word, t.order, amps, sset.spec, sset.edge_count)
    return amps


def ground_space_basis(sset, cap: int = DEFAULT_CAP, seed: int = 0,
                       tol: float = 1e-7) -> list[StateVector]:
    """Orthonormal basis of the image of the product of term projectors.

    Random vectors are projected and Gram-Schmidt orthogonalized until a
    projected vector lies in the span already found.
    """
    dim = check_cap(sset.spec, sset.edge_count, cap)
    rng = np.random.default_rng(seed)
    basis: list[np.ndarray] = []
    while True:
        r = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        w = project(sset, r)
        scale = np.linalg.norm(w)
        if scale < 1e-12 * np.linalg.norm(r):
            break
        for _ in range(2):
            for b in basis:
                w = w - np.vdot(b, w) * b
        res = np.linalg.norm(w)
        if res < tol * scale:
            break
        basis.append(w / res)
        if len(basis) > dim:
            raise RuntimeError("projector image larger than the space")
    return [StateVector(sset.spec, sset.edge_count, b) for b in basis]


# orbit route: joint +1 eigenspace straight from the monomial action

@dataclass
class JointEigenspace:
    dimension: int
    labels: np.ndarray         # component label of each basis index
    good: np.ndarray           # component ids carrying a +1 eigenvector
    potential: np.ndarray      # phase exponent (over denom) of each basis index
    denom: int

    def basis(self, spec, edge_count) -> list[StateVector]:
        out = []
        for c in self.good:
            mask = self.labels == c
            amps = np.zeros(self.labels.size, dtype=complex)
            amps[mask] = np.exp(2j * np.pi * self.potential[mask] / self.denom)
            amps /= np.linalg.norm(amps)
            out.append(StateVector(spec, edge_count, amps))
        return out


def monomial_action(word: WeylWord, denom: int) -> tuple[np.ndarray, np.ndarray]:
    """Permutation pi and integer phases p with word|i> = w^{p_i}|pi_i>, w = e^{2 pi i/denom}."""
    dims = hilbert_dims(word.spec, word.edge_count)
    dim = math.prod(dims)
    itype = np.int32 if dim < 2**31 else np.int64
    idx = np.arange(dim, dtype=itype)
    perm = idx.copy()
    ph = np.full(dim, int(word.phase * denom) % denom, dtype=np.int32)
    strides = np.cumprod((1,) + dims[::-1])[:-1][::-1] if dims else ()
    rank = word.spec.rank
    for e in word.support:
        for i, n in enumerate(word.spec.factors):
            ax = e * rank + i
            x, z = int(word.x[e, i]), int(word.z[e, i])
            if not (x or z):
                continue
            digit = (idx // strides[ax]) % n
            if z:
                ph = (ph + z * digit * (denom // n)) % denom
            if x:
                perm = perm + (((digit + x) % n) - digit) * strides[ax]
    return perm, ph


def joint_eigenspace(sset, cap: int = DEFAULT_CAP) -> JointEigenspace:
    """Joint +1 eigenspace of the term unitaries, computed exactly.

    Basis states connected by term actions form orbits; an orbit supports
    one +1 eigenvector iff the phases accumulated around every cycle are
    trivial, which is checked in integer arithmetic.
    """
    dim = check_cap(sset.spec, sset.edge_count, cap)
    denom = math.lcm(*sset.spec.factors, *(t.word.phase.denominator for t in sset.terms))
    actions = [monomial_action(t.word, denom) for t in sset.terms]
    if actions:
        src = np.concatenate([np.arange(dim)] * len(actions))
        dst = np.concatenate([p for p, _ in actions])
        graph = coo_matrix((np.ones(src.size, dtype=np.int8), (src, dst)), shape=(dim, dim))
        ncomp, labels = connected_components(graph, directed=True, connection="weak")
    else:
        ncomp, labels = dim, np.arange(dim)
    potential = np.zeros(dim, dtype=np.int64)
    visited = np.zeros(dim, dtype=bool)
    _, roots = np.unique(labels, return_index=True)
    visited[roots] = True
    frontier = roots
    inverses = []
    for perm, _ in actions:
        inv = np.empty_like(perm)
        inv[perm] = np.arange(dim)
        inverses.append(inv)
    while frontier.size:
        new_nodes = []
        for (perm, ph), inv in zip(actions, inverses):
            fwd = perm[frontier]
            m = ~visited[fwd]
            potential[fwd[m]] = (potential[frontier[m]] + ph[frontier[m]]) % denom
            visited[fwd[m]] = True
            new_nodes.append(fwd[m])
            back = inv[frontier]
            m = ~visited[back]
            potential[back[m]] = (potential[frontier[m]] - ph[back[m]]) % denom
            visited[back[m]] = True
            new_nodes.append(back[m])
        frontier = np.unique(np.concatenate(new_nodes)) if new_nodes else np.array([], dtype=np.int64)
    bad = np.zeros(ncomp, dtype=bool)
    for perm, ph in actions:
        wrong = (potential[perm] - potential - ph) % denom != 0
        bad[np.unique(labels[wrong])] = True
    good = np.nonzero(~bad)[0]
    return JointEigenspace(int(good.size), labels, good, potential, denom)


def projector_from_basis(basis: list[StateVector]) -> np.ndarray:
    mat = np.array([b.amplitudes for b in basis]).T
    return mat @ mat.conj().T


def subspace_distance(a: list[StateVector], b: list[StateVector]) -> float:
    """Largest residual of projecting one orthonormal basis onto the other, both ways."""
    if len(a) != len(b):
        return float("inf")
    if not a:
        return 0.0
    ma = np.array([s.amplitudes for s in a]).T
    mb = np.array([s.amplitudes for s in b]).T
    res1 = np.linalg.norm(ma - mb @ (mb.conj().T @ ma), axis=0).max()
    res2 = np.linalg.norm(mb - ma @ (ma.conj().T @ mb), axis=0).max()
    return float(max(res1, res2))
