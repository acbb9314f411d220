"""Exact algebra of generalized Pauli (Weyl) words.

A word is exp(2 pi i phase) times a tensor product over edges of X^x Z^z,
with X always to the left of Z on each edge.  For a product group each edge
carries one clock/shift pair per cyclic factor.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np

from .group import GroupElement, GroupSpec, frac_mod1

DEFAULT_DENSE_CAP = 2**24


class WeylError(ValueError):
    pass


class DenseCapError(WeylError):
    pass


def _as_exps(spec: GroupSpec, edge_count: int, arr) -> np.ndarray:
    a = np.zeros((edge_count, spec.rank), dtype=np.int64) if arr is None else \
        np.array(arr, dtype=np.int64).reshape(edge_count, spec.rank)
    a = np.mod(a, np.array(spec.factors, dtype=np.int64))
    a.setflags(write=False)
    return a


class WeylWord:

    def __init__(self, spec: GroupSpec, edge_count: int, x=None, z=None,
                 phase: Fraction | int = 0):
        self.spec = spec
        self.edge_count = int(edge_count)
        self.x = _as_exps(spec, self.edge_count, x)
        self.z = _as_exps(spec, self.edge_count, z)
        self.phase = frac_mod1(Fraction(phase))

    # constructors

    @classmethod
    def identity(cls, spec: GroupSpec, edge_count: int) -> "WeylWord":
        return cls(spec, edge_count)

    @classmethod
    def from_sparse(cls, spec: GroupSpec, edge_count: int,
                    local: Mapping[int, tuple], phase: Fraction | int = 0) -> "WeylWord":
        """Build from {edge: (x, z)}; x and z are ints (cyclic group) or tuples."""
        x = np.zeros((edge_count, spec.rank), dtype=np.int64)
        z = np.zeros_like(x)
        for e, (xe, ze) in local.items():
            if not 0 <= e < edge_count:
                raise WeylError(f"edge {e} out of range for {edge_count} edges")
            x[e] = _components(spec, xe)
            z[e] = _components(spec, ze)
        return cls(spec, edge_count, x, z, phase)

    @classmethod
    def single(cls, spec: GroupSpec, edge_count: int, edge: int, x=0, z=0) -> "WeylWord":
        return cls.from_sparse(spec, edge_count, {edge: (x, z)})

    # structure

    @cached_property
    def _moduli(self) -> np.ndarray:
        return np.array(self.spec.factors, dtype=np.int64)

    @cached_property
    def support(self) -> tuple[int, ...]:
        mask = (self.x != 0).any(axis=1) | (self.z != 0).any(axis=1)
        return tuple(int(e) for e in np.nonzero(mask)[0])

    def local(self, edge: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return tuple(int(v) for v in self.x[edge]), tuple(int(v) for v in self.z[edge])

    def sparse(self) -> dict[int, tuple]:
        out = {}
        for e in self.support:
            xe, ze = self.local(e)
            if self.spec.rank == 1:
                out[e] = (xe[0], ze[0])
            else:
                out[e] = (xe, ze)
        return out

    @property
    def weight(self) -> int:
        return len(self.support)

    def is_identity(self, ignore_phase: bool = False) -> bool:
        return not self.support and (ignore_phase or self.phase == 0)

    def symplectic_vector(self) -> np.ndarray:
        """Flattened (x | z) exponent vector, edge-major within each half."""
        return np.concatenate([self.x.ravel(), self.z.ravel()])

    def with_phase(self, phase: Fraction | int) -> "WeylWord":
        return WeylWord(self.spec, self.edge_count, self.x, self.z, phase)

    def times_phase(self, phase: Fraction | int) -> "WeylWord":
        return self.with_phase(self.phase + Fraction(phase))

    def _check(self, other: "WeylWord") -> None:
        if self.spec != other.spec or self.edge_count != other.edge_count:
            raise WeylError(
                f"edge-set mismatch: {self.spec!r}/{self.edge_count} vs "
                f"{other.spec!r}/{other.edge_count}")

    def _pair(self, za: np.ndarray, xb: np.ndarray) -> Fraction:
        # sum over edges and factors of za*xb/N_i, exact
        col = (za * xb).sum(axis=0)
        return sum((Fraction(int(c), int(n)) for c, n in zip(col, self._moduli)), Fraction(0))

    # algebra

    def __mul__(self, other: "WeylWord") -> "WeylWord":
        return multiply(self, other)

    def __pow__(self, k: int) -> "WeylWord":
        return power(self, k)

    def inverse(self) -> "WeylWord":
        return power(self, -1)

    dagger = inverse

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeylWord):
            return NotImplemented
        return (self.spec == other.spec and self.edge_count == other.edge_count
                and self.phase == other.phase and np.array_equal(self.x, other.x)
                and np.array_equal(self.z, other.z))

    def __hash__(self) -> int:
        return hash((self.spec, self.edge_count, self.phase,
                     self.x.tobytes(), self.z.tobytes()))

    def __repr__(self) -> str:
        parts = []
        for e, (xe, ze) in self.sparse().items():
            parts.append(f"e{e}:X^{xe}Z^{ze}")
        body = " ".join(parts) or "I"
        return f"WeylWord({body}, phase={self.phase})"

    # serialization

    def to_json(self) -> dict:
        sup = list(self.support)
        if self.spec.rank == 1:
            xs = [int(self.x[e, 0]) for e in sup]
            zs = [int(self.z[e, 0]) for e in sup]
        else:
            xs = [[int(v) for v in self.x[e]] for e in sup]
            zs = [[int(v) for v in self.z[e]] for e in sup]
        return {"group": self.spec.to_json(), "edge_count": self.edge_count,
                "edges": sup, "x": xs, "z": zs,
                "phase_num": self.phase.numerator, "phase_den": self.phase.denominator}

    @classmethod
    def from_json(cls, data: dict) -> "WeylWord":
        spec = GroupSpec.from_json(data["group"])
        local = {int(e): (xe, ze) for e, xe, ze in zip(data["edges"], data["x"], data["z"])}
        return cls.from_sparse(spec, int(data["edge_count"]), local,
                               Fraction(int(data["phase_num"]), int(data["phase_den"])))


def _components(spec: GroupSpec, v) -> tuple[int, ...]:
    if isinstance(v, GroupElement):
        return v.components
    if isinstance(v, (int, np.integer)):
        if spec.rank != 1:
            raise WeylError("integer exponent only valid for cyclic groups")
        return (int(v),)
    return tuple(int(c) for c in v)


def multiply(p: WeylWord, q: WeylWord) -> WeylWord:
    """Canonical product p*q; moving Z^{z_p} past X^{x_q} costs omega^{z_p x_q}."""
    p._check(q)
    phase = p.phase + q.phase + p._pair(p.z, q.x)
    return WeylWord(p.spec, p.edge_count, p.x + q.x, p.z + q.z, phase)


def commutator_phase(p: WeylWord, q: WeylWord) -> Fraction:
    """phi in [0,1) with p*q = exp(2 pi i phi) q*p."""
    p._check(q)
    return frac_mod1(p._pair(p.z, q.x) - p._pair(q.z, p.x))


def power(p: WeylWord, k: int) -> WeylWord:
    """(X^x Z^z)^k = omega^{x z k(k-1)/2} X^{kx} Z^{kz}; valid for negative k too."""
    k = int(k)
    tri = k * (k - 1) // 2
    phase = k * p.phase + tri * p._pair(p.z, p.x)
    return WeylWord(p.spec, p.edge_count, k * p.x, k * p.z, phase)


def product(words: Sequence[WeylWord], spec: GroupSpec | None = None,
            edge_count: int | None = None) -> WeylWord:
    if not words:
        if spec is None or edge_count is None:
            raise WeylError("empty product needs spec and edge_count")
        return WeylWord.identity(spec, edge_count)
    out = words[0]
    for w in words[1:]:
        out = multiply(out, w)
    return out


def order_phase(p: WeylWord) -> Fraction:
    """Phase c with p^M = exp(2 pi i c) I, M the group exponent."""
    m = p.spec.exponent
    pm = power(p, m)
    assert not pm.support
    return pm.phase


# dense realization

def clock_shift(n: int, x: int, z: int) -> np.ndarray:
    """Matrix of X^x Z^z on C^n: |h> -> omega^{z h} |h + x>."""
    h = np.arange(n)
    m = np.zeros((n, n), dtype=complex)
    m[(h + x) % n, h] = np.exp(2j * np.pi * z * h / n)
    return m


def to_dense(p: WeylWord, cap: int = DEFAULT_DENSE_CAP) -> np.ndarray:
    dim = p.spec.order ** p.edge_count
    if dim * dim > cap:
        raise DenseCapError(f"dense matrix {dim}x{dim} exceeds entry cap {cap}")
    out = np.array([[np.exp(2j * np.pi * float(p.phase))]])
    for e in range(p.edge_count):
        for i, n in enumerate(p.spec.factors):
            out = np.kron(out, clock_shift(n, int(p.x[e, i]), int(p.z[e, i])))
    return out
