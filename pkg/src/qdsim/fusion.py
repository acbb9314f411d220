"""Fusion rings, D(Z_N) anyon data, the crossed SET extension, Tambara-Yamagami
F-symbols with a generic pentagon evaluator, and condensation checks.

Exponents are kept as Fractions mod 1 so every comparison is exact; only
Frobenius-Perron dimensions and pentagon residuals are floating point.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .group import frac_mod1


class FusionError(ValueError):
    pass


@dataclass
class FusionRing:
    labels: list[str]
    mult: np.ndarray                 # mult[a, b, c] = N_ab^c
    unit: int = 0
    dual: list[int] | None = None
    grading: list[int] | None = None

    def __post_init__(self):
        self.mult = np.asarray(self.mult, dtype=np.int64)
        self.index = {name: i for i, name in enumerate(self.labels)}
        if self.dual is None:
            self.dual = [self._find_dual(a) for a in range(len(self.labels))]

    @property
    def rank(self) -> int:
        return len(self.labels)

    def _find_dual(self, a: int) -> int:
        hits = [b for b in range(self.rank) if self.mult[a, b, self.unit]]
        if len(hits) != 1:
            raise FusionError(f"{self.labels[a]} has no unique dual")
        return hits[0]

    def label(self, name: str) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise FusionError(f"unknown label {name!r}") from None

    def fuse(self, a: int, b: int) -> dict[int, int]:
        return {c: int(n) for c, n in enumerate(self.mult[a, b]) if n}

    def fuse_names(self, a: str, b: str) -> dict[str, int]:
        return {self.labels[c]: n for c, n in self.fuse(self.label(a), self.label(b)).items()}

    def fpdims(self) -> np.ndarray:
        """Perron-Frobenius dimensions from the summed fusion matrix."""
        total = self.mult.sum(axis=0).astype(float)   # sum over a of (N_a)_{bc}
        vals, vecs = np.linalg.eig(total)
        k = int(np.argmax(vals.real))
        d = np.abs(vecs[:, k].real)
        return d / d[self.unit]

    def to_json(self) -> dict:
        return {"labels": self.labels, "unit": self.unit, "dual": self.dual,
                "fusion": {f"{self.labels[a]}x{self.labels[b]}":
                           self.fuse_names(self.labels[a], self.labels[b])
                           for a in range(self.rank) for b in range(self.rank)}}


def verify_ring_axioms(ring: FusionRing, tol: float = 1e-10) -> dict:
    n = ring.mult
    du = np.array(ring.dual)
    u = ring.unit
    report: dict = {"rank": ring.rank, "failures": []}
    fails = report["failures"]

    def note(kind, *idx):
        fails.append({"check": kind, "labels": [ring.labels[i] for i in idx]})

    if (n < 0).any():
        fails.append({"check": "nonnegative", "labels": []})
    for a, b, c in zip(*np.nonzero(n != n.transpose(1, 0, 2))):
        note("commutative", a, b, c)
    dd = n[du][:, du][:, :, du]
    for a, b, c in zip(*np.nonzero(n != dd)):
        note("dual", a, b, c)
    # N_ab^c = N_{a c*}^{b*}
    rot = n[:, du, :][:, :, du].transpose(0, 2, 1)
    for a, b, c in zip(*np.nonzero(n != rot)):
        note("frobenius", a, b, c)
    for a in range(ring.rank):
        for b in range(ring.rank):
            if n[a, du[b], u] != int(a == b):
                note("unit_pairing", a, b)
        if not (n[u, a] == np.eye(ring.rank, dtype=np.int64)[a]).all():
            note("unit", a)
    left = np.einsum("abe,ecd->abcd", n, n)
    right = np.einsum("bcf,afd->abcd", n, n)
    for a, b, c, d in zip(*np.nonzero(left != right)):
        note("associative", a, b, c, d)
    dims = ring.fpdims()
    resid = np.abs(np.einsum("a,b->ab", dims, dims) - np.einsum("abc,c->ab", n, dims)).max()
    report["fpdims"] = {ring.labels[i]: float(x) for i, x in enumerate(dims)}
    report["fpdim_residual"] = float(resid)
    if resid >= tol:
        fails.append({"check": "fpdim", "labels": []})
    report["ok"] = not fails
    return report


# D(Z_N)

def anyon_name(g: int, h: int) -> str:
    return f"eps({g},{h})"


def anyon_ring(n: int) -> FusionRing:
    if n < 2:
        raise FusionError("N must be at least 2")
    labels = [anyon_name(g, h) for g in range(n) for h in range(n)]
    r = n * n
    mult = np.zeros((r, r, r), dtype=np.int64)
    for g, h, k, l in itertools.product(range(n), repeat=4):
        mult[g * n + h, k * n + l, ((g + k) % n) * n + (h + l) % n] = 1
    return FusionRing(labels, mult)


@dataclass
class AnyonData:
    n: int
    ring: FusionRing
    theta: list[Fraction]            # theta_a = exp(2 pi i theta[a])
    s_exp: np.ndarray                # S_ab = exp(2 pi i s_exp[a][b]) / N

    def pair(self, a: int) -> tuple[int, int]:
        return divmod(a, self.n)

    def s_matrix(self) -> np.ndarray:
        phases = np.vectorize(lambda f: np.exp(2j * np.pi * float(f)))(self.s_exp)
        return phases.astype(complex) / self.n

    def theta_value(self, a: int) -> complex:
        return complex(np.exp(2j * np.pi * float(self.theta[a])))


def build_anyon_data(n: int) -> AnyonData:
    ring = anyon_ring(n)
    theta = [frac_mod1(Fraction(g * h, n)) for g in range(n) for h in range(n)]
    s_exp = np.empty((n * n, n * n), dtype=object)
    for a in range(n * n):
        g, h = divmod(a, n)
        for b in range(n * n):
            g2, h2 = divmod(b, n)
            s_exp[a, b] = frac_mod1(Fraction(-(g * h2 + h * g2), n))
    return AnyonData(n, ring, theta, s_exp)


def check_anyon_data(data: AnyonData, tol: float = 1e-10) -> dict:
    s = data.s_matrix()
    du = data.ring.dual
    out = {
        "theta_unit": data.theta[data.ring.unit] == 0,
        "theta_dual": all(data.theta[a] == data.theta[du[a]] for a in range(data.ring.rank)),
        "s_symmetric": bool((data.s_exp == data.s_exp.T).all()),
        "s_unitary_residual": float(np.abs(s @ s.conj().T - np.eye(len(s))).max()),
    }
    out["ok"] = (out["theta_unit"] and out["theta_dual"] and out["s_symmetric"]
                 and out["s_unitary_residual"] < tol)
    return out


def validate_braiding(data: AnyonData, lattice=None) -> dict:
    """Compare installed theta and S exponents with string-operator phases on a lattice."""
    from .group import GroupSpec
    from .lattice import build_torus
    from .ribbons import AnyonLabel, double_braid_exponent, exchange_exponent

    n = data.n
    lat = lattice if lattice is not None else build_torus(GroupSpec((n,)), 7, 7)
    theta_bad, s_bad = [], []
    for a in range(n * n):
        la = AnyonLabel(*data.pair(a), n)
        got = exchange_exponent(lat, la)
        if got != data.theta[a]:
            theta_bad.append({"label": data.ring.labels[a], "oracle": str(got),
                              "installed": str(data.theta[a])})
        for b in range(n * n):
            lb = AnyonLabel(*data.pair(b), n)
            # S is the conjugate monodromy over N
            got = frac_mod1(-double_braid_exponent(lat, la, lb))
            if got != data.s_exp[a, b]:
                s_bad.append({"pair": [data.ring.labels[a], data.ring.labels[b]],
                              "oracle": str(got), "installed": str(data.s_exp[a, b])})
    return {"n": n, "theta_mismatches": theta_bad, "s_mismatches": s_bad,
            "ok": not theta_bad and not s_bad}


# symmetry action

def em_swap(n: int) -> list[int]:
    return [h * n + g for g in range(n) for h in range(n)]


def identity_action(rank: int) -> list[int]:
    return list(range(rank))


def symmetry_invariance(data: AnyonData, action: Sequence[int]) -> dict:
    p = np.asarray(action)
    ring = data.ring
    fusion_ok = bool((ring.mult == ring.mult[p][:, p][:, :, p]).all())
    d = ring.fpdims()
    dims_ok = bool(np.allclose(d, d[p], atol=1e-12))
    theta_bad = [ring.labels[a] for a in range(ring.rank) if data.theta[a] != data.theta[p[a]]]
    s_ok = bool((data.s_exp == data.s_exp[p][:, p]).all())
    return {"fusion": fusion_ok, "dims": dims_ok, "theta": not theta_bad,
            "theta_mismatches": theta_bad, "s": s_ok,
            "ok": fusion_ok and dims_ok and not theta_bad and s_ok}


def fixed_point_rank(action: Sequence[int]) -> int:
    act = list(action)
    if any(act[act[a]] != a for a in range(len(act))):
        raise FusionError("action is not an involution")
    return sum(1 for a in range(len(act)) if act[a] == a)


# crossed extension by the e<->m symmetry

def defect_name(k: int) -> str:
    return f"sigma{k}"


def set_ring(n: int) -> FusionRing:
    """Anyons eps(g,h) in grade 0, defects sigma_k in grade 1.

    eps(g,h) x sigma_k = sigma_k x eps(g,h) = sigma_{k+g-h};
    sigma_k x sigma_l = sum_g eps(g+k+l, g).
    """
    base = anyon_ring(n)
    r = n * n
    labels = base.labels + [defect_name(k) for k in range(n)]
    size = r + n
    mult = np.zeros((size, size, size), dtype=np.int64)
    mult[:r, :r, :r] = base.mult
    for g, h, k in itertools.product(range(n), repeat=3):
        a, s = g * n + h, r + k
        out = r + (k + g - h) % n
        mult[a, s, out] = 1
        mult[s, a, out] = 1
    for k, l, g in itertools.product(range(n), repeat=3):
        mult[r + k, r + l, ((g + k + l) % n) * n + g] += 1
    return FusionRing(labels, mult, grading=[0] * r + [1] * n)


def set_fuse(ring: FusionRing, a: str, b: str) -> dict[str, int]:
    return ring.fuse_names(a, b)


def set_action(n: int) -> list[int]:
    """e<->m on anyons; defects must go sigma_k -> sigma_{-k} to keep the fusion rules."""
    return em_swap(n) + [n * n + (-k) % n for k in range(n)]


def grading_check(ring: FusionRing) -> bool:
    gr = ring.grading
    for a, b, c in zip(*np.nonzero(ring.mult)):
        if (gr[a] + gr[b]) % 2 != gr[c]:
            return False
    return True


def sector_fpdim_check(ring: FusionRing, tol: float = 1e-9) -> dict:
    d = ring.fpdims()
    gr = np.array(ring.grading)
    sectors = [float((d[gr == s] ** 2).sum()) for s in (0, 1)]
    sigma = [float(x) for x in d[gr == 1]]
    n = int(round(math.sqrt(sectors[0])))
    return {"sector_dims": sectors, "defect_dims": sigma,
            "ok": abs(sectors[0] - sectors[1]) < tol
            and all(abs(x - math.sqrt(n)) < tol for x in sigma)}


# Tambara-Yamagami

@dataclass
class TYCategory:
    n: int
    chi: Callable[[int, int], Fraction]      # exponent of the bicharacter
    nu: int = 1

    def __post_init__(self):
        if self.nu not in (1, -1):
            raise FusionError("nu must be +1 or -1")

    @property
    def sigma(self) -> int:
        return self.n

    @property
    def labels(self) -> list[str]:
        return [str(g) for g in range(self.n)] + ["sigma"]

    def chi_value(self, a: int, b: int) -> complex:
        return complex(np.exp(2j * np.pi * float(self.chi(a, b))))

    def fuse(self, a: int, b: int) -> list[int]:
        s, n = self.sigma, self.n
        if a == s and b == s:
            return list(range(n))
        if a == s or b == s:
            return [s]
        return [(a + b) % n]

    def admissible(self, a, b, c) -> bool:
        return c in self.fuse(a, b)

    def F(self, a, b, c, d, e, f) -> complex:
        """[F^{abc}_d]_{e f}, e in a x b, f in b x c; 0 if the vertex set is not admissible."""
        if not (self.admissible(a, b, e) and self.admissible(e, c, d)
                and self.admissible(b, c, f) and self.admissible(a, f, d)):
            return 0
        s = self.sigma
        if a != s and b == s and c != s:
            return self.chi_value(a, c)
        if a == s and b != s and c == s:
            return self.chi_value(b, d)
        if a == s and b == s and c == s:
            return self.nu / math.sqrt(self.n) * self.chi_value(e, f).conjugate()
        return 1

    def is_nondegenerate(self) -> bool:
        mat = np.array([[self.chi_value(a, b) for b in range(self.n)] for a in range(self.n)])
        return np.linalg.matrix_rank(mat) == self.n

    def f_table(self) -> list[dict]:
        out = []
        lab = range(self.n + 1)
        for a, b, c, d in itertools.product(lab, repeat=4):
            for e in self.fuse(a, b):
                for f in self.fuse(b, c):
                    v = self.F(a, b, c, d, e, f)
                    if v == 0:
                        continue
                    s = self.sigma
                    entry = {"abcd": [a, b, c, d], "e": e, "f": f}
                    if a == b == c == s:
                        x = -self.chi(e, f)
                        entry["scale"] = f"{self.nu:+d}/sqrt({self.n})"
                    elif b == s and a != s and c != s:
                        x = self.chi(a, c)
                    elif a == s and c == s and b != s:
                        x = self.chi(b, d)
                    else:
                        x = Fraction(0)
                    x = frac_mod1(x)
                    entry["exponent"] = [x.numerator, x.denominator]
                    out.append(entry)
        return out


def default_ty(n: int, nu: int = 1) -> TYCategory:
    return TYCategory(n, lambda a, b: frac_mod1(Fraction(a * b, n)), nu)


def pentagon_check(cat, labels: Sequence[int] | None = None) -> dict:
    """Max residual of [F^{fcd}_e]_{gl}[F^{abl}_e]_{fk} = sum_h [F^{abc}_g]_{fh}[F^{ahd}_e]_{gk}[F^{bcd}_k]_{hl}.

    Works for any multiplicity-free category exposing ``fuse`` and ``F``.
    """
    if hasattr(cat, "is_nondegenerate") and not cat.is_nondegenerate():
        raise FusionError("bicharacter is degenerate")
    lab = list(labels) if labels is not None else list(range(cat.n + 1))
    worst, count = 0.0, 0
    for a, b, c, d in itertools.product(lab, repeat=4):
        for f in cat.fuse(a, b):
            for g in cat.fuse(f, c):
                for e in cat.fuse(g, d):
                    for l in cat.fuse(c, d):
                        for k in cat.fuse(b, l):
                            if e not in cat.fuse(a, k):
                                continue
                            lhs = cat.F(f, c, d, e, g, l) * cat.F(a, b, l, e, f, k)
                            rhs = sum(cat.F(a, b, c, g, f, h) * cat.F(a, h, d, e, g, k)
                                      * cat.F(b, c, d, k, h, l) for h in cat.fuse(b, c))
                            worst = max(worst, abs(lhs - rhs))
                            count += 1
    return {"instances": count, "max_residual": worst}


def ty_ring(cat: TYCategory) -> FusionRing:
    size = cat.n + 1
    mult = np.zeros((size, size, size), dtype=np.int64)
    for a in range(size):
        for b in range(size):
            for c in cat.fuse(a, b):
                mult[a, b, c] += 1
    return FusionRing(cat.labels, mult)


def unitarity_check(cat: TYCategory) -> float:
    """Largest deviation from unitarity over all F-matrices."""
    lab = range(cat.n + 1)
    worst = 0.0
    for a, b, c, d in itertools.product(lab, repeat=4):
        es = [e for e in cat.fuse(a, b) if d in cat.fuse(e, c)]
        fs = [f for f in cat.fuse(b, c) if d in cat.fuse(a, f)]
        if not es:
            continue
        m = np.array([[cat.F(a, b, c, d, e, f) for f in fs] for e in es], dtype=complex)
        if m.shape[0] != m.shape[1]:
            return float("inf")
        worst = max(worst, float(np.abs(m @ m.conj().T - np.eye(len(es))).max()))
    return worst


# algebra objects and condensation

@dataclass
class AlgebraObject:
    mult: np.ndarray
    name: str = "custom"

    def support(self) -> list[int]:
        return [int(a) for a in np.nonzero(self.mult)[0]]


def electric_algebra(n: int) -> AlgebraObject:
    v = np.zeros(n * n, dtype=np.int64)
    v[[g * n for g in range(n)]] = 1
    return AlgebraObject(v, "A_e")


def magnetic_algebra(n: int) -> AlgebraObject:
    v = np.zeros(n * n, dtype=np.int64)
    v[list(range(n))] = 1
    return AlgebraObject(v, "A_m")


def algebra_from_labels(n: int, pairs: Sequence[tuple[int, int]], name="custom") -> AlgebraObject:
    v = np.zeros(n * n, dtype=np.int64)
    for g, h in pairs:
        v[(g % n) * n + h % n] += 1
    return AlgebraObject(v, name)


def lagrangian_check(alg: AlgebraObject, data: AnyonData) -> dict:
    ring = data.ring
    d = ring.fpdims()
    sup = alg.support()
    bosonic = all(data.theta[a] == 0 for a in sup)
    connected = int(alg.mult[ring.unit]) == 1
    dim_a = float(alg.mult @ d)
    total = float((d ** 2).sum())
    dimension = abs(dim_a ** 2 - total) < 1e-9
    ineq_bad = []
    closure = np.einsum("abc,c->ab", ring.mult, alg.mult)
    for a in sup:
        for b in sup:
            if alg.mult[a] * alg.mult[b] > closure[a, b]:
                ineq_bad.append([ring.labels[a], ring.labels[b]])
    return {"algebra": alg.name, "bosonic": bosonic, "connected": connected,
            "dimension": dimension, "dim": dim_a, "total_dim": total,
            "closure_failures": ineq_bad,
            "lagrangian": bosonic and connected and dimension and not ineq_bad}


def symmetry_breaking_check(alg: AlgebraObject, action: Sequence[int]) -> dict:
    p = np.asarray(action)
    image = np.zeros_like(alg.mult)
    image[p] = alg.mult
    fixed = bool((image == alg.mult).all())
    return {"algebra": alg.name, "image": image.tolist(),
            "verdict": "preserved" if fixed else "broken"}


def subgroup_algebras(n: int) -> list[AlgebraObject]:
    """0/1 algebras supported on subgroups of Z_N x Z_N (at most two generators)."""
    seen = {}
    elems = [(g, h) for g in range(n) for h in range(n)]
    for x, y in itertools.combinations_with_replacement(elems, 2):
        sub = {((i * x[0] + j * y[0]) % n, (i * x[1] + j * y[1]) % n)
               for i in range(n) for j in range(n)}
        key = frozenset(sub)
        if key not in seen:
            seen[key] = algebra_from_labels(n, sorted(sub), "subgroup" + str(sorted(sub)))
    return list(seen.values())


def lagrangian_census(n: int) -> list[str]:
    data = build_anyon_data(n)
    out = []
    for alg in subgroup_algebras(n):
        if lagrangian_check(alg, data)["lagrangian"]:
            out.append(alg.name)
    return out


def boundary_rules(alg: AlgebraObject, n: int) -> dict:
    """Boundary excitations for the e- or m-condensed boundary, with sigma x sigma = sigma.

    The table is checked for associativity as a based ring; the missing unit in
    sigma x sigma and the resulting dimension clash are reported, not repaired.
    """
    names = {"A_e": "M", "A_m": "E"}
    if alg.name not in names or not (alg.mult == (electric_algebra(n) if alg.name == "A_e"
                                                 else magnetic_algebra(n)).mult).all():
        raise FusionError("boundary rules are defined for A_e and A_m only")
    tag = names[alg.name]
    labels = [f"{tag}{g}" for g in range(n)] + ["sigma"]
    s = n
    mult = np.zeros((n + 1, n + 1, n + 1), dtype=np.int64)
    for a in range(n):
        for b in range(n):
            mult[a, b, (a + b) % n] = 1
        mult[a, s, s] = mult[s, a, s] = 1
    mult[s, s, s] = 1
    left = np.einsum("abe,ecd->abcd", mult, mult)
    right = np.einsum("bcf,afd->abcd", mult, mult)
    associative = bool((left == right).all())
    rigid = bool(mult[s, s, 0] == 1)
    d_sigma_table = 1.0  # from sigma x sigma = sigma
    sr = set_ring(n)
    absorbed = {}
    for k in range(n):
        acc: dict[str, int] = {}
        for a in alg.support():
            for c, m in sr.fuse(sr.label(defect_name(k)), a).items():
                acc[sr.labels[c]] = acc.get(sr.labels[c], 0) + m
        absorbed[defect_name(k)] = acc
    notes = []
    if not rigid:
        notes.append("sigma x sigma lacks the unit, so sigma has no dual in the printed table")
    notes.append(f"printed table forces dim sigma = {d_sigma_table:g}, "
                 f"while a Tambara-Yamagami boundary needs sqrt({n}) = {math.sqrt(n):.6f}")
    return {"algebra": alg.name, "labels": labels,
            "table": {f"{labels[a]}x{labels[b]}": [labels[c] for c in np.nonzero(mult[a, b])[0]]
                      for a in range(n + 1) for b in range(n + 1)},
            "associative": associative, "rigid": rigid,
            "defect_absorption": absorbed, "tension": notes}
