"""Smith normal form over the integers, optionally reduced mod n.

Works on Python ints (object semantics) so entries never overflow.
"""

from __future__ import annotations

from math import gcd
from typing import Sequence


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(a: Sequence[Sequence[int]], modulus: int | None = None):
    """Return (U, D, V) with U @ A @ V = D, U and V unimodular, D diagonal.

    The diagonal satisfies d_i | d_{i+1}.  With ``modulus`` every entry is
    reduced mod n after each step; the factorization then holds mod n and
    the diagonal holds representatives in [0, n).
    """
    m = len(a)
    n = len(a[0]) if m else 0
    d = [[int(x) for x in row] for row in a]
    u = _identity(m)
    v = _identity(n)
    red = (lambda x: x % modulus) if modulus else (lambda x: x)

    def reduce_all():
        if modulus:
            for mat in (d, u, v):
                for row in mat:
                    for j in range(len(row)):
                        row[j] %= modulus

    def row_op(i, k, c):  # row_i -= c * row_k
        if c:
            d[i] = [red(x - c * y) for x, y in zip(d[i], d[k])]
            u[i] = [red(x - c * y) for x, y in zip(u[i], u[k])]

    def col_op(j, k, c):  # col_j -= c * col_k
        if c:
            for row in d:
                row[j] = red(row[j] - c * row[k])
            for row in v:
                row[j] = red(row[j] - c * row[k])

    def swap_rows(i, k):
        d[i], d[k] = d[k], d[i]
        u[i], u[k] = u[k], u[i]

    def swap_cols(j, k):
        for mat in (d, v):
            for row in mat:
                row[j], row[k] = row[k], row[j]

    reduce_all()
    t = 0
    while t < min(m, n):
        # smallest nonzero entry of the trailing block becomes the pivot
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = d[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = d[t][t]
            dirty = False
            for i in range(t + 1, m):
                if d[i][t]:
                    row_op(i, t, d[i][t] // p)
                    if d[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if d[t][j]:
                    col_op(j, t, d[t][j] // p)
                    if d[t][j]:
                        dirty = True
            if not dirty:
                # enforce divisibility by folding a non-multiple row into row t
                bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                            if d[i][j] % p), None)
                if bad is None:
                    break
                row_op(t, bad[0], -1)
                dirty = True
            # restart with the smallest entry in row/column t as pivot
            best = (abs(d[t][t]), t, t)
            for i in range(t + 1, m):
                if d[i][t] and abs(d[i][t]) < best[0]:
                    best = (abs(d[i][t]), i, t)
            for j in range(t + 1, n):
                if d[t][j] and abs(d[t][j]) < best[0]:
                    best = (abs(d[t][j]), t, j)
            swap_rows(t, best[1])
            swap_cols(t, best[2])
        if not modulus and d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    if modulus:
        # canonical representative: replace d by gcd(d, n) via a unit rescale
        for i in range(min(m, n)):
            x = d[i][i]
            if x:
                g = gcd(x, modulus)
                unit = _unit_taking(x, g, modulus)
                d[i] = [(unit * y) % modulus for y in d[i]]
                u[i] = [(unit * y) % modulus for y in u[i]]
    return u, d, v


def _unit_taking(x: int, g: int, n: int) -> int:
    """A unit c mod n with c*x = g mod n, where g = gcd(x, n)."""
    xr, nr = x // g, n // g
    c0 = pow(xr, -1, nr) if nr > 1 else 0
    for k in range(g + 1):
        c = c0 + k * nr
        if gcd(c, n) == 1:
            return c % n
    raise ArithmeticError("no unit found")  # unreachable for g = gcd(x, n)


def diagonal(d: Sequence[Sequence[int]]) -> list[int]:
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0))]


def image_order_mod(a: Sequence[Sequence[int]], modulus: int) -> int:
    """Size of the subgroup of (Z/n)^cols generated by the rows of ``a``."""
    if not a:
        return 1
    _, d, _ = smith_normal_form(a, modulus)
    size = 1
    for x in diagonal(d):
        size *= modulus // gcd(x, modulus)
    return size
