"""Smith normal form, lattice membership along an orbit and basis completion."""

from __future__ import annotations

from itertools import combinations
from math import gcd
from typing import Sequence

from .. import linalg as la
from .semilinear import ProgressionSet, eventually_periodic, progression_set


def _int_matrix(m) -> list[list[int]]:
    rows = [list(r) for r in m]
    for r in rows:
        for x in r:
            if la.to_fraction(x).denominator != 1:
                raise ValueError("integer matrix required")
    return [[int(x) for x in r] for r in rows]


def smith_normal_form(m) -> tuple[tuple, tuple, tuple]:
    """Return (U, D, V) with ``M = U D V``, U and V unimodular and
    D diagonal with ``d_i | d_{i+1}`` and nonnegative entries.
    """
    a = _int_matrix(m)
    rows = len(a)
    cols = len(a[0]) if rows else 0
    # U and V are maintained as the inverses of the applied row / column operations
    u = [[int(i == j) for j in range(rows)] for i in range(rows)]
    v = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def row_add(i, j, c):  # row_i += c * row_j
        for k in range(cols):
            a[i][k] += c * a[j][k]
        for k in range(rows):
            u[k][j] -= c * u[k][i]

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]
        for k in range(rows):
            u[k][i], u[k][j] = u[k][j], u[k][i]

    def row_neg(i):
        a[i] = [-x for x in a[i]]
        for k in range(rows):
            u[k][i] = -u[k][i]

    def col_add(i, j, c):  # col_i += c * col_j
        for k in range(rows):
            a[k][i] += c * a[k][j]
        for k in range(cols):
            v[j][k] -= c * v[i][k]

    def col_swap(i, j):
        for k in range(rows):
            a[k][i], a[k][j] = a[k][j], a[k][i]
        v[i], v[j] = v[j], v[i]

    for t in range(min(rows, cols)):
        while True:
            pivot = None
            for i in range(t, rows):
                for j in range(t, cols):
                    if a[i][j] and (pivot is None or abs(a[i][j]) < abs(a[pivot[0]][pivot[1]])):
                        pivot = (i, j)
            if pivot is None:
                break
            if pivot[0] != t:
                row_swap(t, pivot[0])
            if pivot[1] != t:
                col_swap(t, pivot[1])
            p = a[t][t]
            dirty = False
            for i in range(t + 1, rows):
                q = a[i][t] // p
                if q:
                    row_add(i, t, -q)
                dirty |= a[i][t] != 0
            for j in range(t + 1, cols):
                q = a[t][j] // p
                if q:
                    col_add(j, t, -q)
                dirty |= a[t][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            row_add(t, bad, 1)
        if t < rows and t < cols and a[t][t] < 0:
            row_neg(t)
    return la.matrix(u), la.matrix(a), la.matrix(v)


def invariant_factors(m) -> list[int]:
    _, d, _ = smith_normal_form(m)
    return [int(d[i][i]) for i in range(min(la.shape(d)))]


def _int_det(m) -> int:
    return int(la.det(m))


def lattice_hitting_set(phi, x0, v0, gens: Sequence[Sequence[int]]) -> ProgressionSet:
    """``{n >= 0 : phi**n x0 in v0 + Z gens}`` for a full-rank lattice.

    After the Smith change of basis the lattice is a product of ``d_i Z``,
    so membership only depends on the orbit modulo ``q = lcm(d_i)``.
    """
    s = len(x0)
    cols = la.transpose(la.matrix(gens)) if gens else ()
    if not gens or la.rank(gens) < s:
        raise ValueError("lattice generators must have full rank")
    u, d, _ = smith_normal_form(cols)
    diag = [int(d[i][i]) for i in range(s)]
    q = 1
    for x in diag:
        q = q * x // gcd(q, x)
    u_inv = _int_matrix(la.inverse(u))
    phi_i = _int_matrix(phi)
    v0_i = [int(x) for x in v0]

    def step(z):
        return tuple(sum(r[j] * z[j] for j in range(s)) % q for r in phi_i)

    def member(z) -> bool:
        diff = [z[j] - v0_i[j] for j in range(s)]
        y = [sum(r[j] * diff[j] for j in range(s)) for r in u_inv]
        return all(y[i] % diag[i] == 0 for i in range(s))

    start = tuple(int(x) % q for x in x0)
    states, pre, period = eventually_periodic(step, start)
    return progression_set([member(z) for z in states], pre, period)


def lattice_member(x, v0, gens) -> bool:
    """Direct check of ``x in v0 + Z gens`` (full-rank generators)."""
    s = len(x)
    u, d, _ = smith_normal_form(la.transpose(la.matrix(gens)))
    y = la.mat_vec(la.inverse(u), [la.to_fraction(a) - la.to_fraction(b) for a, b in zip(x, v0)])
    return all(y[i] % d[i][i] == 0 for i in range(s))


def extend_to_basis(vs: Sequence[Sequence[int]], s: int | None = None) -> list[int] | None:
    """Unit-vector indices completing ``vs`` to a basis of Z^s, or None.

    Coordinate subsets are tried in lexicographic order; a completion is
    accepted when the square matrix has determinant +-1.
    """
    vs = [tuple(int(x) for x in v) for v in vs]
    s = s if s is not None else len(vs[0])
    if vs and la.rank(vs) < len(vs):
        raise ValueError("vectors must be linearly independent")
    need = s - len(vs)
    for idx in combinations(range(s), need):
        units = [tuple(int(i == j) for j in range(s)) for i in idx]
        if abs(_int_det(la.matrix(vs + units))) == 1:
            return list(idx)
    return None


def complete_independent(vs: Sequence[Sequence[int]], s: int) -> list[int]:
    """Unit-vector indices making ``vs`` a basis of Q^s (independence only)."""
    chosen: list[int] = []
    cur = [tuple(v) for v in vs]
    for i in range(s):
        if len(cur) == s:
            break
        e = tuple(int(i == j) for j in range(s))
        if la.rank(cur + [e]) > len(cur):
            cur.append(e)
            chosen.append(i)
    return chosen
