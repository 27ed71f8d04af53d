"""Exact matrix arithmetic over the rationals.

Matrices are tuples of row tuples; vectors are plain tuples.  Entries are
``int`` or :class:`fractions.Fraction`; nothing here ever touches floats.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = tuple  # tuple[tuple[Fraction | int, ...], ...]
Vector = tuple


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def normalize(x):
    """Return an ``int`` when a rational is integral, else the Fraction."""
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x.numerator)
    return x


def matrix(rows: Sequence[Sequence]) -> Matrix:
    return tuple(tuple(normalize(to_fraction(v)) for v in row) for row in rows)


def vector(values: Sequence) -> Vector:
    return tuple(normalize(to_fraction(v)) for v in values)


def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def zeros(rows: int, cols: int) -> Matrix:
    return tuple((0,) * cols for _ in range(rows))


def shape(m: Matrix) -> tuple[int, int]:
    return len(m), (len(m[0]) if m else 0)


def transpose(m: Matrix) -> Matrix:
    if not m:
        return ()
    return tuple(zip(*m))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return tuple(
        tuple(normalize(sum((x * y for x, y in zip(row, col)), 0)) for col in bt) for row in a
    )


def mat_vec(a: Matrix, v: Vector) -> Vector:
    return tuple(normalize(sum((x * y for x, y in zip(row, v)), 0)) for row in a)


def dot(u: Sequence, v: Sequence):
    return normalize(sum((x * y for x, y in zip(u, v)), 0))


def mat_pow(a: Matrix, k: int) -> Matrix:
    if k < 0:
        raise ValueError("negative matrix power")
    result = identity(len(a))
    base = a
    while k:
        if k & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        k >>= 1
    return result


def orbit(phi: Matrix, x0: Vector, count: int):
    """Yield ``phi**n @ x0`` for n = 0 .. count-1."""
    x = tuple(x0)
    for _ in range(count):
        yield x
        x = mat_vec(phi, x)


def direct_sum(a: Matrix, b: Matrix) -> Matrix:
    ra, ca = shape(a)
    rb, cb = shape(b)
    top = tuple(tuple(row) + (0,) * cb for row in a)
    bottom = tuple((0,) * ca + tuple(row) for row in b)
    return top + bottom


def kron(a: Matrix, b: Matrix) -> Matrix:
    return tuple(
        tuple(normalize(x * y) for x in arow for y in brow) for arow in a for brow in b
    )


def kron_vec(u: Vector, v: Vector) -> Vector:
    return tuple(normalize(x * y) for x in u for y in v)


def row_reduce(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (rref rows, pivot columns)."""
    m = [[to_fraction(x) for x in row] for row in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(row_reduce(rows)[1])


def det(m: Matrix) -> Fraction:
    n = len(m)
    a = [[to_fraction(x) for x in row] for row in m]
    result = Fraction(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if a[i][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            a[c], a[pivot] = a[pivot], a[c]
            result = -result
        result *= a[c][c]
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = a[i][c] / a[c][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return result


def solve(a: Sequence[Sequence], b: Sequence) -> tuple | None:
    """One solution of ``a @ x = b`` (free variables set to zero), or None."""
    rows = [list(row) + [bi] for row, bi in zip(a, b)]
    ncols = len(a[0]) if a else 0
    rref, pivots = row_reduce(rows)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        x[c] = rref[i][ncols]
    return tuple(normalize(v) for v in x)


def inverse(m: Matrix) -> Matrix:
    n = len(m)
    aug = [list(row) + list(e) for row, e in zip(m, identity(n))]
    rref, pivots = row_reduce(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return tuple(tuple(normalize(x) for x in row[n:]) for row in rref)


def in_span(vectors: Sequence[Sequence], x: Sequence) -> bool:
    if not vectors:
        return all(v == 0 for v in x)
    return solve(transpose(tuple(tuple(v) for v in vectors)), x) is not None


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    if g == 0:
        return tuple(int(x) for x in v)
    return tuple(int(x) // g for x in v)


def is_integral(values) -> bool:
    return all(to_fraction(v).denominator == 1 for v in values)


def nullspace(rows: Sequence[Sequence], ncols: int | None = None) -> list[tuple]:
    """Basis of ``{x : rows @ x = 0}``, scaled to primitive integer vectors."""
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    if not rows:
        return [tuple(1 if i == j else 0 for i in range(ncols)) for j in range(ncols)]
    rref, pivots = row_reduce(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        x = [Fraction(0)] * ncols
        x[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            x[pc] = -rref[i][fc]
        basis.append(integral_multiple(x))
    return basis


def integral_multiple(v: Sequence) -> tuple[int, ...]:
    """Smallest positive multiple of a rational vector that is integral and primitive."""
    from math import lcm

    fr = [to_fraction(x) for x in v]
    den = 1
    for x in fr:
        den = lcm(den, x.denominator)
    return primitive([int(x * den) for x in fr])
