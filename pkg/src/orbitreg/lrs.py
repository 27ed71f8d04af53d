"""Linear recurrent sequences with exact rational data.

An :class:`Lrs` of degree ``d`` is ``x_n = a_1 x_{n-1} + ... + a_d x_{n-d}``
for ``n > d`` with ``x_n = b_n`` for ``1 <= n <= d``.  Indexing starts at 1.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

from . import linalg as la

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Lrs:
    coeffs: tuple
    init: tuple

    def __post_init__(self):
        coeffs = la.vector(self.coeffs)
        init = la.vector(self.init)
        if len(coeffs) != len(init) or not coeffs:
            raise ValueError("an LRS needs matching, nonempty coefficient and initial lists")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "init", init)

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    @property
    def is_integral(self) -> bool:
        return la.is_integral(self.coeffs) and la.is_integral(self.init)

    def values(self, count: int) -> list:
        """First ``count`` elements x_1 .. x_count."""
        d = self.degree
        xs = list(self.init[:count])
        while len(xs) < count:
            n = len(xs)
            xs.append(la.normalize(sum((a * xs[n - i] for i, a in enumerate(self.coeffs, 1)), 0)))
        return xs

    def __getitem__(self, n: int):
        return lrs_eval(self, n)

    def __str__(self) -> str:
        fmt = lambda v: " ".join(str(x) for x in v)  # noqa: E731
        return f"lrs {self.degree}\na {fmt(self.coeffs)}\nb {fmt(self.init)}\n"


@dataclass(frozen=True)
class Affine:
    """Affine function ``x -> coeffs . x + const``."""

    coeffs: tuple
    const: object = 0

    def __post_init__(self):
        object.__setattr__(self, "coeffs", la.vector(self.coeffs))
        object.__setattr__(self, "const", la.normalize(la.to_fraction(self.const)))

    def __call__(self, x: Sequence):
        return la.normalize(la.dot(self.coeffs, x) + self.const)

    @property
    def dim(self) -> int:
        return len(self.coeffs)


def as_affine(h) -> Affine:
    if isinstance(h, Affine):
        return h
    return Affine(tuple(h))


def constant(c, degree: int = 1) -> Lrs:
    return Lrs((1,) + (0,) * (degree - 1), (c,) * degree)


def zero(degree: int = 1) -> Lrs:
    return Lrs((0,) * degree, (0,) * degree)


def lrs_eval(s: Lrs, n: int):
    if n < 1:
        raise ValueError("LRS elements are indexed from 1")
    return s.values(n)[n - 1]


def scale_to_integer(s: Lrs) -> tuple[Lrs, int]:
    """Integral LRS ``y`` with ``y_n = N**(n+1) * x_n``, together with N."""
    big_n = 1
    for v in s.coeffs + s.init:
        big_n = lcm(big_n, la.to_fraction(v).denominator)
    coeffs = [big_n**i * a for i, a in enumerate(s.coeffs, 1)]
    init = [big_n ** (n + 1) * b for n, b in enumerate(s.init, 1)]
    return Lrs(coeffs, init), big_n


def companion_system(s: Lrs) -> tuple[la.Matrix, la.Vector]:
    """Companion matrix and start vector ``(b_d, ..., b_1)``.

    ``A**k x0 = (x_{k+d}, ..., x_{k+1})``.
    """
    d = s.degree
    rows = [tuple(s.coeffs)]
    for i in range(1, d):
        rows.append(tuple(1 if j == i - 1 else 0 for j in range(d)))
    return tuple(rows), tuple(reversed(s.init))


def companion_orbit(s: Lrs) -> tuple[la.Matrix, la.Vector, Affine]:
    """Companion embedding with the first-coordinate functional.

    ``h(phi**k x0) = x_{k+d}`` for all k >= 0.
    """
    phi, x0 = companion_system(s)
    h = Affine(tuple(1 if i == 0 else 0 for i in range(s.degree)))
    return phi, x0, h


def last_coordinate(d: int) -> Affine:
    """Functional reading ``x_{k+1}`` off ``A**k x0`` for a companion system."""
    return Affine(tuple(1 if i == d - 1 else 0 for i in range(d)))


def _affine_system(phi, x0, h: Affine):
    """Fold the constant term of ``h`` into an extra fixed coordinate."""
    if h.const == 0:
        return phi, tuple(x0), h.coeffs
    n = len(phi)
    big = tuple(tuple(row) + (0,) for row in phi) + ((0,) * n + (1,),)
    return big, tuple(x0) + (1,), tuple(h.coeffs) + (h.const,)


def fit_recurrence(seq: Sequence, max_degree: int) -> Lrs | None:
    """Smallest-degree recurrence reproducing ``seq`` (1-indexed values)."""
    seq = [la.to_fraction(v) for v in seq]
    for r in range(1, max_degree + 1):
        eqs = [[seq[n - i] for i in range(1, r + 1)] for n in range(r, len(seq))]
        rhs = [seq[n] for n in range(r, len(seq))]
        if not eqs:
            return Lrs((0,) * r, seq[:r])
        sol = la.solve(eqs, rhs)
        if sol is not None:
            if r > 1:
                log.debug("recurrence fitted at degree %d", r)
            return Lrs(sol, seq[:r])
    return None


def lrs_from_orbit(phi, x0, h, start: int = 1) -> Lrs:
    """LRS whose n-th element is ``h(phi**(n - 1 + start) x0)``.

    With the default ``start=1`` the n-th element is ``h(phi**n x0)``.
    The degree is the smallest one consistent with the first ``2 * order``
    elements, which by the Cayley-Hamilton argument determines it exactly.
    """
    h = as_affine(h)
    big_phi, big_x0, coeffs = _affine_system(phi, x0, h)
    order = len(big_phi)
    x = la.mat_vec(la.mat_pow(big_phi, start), big_x0)
    seq = []
    for _ in range(2 * order):
        seq.append(la.dot(coeffs, x))
        x = la.mat_vec(big_phi, x)
    fitted = fit_recurrence(seq, order)
    if fitted is None:  # cannot happen for a genuine linear orbit
        raise ArithmeticError("no recurrence of degree <= order fits the orbit")
    return fitted


def _unit_system(s: Lrs):
    """(phi, x0, h) with h(phi**(n-1) x0) = x_n."""
    phi, x0 = companion_system(s)
    return phi, x0, last_coordinate(s.degree).coeffs


def lrs_add(s: Lrs, t: Lrs) -> Lrs:
    ps, xs, hs = _unit_system(s)
    pt, xt, ht = _unit_system(t)
    return lrs_from_orbit(la.direct_sum(ps, pt), xs + xt, hs + ht, start=0)


def lrs_scale(s: Lrs, c) -> Lrs:
    return Lrs(s.coeffs, tuple(c * b for b in s.init))


def lrs_hadamard(s: Lrs, t: Lrs) -> Lrs:
    ps, xs, hs = _unit_system(s)
    pt, xt, ht = _unit_system(t)
    return lrs_from_orbit(la.kron(ps, pt), la.kron_vec(xs, xt), la.kron_vec(hs, ht), start=0)


def shp_product_lrs(families: Sequence[Sequence[Lrs]]) -> Lrs:
    """LRS with n-th value ``prod_j sum_k phi(j, k)_n ** 2``."""
    result = constant(1)
    for block in families:
        block_sum = zero()
        for s in block:
            block_sum = lrs_add(block_sum, lrs_hadamard(s, s))
        result = lrs_hadamard(result, block_sum)
    return result


def lrs_interleave(seqs: Sequence[Lrs]) -> Lrs:
    """Merge m sequences: ``r_{s*m + j} = seqs[j-1]_{s+1}`` for j = 1..m.

    Realized by a block system of m delay lines; line j holds its
    sequence's companion state and reaches the read-out slot every m steps.
    """
    m = len(seqs)
    if m == 0:
        raise ValueError("nothing to interleave")
    if m == 1:
        return seqs[0]
    systems = [_unit_system(s) for s in seqs]
    offsets = []
    total = 0
    for phi, _, _ in systems:
        offsets.append(total)
        total += m * len(phi)
    big = [[0] * total for _ in range(total)]
    x0 = [0] * total
    h = [0] * total
    for j, (phi, x, hj) in enumerate(systems):
        d = len(phi)
        base = offsets[j]
        slot = lambda p: base + p * d  # noqa: E731
        for p in range(1, m):
            for i in range(d):
                big[slot(p - 1) + i][slot(p) + i] = 1
        for i in range(d):
            for k in range(d):
                big[slot(m - 1) + i][slot(0) + k] = phi[i][k]
        start = slot(j % m)
        for i in range(d):
            x0[start + i] = x[i]
            h[slot(0) + i] = hj[i]
    big_t = tuple(tuple(row) for row in big)
    return lrs_from_orbit(big_t, tuple(x0), tuple(h), start=0)


def square_minus_one(s: Lrs) -> Lrs:
    """``x_n**2 - 1``: nonnegative everywhere iff ``s`` has no zero."""
    return lrs_add(lrs_hadamard(s, s), constant(-1))
