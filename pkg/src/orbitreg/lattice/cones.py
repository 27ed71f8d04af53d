"""Integer cones: Hilbert bases, integral Caratheodory decomposition,
dual descriptions and bounded integer feasibility.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Sequence

from .. import linalg as la
from ..errors import Refusal


@dataclass(frozen=True)
class TranslatedCone:
    apex: tuple
    gens: tuple

    @property
    def dim(self) -> int:
        return len(self.apex)

    def __str__(self) -> str:
        lines = [f"cone {self.dim}", "apex " + " ".join(map(str, self.apex))]
        lines += ["gen " + " ".join(map(str, g)) for g in self.gens]
        return "\n".join(lines) + "\n"


def _ivec(v) -> tuple:
    return tuple(int(x) for x in v)


def _independent_rows(gens: Sequence[Sequence[int]]) -> list[int]:
    """Coordinates on which the generator matrix is invertible."""
    t = len(gens)
    s = len(gens[0])
    for rows in combinations(range(s), t):
        sub = [[g[r] for g in gens] for r in rows]
        if la.det(sub) != 0:
            return list(rows)
    raise ValueError("generators must be linearly independent")


def parallelepiped_points(gens: Sequence[Sequence[int]], half_open: bool = False) -> list[tuple]:
    """Integer points ``sum lam_i g_i`` with every lam_i in [0, 1] (or [0, 1)).

    The scan runs over a box in t chosen coordinates; the remaining
    coordinates are determined by lam and checked for integrality.
    """
    gens = [_ivec(g) for g in gens]
    if not gens:
        return []
    s = len(gens[0])
    rows = _independent_rows(gens)
    sub = la.matrix([[g[r] for g in gens] for r in rows])
    sub_inv = la.inverse(sub)
    ranges = []
    for r in rows:
        lo = sum(min(0, g[r]) for g in gens)
        hi = sum(max(0, g[r]) for g in gens)
        ranges.append(range(lo, hi + 1))
    out = []
    for y in product(*ranges):
        lam = la.mat_vec(sub_inv, y)
        if any(x < 0 or x > 1 or (half_open and x == 1) for x in lam):
            continue
        point = [sum(lam[i] * g[c] for i, g in enumerate(gens)) for c in range(s)]
        if all(Fraction(p).denominator == 1 for p in point):
            out.append(_ivec(point))
    return sorted(out)


def hilbert_basis(gens: Sequence[Sequence[int]]) -> list[tuple]:
    """Integer points of the closed fundamental parallelepiped (not minimized)."""
    return parallelepiped_points(gens, half_open=False)


def in_rational_cone(x, gens, apex=None) -> bool:
    """``x in apex + cone(gens)`` for independent generators."""
    apex = apex if apex is not None else (0,) * len(x)
    diff = [la.to_fraction(a) - la.to_fraction(b) for a, b in zip(x, apex)]
    if not gens:
        return not any(diff)
    lam = la.solve(la.transpose(la.matrix(gens)), diff)
    return lam is not None and all(c >= 0 for c in lam)


def minimal_solutions(a: Sequence[Sequence[int]], upper: Sequence[int | None] | None = None, budget: int = 200000) -> list[tuple]:
    """Minimal nonzero solutions of ``A x = 0`` over N (Contejean-Devie).

    ``upper`` optionally caps individual unknowns; minimal solutions under
    the caps are still found since the search only moves upward toward them.
    """
    a = [list(map(int, r)) for r in a]
    n = len(a[0])
    m = len(a)
    upper = list(upper) if upper is not None else [None] * n
    cols = [tuple(a[i][j] for i in range(m)) for j in range(n)]
    found: list[tuple] = []

    def dominated(x) -> bool:
        return any(all(f[i] <= x[i] for i in range(n)) for f in found)

    frontier = []
    for j in range(n):
        if upper[j] is None or upper[j] >= 1:
            frontier.append((tuple(int(i == j) for i in range(n)), cols[j]))
    steps = 0
    while frontier:
        nxt = {}
        for x, ax in frontier:
            if not any(ax):
                if not dominated(x):
                    found.append(x)
                continue
        for x, ax in frontier:
            if not any(ax) or dominated(x):
                continue
            for j in range(n):
                if sum(p * q for p, q in zip(ax, cols[j])) >= 0:
                    continue
                if upper[j] is not None and x[j] >= upper[j]:
                    continue
                y = x[:j] + (x[j] + 1,) + x[j + 1 :]
                if y in nxt or dominated(y):
                    continue
                nxt[y] = tuple(p + q for p, q in zip(ax, cols[j]))
                steps += 1
                if steps > budget:
                    raise Refusal(f"minimal-solution search exceeded budget {budget}")
        frontier = list(nxt.items())
    return sorted(found)


def cone_member(x, gens, apex=None, budget: int = 200000) -> bool:
    """Exact ``x in apex + N(gens)`` for arbitrary integer generators."""
    apex = apex if apex is not None else (0,) * len(x)
    target = [int(p) - int(q) for p, q in zip(x, apex)]
    gens = [_ivec(g) for g in gens if any(g)]
    if not any(target):
        return True
    if not gens:
        return False
    if all(c >= 0 for g in gens for c in g):
        from .semilinear import nonneg_combination

        return nonneg_combination(target, gens) is not None
    rows = [[g[i] for g in gens] + [-target[i]] for i in range(len(target))]
    sols = minimal_solutions(rows, [None] * len(gens) + [1], budget)
    return any(s[-1] == 1 for s in sols)


def _minimal(vectors) -> list[tuple]:
    vs = sorted(set(vectors), key=lambda v: (sum(v), v))
    out: list[tuple] = []
    for v in vs:
        if not any(all(a <= b for a, b in zip(m, v)) for m in out):
            out.append(v)
    return sorted(out)


def _upset_generators(u, basis, gens, budget) -> list[tuple]:
    """Minimal a in N^t with ``u + basis . a`` in N(gens)."""
    s = len(u)
    r, t = len(gens), len(basis)
    rows = [[g[i] for g in gens] + [-b[i] for b in basis] + [-u[i]] for i in range(s)]
    sols = minimal_solutions(rows, [None] * (r + t) + [1], budget)
    return _minimal(sol[r : r + t] for sol in sols if sol[-1] == 1)


def _split(apex, basis, mins, points: set, cones: set):
    """Decompose ``{apex + basis . a : a >= some m in mins}``.

    With B the largest coordinate among the minimal elements this is the
    box part ``a <= B``, the shifted cone ``a >= B + 1`` and, for each
    coordinate fixed at c <= B, a lower-dimensional instance.
    """
    if not mins:
        return
    t = len(basis)
    s = len(apex)
    if t == 0:
        points.add(tuple(apex))
        return
    big = max(max(m) for m in mins)

    def at(a):
        return tuple(apex[k] + sum(a[i] * basis[i][k] for i in range(t)) for k in range(s))

    for a in product(range(big + 1), repeat=t):
        if any(all(m[i] <= a[i] for i in range(t)) for m in mins):
            points.add(at(a))
    cones.add((at((big + 1,) * t), tuple(basis)))
    for i in range(t):
        rest_basis = basis[:i] + basis[i + 1 :]
        for c in range(big + 1):
            sliced = _minimal(m[:i] + m[i + 1 :] for m in mins if m[i] <= c)
            shifted = tuple(apex[k] + c * basis[i][k] for k in range(s))
            _split(shifted, rest_basis, sliced, points, cones)


def integral_caratheodory(apex, gens, budget: int = 200000) -> tuple[list[tuple], list[TranslatedCone]]:
    """Write ``apex + N(gens)`` as a finite point set plus simplicial translates.

    The rational cone is covered by cones over bases T of span(gens) taken
    from the generators.  Each lattice point of N(gens) inside cone(T) is
    ``u + T a`` with u in the half-open parallelepiped of T, and the set of
    admissible a is an up-set of N^t, handled by ``_split``.
    """
    apex = _ivec(apex)
    s = len(apex)
    gens = sorted({_ivec(g) for g in gens if any(g)})
    if not gens:
        return [apex], []
    k = la.rank(gens)
    if k == len(gens):
        return [], [TranslatedCone(apex, tuple(gens))]
    points: set = set()
    cones: set = set()
    for basis in combinations(gens, k):
        if la.rank(basis) < k:
            continue
        for u in parallelepiped_points(basis, half_open=True):
            mins = _upset_generators(u, basis, gens, budget)
            _split(u, list(basis), mins, points, cones)
    shift = lambda v: tuple(a + b for a, b in zip(v, apex))
    pts = sorted(shift(p) for p in points)
    out = sorted({(shift(a), b) for a, b in cones})
    return pts, [TranslatedCone(a, b) for a, b in out]


def decomposition_member(x, points, cones: Sequence[TranslatedCone]) -> bool:
    x = _ivec(x)
    if x in set(points):
        return True
    for c in cones:
        diff = [a - b for a, b in zip(x, c.apex)]
        lam = la.solve(la.transpose(la.matrix(c.gens)), diff)
        if lam is not None and all(v >= 0 and v.denominator == 1 for v in lam):
            return True
    return False


@dataclass(frozen=True)
class LinearConstraint:
    """``coeffs . x  op  rhs`` with op one of '>=', '<=', '=='."""

    coeffs: tuple
    op: str
    rhs: Fraction = Fraction(0)

    def holds(self, x) -> bool:
        lhs = sum(la.to_fraction(c) * la.to_fraction(v) for c, v in zip(self.coeffs, x))
        return {">=": lhs >= self.rhs, "<=": lhs <= self.rhs, "==": lhs == self.rhs}[self.op]

    def __str__(self) -> str:
        return " ".join(map(str, self.coeffs)) + f" {self.op} {self.rhs}"


def cone_dualize(gens: Sequence[Sequence[int]], dim: int | None = None) -> list[LinearConstraint]:
    """Facet inequalities ``n . x >= 0`` plus span equalities for cone(gens).

    Candidate facet normals are orthogonal to rank-1 less generators and to
    the complement of the span; a candidate is kept when all generators
    lie on its nonnegative side.
    """
    gens = [_ivec(g) for g in gens if any(g)]
    s = dim if dim is not None else len(gens[0])
    eq_normals = la.nullspace(gens, s) if gens else [tuple(int(i == j) for j in range(s)) for i in range(s)]
    out = [LinearConstraint(tuple(n), "==", Fraction(0)) for n in eq_normals]
    k = la.rank(gens) if gens else 0
    normals = set()
    for sub in combinations(gens, k - 1) if k >= 1 else ():
        if sub and la.rank(sub) < k - 1:
            continue
        cand = la.nullspace(list(sub) + list(eq_normals), s)
        if len(cand) != 1:
            continue
        n = la.primitive(cand[0])
        signs = {(la.dot(n, g) > 0) - (la.dot(n, g) < 0) for g in gens}
        if -1 in signs and 1 in signs:
            continue
        if -1 in signs:
            n = tuple(-c for c in n)
        normals.add(n)
    out += [LinearConstraint(n, ">=", Fraction(0)) for n in sorted(normals, reverse=True)]
    return out


def _propagate(cons, lo, hi) -> bool:
    """Tighten integer bounds in place; False when some domain is empty."""
    changed = True
    rounds = 0
    while changed:
        changed = False
        rounds += 1
        if rounds > 200:
            break
        for c in cons:
            parts = [(i, la.to_fraction(a)) for i, a in enumerate(c.coeffs) if a]
            forms = []
            if c.op in (">=", "=="):
                forms.append(([(i, -a) for i, a in parts], -la.to_fraction(c.rhs)))
            if c.op in ("<=", "=="):
                forms.append((parts, la.to_fraction(c.rhs)))
            # each form reads sum a_i x_i <= r
            for terms, r in forms:
                for i, a in terms:
                    rest = Fraction(0)
                    finite = True
                    for j, b in terms:
                        if j == i:
                            continue
                        bound = lo[j] if b > 0 else hi[j]
                        if bound is None:
                            finite = False
                            break
                        rest += b * bound
                    if not finite:
                        continue
                    lim = (r - rest) / a
                    if a > 0:
                        new = math.floor(lim)
                        if hi[i] is None or new < hi[i]:
                            hi[i] = new
                            changed = True
                    else:
                        new = math.ceil(lim)
                        if lo[i] is None or new > lo[i]:
                            lo[i] = new
                            changed = True
                    if lo[i] is not None and hi[i] is not None and lo[i] > hi[i]:
                        return False
    return True


def integer_feasibility(
    constraints: Sequence[LinearConstraint],
    nvars: int,
    lower: Sequence[int | None] | None = None,
    upper: Sequence[int | None] | None = None,
    budget: int = 1 << 20,
) -> tuple | None:
    """An integer point satisfying all constraints, or None.

    Bounds are propagated to a box first; if some variable stays unbounded
    the search refuses rather than guess.  The box is then searched
    depth-first with propagation at every node.
    """
    lo = list(lower) if lower is not None else [None] * nvars
    hi = list(upper) if upper is not None else [None] * nvars
    if not _propagate(constraints, lo, hi):
        return None
    free = [i for i in range(nvars) if lo[i] is None or hi[i] is None]
    if free:
        raise Refusal(f"variables {free} have no derived bound; bounded search would be incomplete")
    nodes = 0

    def search(lo, hi):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise Refusal(f"integer search exceeded budget {budget}")
        var = next((i for i in range(nvars) if lo[i] != hi[i]), None)
        if var is None:
            return tuple(lo) if all(c.holds(lo) for c in constraints) else None
        for val in range(lo[var], hi[var] + 1):
            l2, h2 = list(lo), list(hi)
            l2[var] = h2[var] = val
            if _propagate(constraints, l2, h2):
                got = search(l2, h2)
                if got is not None:
                    return got
        return None

    return search(lo, hi)
