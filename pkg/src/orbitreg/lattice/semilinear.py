"""Semilinear sets, progression sets and Parikh images of colored walks."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

import networkx as nx

from ..digraphs import ColoredDigraph


def _add(u: Sequence[int], v: Sequence[int]) -> tuple:
    return tuple(a + b for a, b in zip(u, v))


def nonneg_combination(target: Sequence[int], periods: Sequence[Sequence[int]]) -> tuple | None:
    """Coefficients c in N with ``sum c_i p_i = target`` for nonnegative periods, or None."""
    target = tuple(target)
    periods = [tuple(p) for p in periods if any(p)]
    if any(x < 0 for p in periods for x in p):
        raise ValueError("periods must be nonnegative here; use integer_feasibility otherwise")

    @lru_cache(maxsize=None)
    def go(i: int, rest: tuple) -> tuple | None:
        if i == len(periods):
            return () if not any(rest) else None
        p = periods[i]
        c = 0
        cur = rest
        while all(x >= 0 for x in cur):
            sub = go(i + 1, cur)
            if sub is not None:
                return (c,) + sub
            c += 1
            cur = tuple(x - y for x, y in zip(cur, p))
        return None

    if any(x < 0 for x in target):
        return None
    return go(0, target)


@dataclass(frozen=True)
class LinearSet:
    base: tuple
    periods: tuple

    def contains(self, x: Sequence[int]) -> bool:
        rest = tuple(a - b for a, b in zip(x, self.base))
        return nonneg_combination(rest, self.periods) is not None


@dataclass(frozen=True)
class SemilinearSet:
    components: tuple  # LinearSet
    dim: int

    def contains(self, x: Sequence[int]) -> bool:
        return any(c.contains(x) for c in self.components)

    def __str__(self) -> str:
        lines = [f"semilinear {self.dim}"]
        for c in self.components:
            lines.append("component")
            lines.append("base " + " ".join(map(str, c.base)))
            lines += ["period " + " ".join(map(str, p)) for p in c.periods]
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ProgressionSet:
    """``finite`` together with every ``n0 + k*N`` (k >= 0) for each (n0, N)."""

    finite: frozenset
    progressions: tuple

    def contains(self, n: int) -> bool:
        if n in self.finite:
            return True
        return any(n >= n0 and (n - n0) % d == 0 for n0, d in self.progressions)

    def members(self, upto: int) -> list[int]:
        return [n for n in range(upto + 1) if self.contains(n)]

    @property
    def empty(self) -> bool:
        return not self.finite and not self.progressions

    def __str__(self) -> str:
        lines = [" ".join(["finite"] + [str(n) for n in sorted(self.finite)])]
        lines += [f"prog {n0} {d}" for n0, d in self.progressions]
        return "\n".join(lines) + "\n"


def eventually_periodic(seq_step, start, key=lambda s: s, limit: int = 1 << 20):
    """Iterate ``start, step(start), ...`` until a state repeats.

    Returns (states, preperiod, period) where ``states[n]`` is the n-th state
    for n < preperiod + period.
    """
    states = [start]
    seen = {key(start): 0}
    while True:
        nxt = seq_step(states[-1])
        k = key(nxt)
        if k in seen:
            first = seen[k]
            return states, first, len(states) - first
        seen[k] = len(states)
        states.append(nxt)
        if len(states) > limit:
            raise RuntimeError("sequence did not become periodic within limit")


def progression_set(predicate_states: list[bool], preperiod: int, period: int) -> ProgressionSet:
    finite = frozenset(n for n in range(preperiod) if predicate_states[n])
    progs = tuple((n, period) for n in range(preperiod, preperiod + period) if predicate_states[n])
    return ProgressionSet(finite, progs)


def _edge_colors(g: ColoredDigraph) -> dict:
    cols: dict = defaultdict(set)
    for x, y, c in g.edges:
        cols[(x, y)].add(c)
    return cols


def _expand(vertices: Sequence[int], cols: dict, closed: bool, ncolors: int) -> set:
    """Distinct color vectors of a vertex sequence, choosing colors of parallel edges."""
    steps = list(zip(vertices, vertices[1:]))
    if closed:
        steps.append((vertices[-1], vertices[0]))
    out = set()
    for choice in product(*(sorted(cols[s]) for s in steps)):
        w = [0] * ncolors
        for c in choice:
            w[c - 1] += 1
        out.add(tuple(w))
    return out


def simple_cycles(g: ColoredDigraph) -> list[tuple[frozenset, tuple]]:
    """(vertex set, color vector) for every simple cycle and color choice."""
    cols = _edge_colors(g)
    dg = nx.DiGraph()
    dg.add_nodes_from(range(g.n))
    dg.add_edges_from(cols)
    found = set()
    for cyc in nx.simple_cycles(dg):
        for w in _expand(cyc, cols, True, g.colors):
            found.add((frozenset(cyc), w))
    return sorted(found, key=lambda t: (sorted(t[0]), t[1]))


def simple_paths(g: ColoredDigraph, a: int, b: int) -> list[tuple[frozenset, tuple]]:
    cols = _edge_colors(g)
    if a == b:
        return [(frozenset([a]), (0,) * g.colors)]
    dg = nx.DiGraph()
    dg.add_nodes_from(range(g.n))
    dg.add_edges_from(cols)
    found = set()
    for path in nx.all_simple_paths(dg, a, b):
        for w in _expand(path, cols, False, g.colors):
            found.add((frozenset(path), w))
    return sorted(found, key=lambda t: (sorted(t[0]), t[1]))


def parikh(g: ColoredDigraph, a: int | None = None, b: int | None = None, max_components: int = 100000) -> SemilinearSet:
    """Color-count vectors of all a -> b walks as a semilinear set.

    Every walk splits into a simple path plus simple cycles, and a cycle
    can be inserted exactly when it touches the vertices already visited.
    A component is a path together with a set of cycles that enlarges the
    visited set one cycle at a time; its periods are all cycles touching
    the final visited set.
    """
    a = g.a if a is None else a
    b = g.b if b is None else b
    cycles = simple_cycles(g)
    comps: set = set()
    for pverts, pw in simple_paths(g, a, b):
        seen_states = set()
        stack = [(pverts, pw, frozenset())]
        while stack:
            covered, base, used = stack.pop()
            if (covered, used) in seen_states:
                continue
            seen_states.add((covered, used))
            periods = tuple(sorted({w for vs, w in cycles if vs & covered}))
            comps.add(LinearSet(base, periods))
            if len(comps) > max_components:
                raise RuntimeError("semilinear representation too large")
            for ci, (vs, w) in enumerate(cycles):
                if ci not in used and vs & covered and not vs <= covered:
                    stack.append((covered | vs, _add(base, w), used | {ci}))
    ordered = tuple(sorted(comps, key=lambda c: (c.base, c.periods)))
    return SemilinearSet(_prune(ordered), g.colors)


def _prune(comps: Iterable[LinearSet]) -> tuple:
    """Drop components contained in another with the same or larger period set."""
    comps = list(comps)
    keep = []
    for i, c in enumerate(comps):
        dominated = False
        for j, d in enumerate(comps):
            if i == j or not set(c.periods) <= set(d.periods):
                continue
            if d.contains(c.base) and (set(c.periods) < set(d.periods) or j < i):
                dominated = True
                break
        if not dominated:
            keep.append(c)
    return tuple(keep)
