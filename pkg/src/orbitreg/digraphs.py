"""Weighted and colored directed multigraphs.

Vertices are ``0 .. n-1``.  Loops and parallel edges are allowed.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

from . import linalg as la
from .lrs import Lrs


@dataclass(frozen=True)
class WeightedDigraph:
    n: int
    edges: tuple  # (src, dst, weight)
    s: int = 0
    f: int = 0

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple((int(a), int(b), int(w)) for a, b, w in self.edges))
        for a, b, _ in self.edges:
            if not (0 <= a < self.n and 0 <= b < self.n):
                raise ValueError(f"edge ({a}, {b}) outside vertex range {self.n}")
        if not (0 <= self.s < self.n and 0 <= self.f < self.n):
            raise ValueError("marked vertex out of range")

    def out_edges(self) -> dict:
        out = defaultdict(list)
        for a, b, w in self.edges:
            out[a].append((b, w))
        return out

    def __str__(self) -> str:
        lines = [f"digraph {self.n}", f"mark s {self.s}", f"mark f {self.f}"]
        lines += [f"edge {a} {b} {w}" for a, b, w in self.edges]
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ColoredDigraph:
    n: int
    edges: tuple  # (src, dst, color) with color in 1..colors
    colors: int
    a: int = 0
    b: int = 0

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple((int(x), int(y), int(c)) for x, y, c in self.edges))
        for x, y, c in self.edges:
            if not (0 <= x < self.n and 0 <= y < self.n):
                raise ValueError(f"edge ({x}, {y}) outside vertex range {self.n}")
            if not 1 <= c <= self.colors:
                raise ValueError(f"color {c} outside 1..{self.colors}")

    def __str__(self) -> str:
        lines = [f"digraph {self.n}", f"colors {self.colors}", f"mark s {self.a}", f"mark f {self.b}"]
        lines += [f"edge {x} {y} {c}" for x, y, c in self.edges]
        return "\n".join(lines) + "\n"


def walk_weight_sum(g: WeightedDigraph, n: int) -> int:
    """Sum over length-n walks s -> f of the product of edge weights."""
    vec = {g.s: 1}
    for _ in range(n):
        nxt: dict[int, int] = defaultdict(int)
        for a, b, w in g.edges:
            if a in vec:
                nxt[b] += vec[a] * w
        vec = nxt
    return vec.get(g.f, 0)


def count_paths(g, source: int, target: int, n: int) -> int:
    """Number of length-n walks from source to target (weights ignored)."""
    vec = {source: 1}
    for _ in range(n):
        nxt: dict[int, int] = defaultdict(int)
        for a, b, *_ in g.edges:
            if a in vec:
                nxt[b] += vec[a]
        vec = nxt
    return vec.get(target, 0)


def walk_weights(g: ColoredDigraph, a: int, b: int, maxlen: int) -> set:
    """Color-count vectors of all a -> b walks of length <= maxlen."""
    frontier = {(a, (0,) * g.colors)}
    seen = set(frontier)
    found = set()
    if a == b:
        found.add((0,) * g.colors)
    out = defaultdict(list)
    for x, y, c in g.edges:
        out[x].append((y, c))
    for _ in range(maxlen):
        nxt = set()
        for v, w in frontier:
            for y, c in out[v]:
                w2 = w[: c - 1] + (w[c - 1] + 1,) + w[c:]
                key = (y, w2)
                if key not in seen:
                    seen.add(key)
                    nxt.add(key)
                if y == b:
                    found.add(w2)
        frontier = nxt
    return found


def lrs_digraph_weights(s: Lrs) -> tuple[list[int], list[int]]:
    """Path weights p_i and cycle weights q_i realizing ``s`` as walk sums."""
    if not s.is_integral:
        raise ValueError("integer LRS data required")
    q = [int(a) for a in s.coeffs]
    b = [int(x) for x in s.init]
    p = []
    for i in range(1, s.degree + 1):
        p.append(b[i - 1] - sum(q[i - j - 1] * b[j - 1] for j in range(1, i)))
    return p, q


def build_lrs_digraph(s: Lrs) -> WeightedDigraph:
    """Digraph G_x whose length-n s -> f walk-weight sum is ``x_n``.

    Vertex 0 is s and vertex 1 is f.  Path P_i has i edges, cycle C_i
    through f has i edges; the first edges carry p_i and q_i.
    """
    p, q = lrs_digraph_weights(s)
    edges = []
    n = 2
    for i in range(1, s.degree + 1):
        for start, weight, is_cycle in ((0, p[i - 1], False), (1, q[i - 1], True)):
            chain = [start] + list(range(n, n + i - 1)) + [1]
            n += i - 1
            for e, (x, y) in enumerate(zip(chain, chain[1:])):
                edges.append((x, y, weight if e == 0 else 1))
    return WeightedDigraph(n, tuple(edges), 0, 1)


def counting_threads(n: int, k: int) -> list[int]:
    """Set bit positions of ``n``; each gives one thread of the counting digraph."""
    if n < 1:
        raise ValueError("counting digraphs need a positive count")
    if k < n.bit_length():
        raise ValueError(f"k={k} must exceed log2({n})")
    return [j for j in range(n.bit_length()) if (n >> j) & 1]


def build_counting_digraph(n: int, k: int) -> WeightedDigraph:
    """Digraph with exactly n length-k walks from s (vertex 0) to f (vertex 1).

    Thread j is a doubled path on j edge pairs followed by a single path
    of length k - j; all threads share s and f.
    """
    edges = []
    size = 2
    for j in counting_threads(n, k):
        # vertices along the thread, first = s, last = f
        chain = [0] + list(range(size, size + k - 1)) + [1]
        size += k - 1
        for e, (x, y) in enumerate(zip(chain, chain[1:])):
            edges.append((x, y, 1))
            if e < j:
                edges.append((x, y, 1))
    return WeightedDigraph(size, tuple(edges), 0, 1)
