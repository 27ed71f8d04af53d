"""Decision procedures for the injective and surjective filters.

Both reduce to orbit hitting of order shadows.  Coordinates of
``phi**n x0`` count walks in the graph Gamma of ``phi`` (an edge f -> g of
multiplicity ``phi[g][f]``), so past the horizon |V| every residue class
modulo N is nondecreasing: inserting N steps of cycling at the first
cycle vertex of a walk is injective.  Here N is the lcm of the shortest
cycle length through each cycle vertex.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from math import lcm
from typing import Sequence

import networkx as nx

from . import linalg as la
from .automata import Dfa
from .errors import Refusal
from .filters import brute_realizability
from .lattice.semilinear import ProgressionSet, eventually_periodic, progression_set
from .monoid import WwhpInstance, inj_to_downhit, phi_system, sur_to_uphit

MAX_CARRIER = 4096
MAX_ITER = 100000


def _int_matrix(phi) -> list[list[int]]:
    m = [[int(x) for x in row] for row in phi]
    if any(x < 0 for row in m for x in row):
        raise ValueError("shadow analysis needs a nonnegative integer matrix")
    return m


def gamma_edges(phi) -> list[tuple[int, int, int]]:
    """(f, g, multiplicity) for every positive entry ``phi[g][f]``."""
    m = _int_matrix(phi)
    return [(f, g, m[g][f]) for g in range(len(m)) for f in range(len(m)) if m[g][f]]


def _digraph(n: int, edges) -> nx.DiGraph:
    dg = nx.DiGraph()
    dg.add_nodes_from(range(n))
    dg.add_edges_from((a, b) for a, b, *_ in edges)
    return dg


@dataclass(frozen=True)
class VertexClass:
    v1: frozenset  # on a directed cycle
    v2: frozenset  # reachable from the start through a V1 vertex
    v3: frozenset


def classify_vertices(n: int, edges, start: int | Sequence[int] = 0) -> VertexClass:
    dg = _digraph(n, edges)
    starts = {start} if isinstance(start, int) else set(start)
    on_cycle = set()
    for comp in nx.strongly_connected_components(dg):
        if len(comp) > 1 or any(dg.has_edge(v, v) for v in comp):
            on_cycle |= comp
    reach = set(starts)
    for s in starts:
        reach |= nx.descendants(dg, s)
    v1 = on_cycle & reach
    after = set()
    for v in v1:
        after |= nx.descendants(dg, v)
    v2 = after - v1
    v3 = set(range(n)) - v1 - v2
    return VertexClass(frozenset(v1), frozenset(v2), frozenset(v3))


def shortest_cycle(n: int, edges, v: int) -> int | None:
    succ: dict = {}
    for a, b, *_ in edges:
        succ.setdefault(a, set()).add(b)
    dist = {v: 0}
    queue = deque([v])
    while queue:
        x = queue.popleft()
        for y in succ.get(x, ()):
            if y == v:
                return dist[x] + 1
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    return None


def cycle_period(n: int, edges, classes: VertexClass) -> int:
    period = 1
    for v in classes.v1:
        period = lcm(period, shortest_cycle(n, edges, v))
    return period


def positivity_set(n: int, edges, start, g: int) -> ProgressionSet:
    """``{k : some walk of length k goes from start to g}``, exactly."""
    succ: dict = {}
    for a, b, *_ in edges:
        succ.setdefault(a, set()).add(b)
    first = frozenset([start] if isinstance(start, int) else start)
    states, pre, per = eventually_periodic(
        lambda s: frozenset(y for x in s for y in succ.get(x, ())), first
    )
    return progression_set([g in s for s in states], pre, per)


def _support(v) -> frozenset:
    return frozenset(i for i, x in enumerate(v) if x)


def _growth_levels(m: list[list[int]], support: frozenset) -> list[int]:
    """0, 1 or 2 (capped) cycles that a walk from ``support`` can gather.

    A walk that passes a strongly connected part which is not a single
    unit-weight cycle, or two distinct cyclic parts, makes the count
    unbounded; at most one unit cycle keeps it bounded.
    """
    n = len(m)
    edges = [(f, g, m[g][f]) for g in range(n) for f in range(n) if m[g][f]]
    dg = _digraph(n, edges)
    cond = nx.condensation(dg)
    members = cond.graph["mapping"]
    internal = {c: 0 for c in cond.nodes}
    for f, g, w in edges:
        if members[f] == members[g]:
            internal[members[f]] += w
    gain = {}
    for c in cond.nodes:
        size = len(cond.nodes[c]["members"])
        if internal[c] == 0:
            gain[c] = 0
        elif internal[c] == size:
            gain[c] = 1
        else:
            gain[c] = 2
    level = {c: None for c in cond.nodes}
    for c in nx.topological_sort(cond):
        best = 0 if any(v in support for v in cond.nodes[c]["members"]) else None
        for p in cond.predecessors(c):
            if level[p] is not None:
                best = level[p] if best is None else max(best, level[p])
        if best is not None:
            level[c] = min(2, best + gain[c])
    return [-1 if level[members[v]] is None else level[members[v]] for v in range(n)]


BOUNDED, UNBOUNDED = "bounded", "unbounded"


@dataclass
class ResidueClass:
    residue: int
    start: int  # first n >= horizon in this residue
    status: list  # per coordinate: (BOUNDED, limit) or (UNBOUNDED, None)
    certificates: list  # per coordinate: (n1, n2, v1, v2)


@dataclass
class ShadowAnalysis:
    phi: tuple
    x0: tuple
    classes: VertexClass
    period: int
    horizon: int
    residues: list
    _cache: dict = field(default_factory=dict, repr=False)

    def nu(self, n: int) -> tuple:
        orbit = self._cache.setdefault("orbit", [tuple(int(x) for x in self.x0)])
        if "rows" not in self._cache:
            # sparse integer rows; the carrier can have thousands of elements
            self._cache["rows"] = [[(j, int(v)) for j, v in enumerate(r) if v] for r in self.phi]
        rows = self._cache["rows"]
        while len(orbit) <= n:
            x = orbit[-1]
            orbit.append(tuple(sum(v * x[j] for j, v in r) for r in rows))
        return orbit[n]

    def limits(self, r: int) -> list:
        return [lim for _, lim in self.residues[r].status]


def unbounded_components(phi, x0) -> ShadowAnalysis:
    """Per residue class modulo N, each coordinate's supremum past the horizon.

    Unbounded coordinates are read off the growth structure of ``phi**N``;
    bounded ones form a closed subsystem whose values are iterated until
    they repeat, which for a nondecreasing sequence fixes the limit.
    """
    m = _int_matrix(phi)
    n = len(m)
    if n > MAX_CARRIER:
        raise Refusal(f"carrier of size {n} exceeds {MAX_CARRIER}")
    edges = gamma_edges(phi)
    start = _support(x0)
    classes = classify_vertices(n, edges, list(start))
    period = cycle_period(n, edges, classes)
    horizon = max(n, 1)
    phi_t = la.matrix(m)
    big = [[int(x) for x in row] for row in la.mat_pow(phi_t, period)]
    an = ShadowAnalysis(phi_t, tuple(int(x) for x in x0), classes, period, horizon, [])
    for r in range(period):
        first = horizon + (r - horizon) % period
        y = an.nu(first)
        level = _growth_levels(big, _support(y))
        unb = [lv >= 2 for lv in level]
        cur = y
        certs: list = [None] * n
        k = 0
        while True:
            nxt = tuple(sum(big[i][j] * cur[j] for j in range(n)) for i in range(n))
            k += 1
            if any(nxt[i] < cur[i] for i in range(n)):
                raise AssertionError("residue sequence decreased past the horizon")
            for i in range(n):
                if unb[i] and certs[i] is None and nxt[i] > cur[i]:
                    certs[i] = (first + (k - 1) * period, first + k * period, cur[i], nxt[i])
            settled = all(nxt[i] == cur[i] for i in range(n) if not unb[i])
            certified = all(certs[i] is not None for i in range(n) if unb[i])
            cur = nxt
            if settled and certified:
                break
            if k > MAX_ITER:
                raise Refusal("limit iteration did not settle")
        status = []
        for i in range(n):
            if unb[i]:
                status.append((UNBOUNDED, None))
            else:
                status.append((BOUNDED, cur[i]))
                certs[i] = (first + (k - 1) * period, first + k * period, cur[i], cur[i])
        an.residues.append(ResidueClass(r, first, status, certs))
    return an


def down_boxes(an: ShadowAnalysis, min_power: int = 1) -> list[tuple]:
    """Boxes whose union is the down-shadow of ``{phi**n x0 : n >= min_power}``.

    Entries are upper bounds with None for an unbounded coordinate.
    """
    boxes = [an.nu(k) for k in range(min_power, an.horizon)]
    for r in range(an.period):
        if an.residues[r].start >= min_power:
            boxes.append(tuple(an.limits(r)))
        else:
            raise ValueError("min_power beyond the horizon is not supported")
    return _dedupe_boxes(boxes)


def _dedupe_boxes(boxes) -> list[tuple]:
    def le(a, b):
        return all(y is None or (x is not None and x <= y) for x, y in zip(a, b))

    uniq = list(dict.fromkeys(boxes))
    return [b for i, b in enumerate(uniq) if not any(j != i and le(b, c) and (b != c) for j, c in enumerate(uniq))]


def up_corners(an: ShadowAnalysis, min_power: int = 1) -> list[tuple[int, tuple]]:
    """(n, corner) pairs covering the up-shadow with support restriction.

    A point qualifies for n when it is ``>= phi**n x0`` and has support
    inside that of ``phi**n x0``.  Beyond T the supports repeat with period
    P and values grow with period N, so n < T + lcm(N, P) suffices.
    """
    edges = gamma_edges(an.phi)
    n = len(an.x0)
    succ: dict = {}
    for a, b, _ in edges:
        succ.setdefault(a, set()).add(b)
    _, pre, per = eventually_periodic(
        lambda s: frozenset(y for x in s for y in succ.get(x, ())), _support(an.x0)
    )
    t = max(an.horizon, pre, 1, min_power)
    span = lcm(an.period, per)
    cands = [(k, an.nu(k)) for k in range(min_power, t + span)]

    def covers(a, b):  # corner b makes corner a redundant
        return all(x >= y for x, y in zip(a, b)) and _support(a) <= _support(b)

    keep = []
    for i, (k, c) in enumerate(cands):
        if any(covers(c, d) and (c != d or j < i) for j, (_, d) in enumerate(cands) if j != i):
            continue
        keep.append((k, c))
    return keep


def minimal_walk_weights(n: int, edges, colors: int, a: int, b: int, cap: Sequence | None = None) -> list[tuple]:
    """Minimal color vectors of nonempty a -> b walks (componentwise order).

    With ``cap`` only walks whose weight stays ``<= cap`` are explored;
    coordinates capped by None are ignored and reported as 0.
    """
    labels: list[list[tuple]] = [[] for _ in range(n)]
    out: dict = {}
    for x, y, c in edges:
        out.setdefault(x, []).append((y, c))
    tracked = [cap is None or cap[i] is not None for i in range(colors)]

    def bump(w, c):
        if not tracked[c - 1]:
            return w
        w = w[: c - 1] + (w[c - 1] + 1,) + w[c:]
        if cap is not None and w[c - 1] > cap[c - 1]:
            return None
        return w

    queue = deque()
    for y, c in out.get(a, ()):
        w = bump((0,) * colors, c)
        if w is not None:
            queue.append((y, w))
    while queue:
        v, w = queue.popleft()
        if any(all(p <= q for p, q in zip(lab, w)) for lab in labels[v]):
            continue
        labels[v] = [lab for lab in labels[v] if not all(p <= q for p, q in zip(w, lab))] + [w]
        for y, c in out.get(v, ()):
            w2 = bump(w, c)
            if w2 is not None:
                queue.append((y, w2))
    return sorted(labels[b])


def up_reachable(n: int, edges, a: int, b: int, need: Sequence[int], allowed: set) -> bool:
    """Is there an a -> b walk over ``allowed`` colors using each color c
    at least ``need[c-1]`` times?

    Edges inside a strongly connected part can be repeated freely; edges
    between parts are used at most once along a chain of parts.
    """
    kept = [(x, y, c) for x, y, c in edges if c in allowed]
    if any(need[c - 1] > 0 for c in range(1, len(need) + 1) if c not in allowed):
        return False
    dg = _digraph(n, kept)
    comp_of = {}
    for i, comp in enumerate(nx.strongly_connected_components(dg)):
        for v in comp:
            comp_of[v] = i
    ncomp = len(set(comp_of.values()))
    free: dict = {}
    cross: dict = {}
    for x, y, c in kept:
        if comp_of[x] == comp_of[y]:
            free.setdefault(comp_of[x], set()).add(c)
        else:
            cross.setdefault(comp_of[x], []).append((comp_of[y], c))

    def enter(comp, d):
        f = free.get(comp, set())
        return tuple(0 if (i + 1) in f else min(x, ncomp) for i, x in enumerate(d))

    target = comp_of[b]
    start = (comp_of[a], enter(comp_of[a], need))
    seen = {start}
    stack = [start]
    while stack:
        comp, d = stack.pop()
        if comp == target and not any(d):
            return True
        for nxt, c in cross.get(comp, ()):
            d2 = list(d)
            d2[c - 1] = max(0, d2[c - 1] - 1)
            st = (nxt, enter(nxt, d2))
            if st not in seen:
                seen.add(st)
                stack.append(st)
    return False


@dataclass
class Decision:
    verdict: str
    kind: str
    instances: list
    analysis: ShadowAnalysis | None = None
    hit: tuple | None = None
    witness: str | None = None
    trace: list = field(default_factory=list)

    def __str__(self) -> str:
        lines = [f"decision {self.kind}", f"verdict {self.verdict}", f"instances {len(self.instances)}"]
        for i, inst in enumerate(self.instances):
            lines.append(f"instance {i} accept {inst.accept_state} target {' '.join(map(str, inst.target))}")
        if self.analysis is not None:
            an = self.analysis
            lines.append(f"period {an.period} horizon {an.horizon}")
            lines.append("classes V1 " + " ".join(map(str, sorted(an.classes.v1))))
            lines.append("classes V2 " + " ".join(map(str, sorted(an.classes.v2))))
            lines.append("classes V3 " + " ".join(map(str, sorted(an.classes.v3))))
            for rc in an.residues:
                cells = ["inf" if s == UNBOUNDED else str(v) for s, v in rc.status]
                lines.append(f"residue {rc.residue} from {rc.start} sup " + " ".join(cells))
        if self.hit is not None:
            lines.append("hit " + " ".join(map(str, self.hit)))
        if self.witness is not None:
            lines.append(f"witness {self.witness}")
        lines += [f"trace {t}" for t in self.trace]
        return "\n".join(lines) + "\n"


def _analysis(inst: WwhpInstance) -> ShadowAnalysis:
    return unbounded_components(inst.phi, inst.x0)


def decide_downhit(inst: WwhpInstance, an: ShadowAnalysis | None = None) -> tuple[bool, tuple | None, list]:
    """Is some nonempty walk weight ``<= phi**n x0`` for an n >= min_power?"""
    an = an or _analysis(inst)
    g = inst.graph
    boxes = down_boxes(an, inst.min_power)
    trace = [f"boxes {len(boxes)}"]
    for box in boxes:
        mins = minimal_walk_weights(g.n, g.edges, g.colors, g.a, g.b, cap=box)
        if mins:
            return True, (box, mins[0]), trace
    trace.append("no nonempty walk weight fits any shadow box")
    return False, None, trace


def decide_uphit(inst: WwhpInstance, an: ShadowAnalysis | None = None) -> tuple[bool, tuple | None, list]:
    """Is some walk weight ``>= phi**n x0`` with support inside its support?"""
    an = an or _analysis(inst)
    g = inst.graph
    corners = up_corners(an, inst.min_power)
    trace = [f"corners {len(corners)}"]
    for k, c in corners:
        allowed = {i + 1 for i, x in enumerate(c) if x}
        if up_reachable(g.n, g.edges, g.a, g.b, c, allowed):
            return True, (k, c), trace
    trace.append("no walk dominates any corner")
    return False, None, trace


def _decide(a: Dfa, kind: str, witness_rank: int) -> Decision:
    if kind == "inj":
        insts, step, mode = inj_to_downhit(a), decide_downhit, "I"
    else:
        insts, step, mode = sur_to_uphit(a), decide_uphit, "S"
    if not insts:
        return Decision("no", kind, [], trace=["no accepting state is reachable after '#'"])
    an = _analysis(insts[0])
    trace = []
    for i, inst in enumerate(insts):
        ok, hit, t = step(inst, an)
        trace += [f"instance {i}: {x}" for x in t]
        if ok:
            if kind == "inj":
                box, w = hit
                trace.append("box " + " ".join("inf" if x is None else str(x) for x in box))
            else:
                rank, w = hit
                trace.append(f"corner at n={rank}")
            wit = brute_realizability(a, mode, witness_rank, slack=4).word if witness_rank else None
            return Decision("yes", kind, insts, an, tuple(w), wit, trace)
    return Decision("no", kind, insts, an, trace=trace)


def decide_injective(a: Dfa, witness_rank: int = 2) -> Decision:
    return _decide(a, "inj", witness_rank)


def decide_surjective(a: Dfa, witness_rank: int = 2) -> Decision:
    return _decide(a, "sur", witness_rank)


def shadow_certificate_check(an: ShadowAnalysis, extra_periods: int = 3) -> bool:
    """Direct check of ``nu_{n+N} >= nu_n`` for horizon < n <= horizon + k N."""
    for k in range(an.horizon + 1, an.horizon + extra_periods * an.period + 1):
        a, b = an.nu(k), an.nu(k + an.period)
        if any(y < x for x, y in zip(a, b)):
            return False
    return True


def system_analysis(a: Dfa) -> ShadowAnalysis:
    s = phi_system(a)
    return unbounded_components(s.phi, s.x0)
