"""Transition monoids, Cayley graphs and the linear map on map-indexed vectors.

A state map is a tuple ``m`` with ``m[q]`` the image of state q.  Composition
is right to left: ``compose(f, g)`` applies g first, then f.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

from . import linalg as la
from .automata import Dfa
from .digraphs import ColoredDigraph

StateMap = tuple


def compose(f: StateMap, g: StateMap) -> StateMap:
    """``f o g``: apply g, then f."""
    return tuple(f[x] for x in g)


def identity_map(n: int) -> StateMap:
    return tuple(range(n))


def transition_maps(a: Dfa) -> tuple[StateMap, StateMap, StateMap]:
    """(f_0, f_1, f_#) of an automaton over {0, 1, #}."""
    if sorted(a.alphabet) != sorted(("0", "1", "#")):
        raise ValueError(f"alphabet must be {{0,1,#}}, got {a.alphabet}")
    return tuple(
        tuple(a.trans[q][a.index(sym)] for q in range(a.states)) for sym in ("0", "1", "#")
    )


def word_map(a: Dfa, word) -> StateMap:
    """Map induced by reading ``word``; ``word_map('01') = f_1 o f_0``."""
    return tuple(a.read(q, word) for q in range(a.states))


@dataclass(frozen=True)
class MonoidPresentation:
    elements: tuple  # StateMaps in discovery order
    generators: tuple  # StateMaps (may repeat)
    identity: int | None

    def index(self, m: StateMap) -> int:
        return self.elements.index(m)


def closure(generators: Sequence[StateMap], with_identity: bool = True, size: int | None = None) -> MonoidPresentation:
    """Worklist closure under left multiplication by the generators."""
    gens = tuple(tuple(g) for g in generators)
    if size is None:
        if not gens:
            raise ValueError("state count unknown without generators")
        size = len(gens[0])
    ident = identity_map(size)
    seeds = [ident] if with_identity else list(dict.fromkeys(gens))
    seen = {m: i for i, m in enumerate(seeds)}
    order = list(seeds)
    queue = deque(order)
    while queue:
        x = queue.popleft()
        for g in gens:
            y = compose(g, x)
            if y not in seen:
                seen[y] = len(order)
                order.append(y)
                queue.append(y)
    return MonoidPresentation(tuple(order), gens, seen.get(ident))


def cayley_graph(m: MonoidPresentation, colors: Sequence[int] | None = None, ncolors: int | None = None) -> ColoredDigraph:
    """Edges ``h -> g_i o h`` for every element h and generator g_i.

    Edge colors default to ``i + 1``; a ``colors`` list overrides them.
    """
    cols = list(colors) if colors is not None else list(range(1, len(m.generators) + 1))
    pos = {e: i for i, e in enumerate(m.elements)}
    edges = []
    for h, elem in enumerate(m.elements):
        for g, c in zip(m.generators, cols):
            edges.append((h, pos[compose(g, elem)], c))
    start = m.identity if m.identity is not None else 0
    return ColoredDigraph(len(m.elements), tuple(edges), ncolors or max(cols, default=1), start, start)


@dataclass(frozen=True)
class PhiSystem:
    carrier: tuple  # StateMaps; carrier[0] is the identity
    phi: tuple
    x0: tuple

    def index(self, m: StateMap) -> int:
        return self.carrier.index(m)

    def nu(self, n: int) -> dict:
        """``nu_n(g)`` for every carrier element g with a positive count."""
        x = la.mat_vec(la.mat_pow(self.phi, n), self.x0)
        return {self.carrier[i]: v for i, v in enumerate(x) if v}

    @property
    def dim(self) -> int:
        return len(self.carrier)


def phi_system(a: Dfa) -> PhiSystem:
    """``Phi e(f) = e(f o f_0) + e(f o f_1)`` on the right closure of {id}."""
    f0, f1, _ = transition_maps(a)
    ident = identity_map(a.states)
    carrier = [ident]
    seen = {ident: 0}
    queue = deque([ident])
    while queue:
        f = queue.popleft()
        for g in (compose(f, f0), compose(f, f1)):
            if g not in seen:
                seen[g] = len(carrier)
                carrier.append(g)
                queue.append(g)
    n = len(carrier)
    cols = []
    for f in carrier:
        col = [0] * n
        col[seen[compose(f, f0)]] += 1
        col[seen[compose(f, f1)]] += 1
        cols.append(col)
    phi = la.transpose(tuple(tuple(c) for c in cols))
    x0 = tuple(1 if i == 0 else 0 for i in range(n))
    return PhiSystem(tuple(carrier), phi, x0)


def nu_bruteforce(a: Dfa, n: int) -> dict:
    from itertools import product

    counts: dict = {}
    for w in product("01", repeat=n):
        m = word_map(a, w)
        counts[m] = counts.get(m, 0) + 1
    return counts


@dataclass(frozen=True)
class WwhpInstance:
    """Walk-weight hitting: is there n >= min_power and an a -> b walk with
    weight vector related to ``phi**n x0`` by ``relation``?

    ``relation`` is 'eq' (equality), 'le' (w <= orbit point, nonzero walk)
    or 'ge' (w >= orbit point).
    """

    graph: ColoredDigraph
    phi: tuple
    x0: tuple
    relation: str = "eq"
    min_power: int = 1
    accept_state: int = 0
    target: StateMap = ()
    labels: tuple = ()


def _instances(a: Dfa, relation: str) -> list[WwhpInstance]:
    system = phi_system(a)
    f0, f1, fs = transition_maps(a)
    ident = system.carrier[0]
    # block maps are the maps of nonempty words; the identity only if induced
    block_maps = [g for g in system.carrier if g != ident or _id_from_words(system, f0, f1)]
    gens = [compose(fs, g) for g in block_maps]
    colors = [system.index(g) + 1 for g in block_maps]
    mon = closure(gens, with_identity=True, size=a.states)
    graph_base = cayley_graph(mon, colors, system.dim)
    q_after = fs[a.initial]
    out = []
    for qf in sorted(a.accepting):
        for hi, h in enumerate(mon.elements):
            if h[q_after] == qf:
                g = ColoredDigraph(graph_base.n, graph_base.edges, graph_base.colors, mon.identity, hi)
                out.append(WwhpInstance(g, system.phi, system.x0, relation, 1, qf, h, system.carrier))
    return out


def _id_from_words(system: PhiSystem, f0: StateMap, f1: StateMap) -> bool:
    """True when the identity map is induced by some nonempty binary word."""
    ident = system.carrier[0]
    return any(compose(g, f) == ident for g in system.carrier for f in (f0, f1))


def pb_to_wwhp(a: Dfa) -> list[WwhpInstance]:
    """One instance per accepting state and monoid element reaching it."""
    return _instances(a, "eq")


def inj_to_downhit(a: Dfa) -> list[WwhpInstance]:
    return _instances(a, "le")


def sur_to_uphit(a: Dfa) -> list[WwhpInstance]:
    return _instances(a, "ge")
