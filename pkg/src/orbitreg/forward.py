"""Forward pipeline: recurrences and orbits to automata over {0, 1, #}.

The chain is LRS -> weighted digraph -> fan-out-2 digraph with sign
tracking -> automata pair (A, B) with ``x_n = s_{ln}(A) - s_{ln}(B)`` ->
block automata that certify equalities or strict inequalities between the
two counts on permutation words.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import product
from math import ceil, log2
from typing import Sequence

from . import linalg as la
from .automata import AB, BA, SIM, Dfa, all_words, block_class, build_dfa
from .digraphs import counting_threads, lrs_digraph_weights
from .errors import Refusal
from .lrs import Affine, Lrs, lrs_from_orbit, scale_to_integer

log = logging.getLogger(__name__)

BINARY = ("0", "1")
BLOCK_ALPHABET = ("0", "1", "#")
DEFAULT_BUDGET = 1 << 16


@dataclass(frozen=True)
class AutomataPair:
    a: Dfa
    b: Dfa
    ell: int
    m_bits: int = 0
    k_depth: int = 0
    vertices: int = 0


def _bits(x: int) -> int:
    return abs(int(x)).bit_length()


def pair_parameters(s: Lrs) -> tuple[int, int]:
    """Smallest (M, k) with M > log2 max|p_i|,|q_i| and 2**k > 2*M*d."""
    p, q = lrs_digraph_weights(s)
    m = max(1, max(_bits(v) for v in p + q))
    k = (2 * m * s.degree).bit_length()
    return m, k


class _FanOutGraph:
    """Digraph with ordered out-edges; each edge carries a sign of +1 or -1."""

    def __init__(self):
        self.out: list[list[tuple[int, int]]] = []

    def vertex(self) -> int:
        self.out.append([])
        return len(self.out) - 1

    def edge(self, a: int, b: int, sign: int = 1) -> None:
        self.out[a].append((b, sign))

    def path(self, a: int, b: int, length: int) -> None:
        cur = a
        for _ in range(length - 1):
            nxt = self.vertex()
            self.edge(cur, nxt)
            cur = nxt
        self.edge(cur, b)


def build_sign_graph(s: Lrs, m_bits: int, k_depth: int) -> tuple[_FanOutGraph, int, int]:
    """Fan-out-2 digraph G whose signed length-(M+k)n walk count is ``x_n``.

    Returns (graph, s, f).  Vertex 2 is the sink u.
    """
    p, q = lrs_digraph_weights(s)
    ell = m_bits + k_depth
    g = _FanOutGraph()
    vs, vf, u = g.vertex(), g.vertex(), g.vertex()
    # pending first edges of threads that leave s or f: (root, target, sign)
    rooted: dict[int, list[tuple[int, int]]] = {vs: [], vf: []}

    def paste(x: int, y: int, weight: int) -> None:
        if weight == 0:
            return
        sign = 1 if weight > 0 else -1
        for j in counting_threads(abs(weight), m_bits):
            chain = [x] + [g.vertex() for _ in range(m_bits - 1)] + [y]
            for e, (a, b) in enumerate(zip(chain, chain[1:])):
                copies = 2 if e < j else 1
                for _ in range(copies):
                    if e == 0:
                        rooted[x].append((b, sign))
                    else:
                        g.edge(a, b)

    for i in range(1, s.degree + 1):
        for start, weight in ((vs, p[i - 1]), (vf, q[i - 1])):
            inner = [g.vertex() for _ in range(i - 1)]
            chain = [start] + inner + [vf]
            paste(chain[0], chain[1], weight)
            for a, b in zip(chain[1:], chain[2:]):
                g.path(a, b, ell)

    for root, leaves in rooted.items():
        if len(leaves) > (1 << k_depth):
            raise ValueError(f"routing tree of depth {k_depth} too small for {len(leaves)} edges")
        # trie over the k-bit leaf indices; absent branches fall through to u
        nodes = {(): root}
        for t, (target, sign) in enumerate(leaves):
            key: tuple = ()
            for bit in format(t, f"0{k_depth}b"):
                child = key + (bit,)
                if child not in nodes:
                    nodes[child] = g.vertex()
                    g.edge(nodes[key], nodes[child])
                key = child
            g.edge(nodes[key], target, sign)

    for v in range(len(g.out)):
        if v == u:
            continue
        while len(g.out[v]) < 2:
            g.edge(v, u)
        if len(g.out[v]) > 2:
            raise AssertionError(f"vertex {v} has fan-out {len(g.out[v])}")
    g.edge(u, u)
    g.edge(u, u)
    return g, vs, vf


def lrs_to_automata_pair(s: Lrs, m_bits: int | None = None, k_depth: int | None = None) -> AutomataPair:
    """Automata A, B over {0,1} with ``x_n = s_{ln}(A) - s_{ln}(B)``, l = M + k."""
    if not s.is_integral:
        raise ValueError("integer LRS data required; scale first")
    m_min, k_min = pair_parameters(s)
    m_bits = m_min if m_bits is None else m_bits
    k_depth = k_min if k_depth is None else k_depth
    if m_bits < m_min or (1 << k_depth) < 2 * m_bits * s.degree:
        raise ValueError(f"parameters M={m_bits}, k={k_depth} too small (need M>={m_min})")
    g, vs, vf = build_sign_graph(s, m_bits, k_depth)

    def step(state, sym):
        sigma, v = state
        target, sign = g.out[v][int(sym)]
        return sigma * sign, target

    a = build_dfa(BINARY, (1, vs), step, lambda st: st == (1, vf))
    b = build_dfa(BINARY, (1, vs), step, lambda st: st == (-1, vf))
    return AutomataPair(a, b, m_bits + k_depth, m_bits, k_depth, len(g.out))


# Block-class automata C' over block classifications.  None means reject.
_EQ = {"q0": {AB: "pend", SIM: "q1"}, "pend": {BA: "q0"}, "q1": {SIM: "q1"}}
_LT = {"q0": {AB: "pend", BA: "q1"}, "pend": {BA: "q0"}, "q1": {SIM: "q1", BA: "q1"}}
_ANY = {"q0": {AB: "q0", BA: "q0", SIM: "q0"}}
PAIRING = {
    "=": (_EQ, frozenset({"q0", "q1"})),
    "<": (_LT, frozenset({"q1"})),
    "any": (_ANY, frozenset({"q0"})),
}


def normalize_relation(rel: str) -> str:
    r = rel.replace(" ", "")
    for suffix in ("0",):
        if r.endswith(suffix) and len(r) > 1:
            r = r[: -len(suffix)]
    r = {"==": "=", "=": "=", "<": "<", ">": ">", "<=": "<=", ">=": ">="}.get(r)
    if r is None:
        raise ValueError(f"unknown relation {rel!r}")
    return r


@dataclass(frozen=True)
class Constraint:
    """One block-level check: counts of ``pair`` compared with ``rel``."""

    pair: AutomataPair | None
    rel: str = "="  # '=', '<', '>' or 'any'

    def oriented(self) -> tuple[Dfa | None, Dfa | None, str]:
        if self.pair is None or self.rel == "any":
            return None, None, "any"
        if self.rel == ">":
            return self.pair.b, self.pair.a, "<"
        return self.pair.a, self.pair.b, self.rel


def pairing_step(rel: str, state: str | None, cls: str) -> str | None:
    if state is None:
        return None
    return PAIRING[rel][0][state].get(cls)


def build_combined_automaton(constraints: Sequence[Constraint], ell: int) -> Dfa:
    """Automaton over {0,1,#} checking all constraints at one block length.

    With m constraints and p = ceil(log2 m), blocks have rank p + ell*n.
    The first p symbols of a block select a constraint; selectors must be
    nondecreasing and each constraint sees the block suffixes with its own
    selector.  Missing selectors up to 2**p use an accept-all check.
    """
    m = len(constraints)
    if m == 0:
        raise ValueError("at least one constraint required")
    for c in constraints:
        if c.pair is not None and c.pair.ell != ell:
            raise ValueError(f"pair length {c.pair.ell} differs from common {ell}")
    p = (m - 1).bit_length()
    slots = [c.oriented() for c in constraints] + [(None, None, "any")] * ((1 << p) - m)
    last = len(slots)
    dead = ("dead",)

    def body(i: int, c: str):
        a, b, _ = slots[i - 1]
        qa = a.initial if a else 0
        qb = b.initial if b else 0
        return ("body", i, c, qa, qb, 0, False)

    def enter(i: int, c: str | None, bits: tuple):
        """Selector reading; resolves once p bits are known."""
        if c is None:
            return dead
        if len(bits) < p:
            return ("pre", i, c, bits)
        z = int("".join(bits), 2) if bits else 0
        if z == i - 1:
            return body(i, c)
        rel = slots[i - 1][2]
        if z == i and i < last and c in PAIRING[rel][1]:
            return body(i + 1, "q0")
        return dead

    def step(st, sym):
        kind = st[0]
        if kind == "dead":
            return dead
        if kind == "start":
            return enter(1, "q0", ()) if sym == "#" else dead
        if kind == "pre":
            _, i, c, bits = st
            return dead if sym == "#" else enter(i, c, bits + (sym,))
        _, i, c, qa, qb, mod, nonempty = st
        a, b, rel = slots[i - 1]
        if sym == "#":
            if not nonempty or mod:
                return dead
            cls = block_class(qa in a.accepting, qb in b.accepting) if a else SIM
            return enter(i, pairing_step(rel, c, cls), ())
        if a:
            qa, qb = a.step(qa, sym), b.step(qb, sym)
        return ("body", i, c, qa, qb, (mod + 1) % ell, True)

    def accepting(st):
        if st[0] == "pre":
            _, i, c, bits = st
        elif st[0] == "body" and p == 0 and not st[6]:
            _, i, c = st[:3]
            bits = ()
        else:
            return False
        return i == last and not bits and c in PAIRING[slots[i - 1][2]][1]

    return build_dfa(BLOCK_ALPHABET, ("start",), step, accepting)


def build_equality_automaton(pair: AutomataPair) -> Dfa:
    """Accepts a permutation word of rank ln iff s_{ln}(A) = s_{ln}(B)."""
    return build_combined_automaton([Constraint(pair, "=")], pair.ell)


def build_less_automaton(pair: AutomataPair) -> Dfa:
    """Accepts a permutation word of rank ln iff s_{ln}(A) < s_{ln}(B)."""
    return build_combined_automaton([Constraint(pair, "<")], pair.ell)


def serialize_blocks(blocks: Sequence[str]) -> str:
    return "#" + "#".join(blocks) + "#"


def _classified_blocks(a: Dfa | None, b: Dfa | None, length: int, budget: int) -> dict[str, list[str]]:
    if 2**length > budget:
        raise Refusal(f"2^{length} blocks exceed budget {budget}")
    out: dict[str, list[str]] = {AB: [], BA: [], SIM: []}
    for w in all_words(BINARY, length):
        word = "".join(w)
        cls = block_class(a.accepts(word), b.accepts(word)) if a else SIM
        out[cls].append(word)
    return out


def arrange_blocks(classes: dict[str, list[str]], rel: str) -> list[str] | None:
    """Canonical accepted ordering of all blocks for one constraint, or None."""
    ab, ba, sim = sorted(classes[AB]), sorted(classes[BA]), sorted(classes[SIM])
    if rel == "any":
        return sorted(ab + ba + sim)
    if rel == "=":
        if len(ab) != len(ba):
            return None
        return [w for pair in zip(ab, ba) for w in pair] + sim
    if rel == "<":
        if len(ab) >= len(ba):
            return None
        head = [w for pair in zip(ab, ba) for w in pair] + [ba[len(ab)]]
        return head + sorted(ba[len(ab) + 1 :] + sim)
    raise ValueError(rel)


def construct_pairing_witness(pair: AutomataPair, n: int, rel: str = "=", budget: int = DEFAULT_BUDGET) -> str | None:
    """Permutation word of rank l*n in canonical order, or None if counts forbid it."""
    c = Constraint(pair, rel)
    a, b, r = c.oriented()
    blocks = arrange_blocks(_classified_blocks(a, b, pair.ell * n, budget), r)
    return None if blocks is None else serialize_blocks(blocks)


def combined_witness(constraints: Sequence[Constraint], ell: int, n: int, budget: int = DEFAULT_BUDGET) -> str | None:
    m = len(constraints)
    p = (m - 1).bit_length()
    slots = [c.oriented() for c in constraints] + [(None, None, "any")] * ((1 << p) - m)
    blocks: list[str] = []
    for i, (a, b, rel) in enumerate(slots):
        arranged = arrange_blocks(_classified_blocks(a, b, ell * n, budget), rel)
        if arranged is None:
            return None
        prefix = format(i, f"0{p}b") if p else ""
        blocks += [prefix + w for w in arranged]
    return serialize_blocks(blocks)


@dataclass(frozen=True)
class ChpInstance:
    phi: tuple
    x0: tuple
    constraints: tuple  # (Affine, relation)

    def __post_init__(self):
        object.__setattr__(self, "phi", la.matrix(self.phi))
        object.__setattr__(self, "x0", la.vector(self.x0))
        cons = []
        for h, rel in self.constraints:
            h = h if isinstance(h, Affine) else Affine(tuple(h))
            if h.dim != len(self.x0):
                raise ValueError("constraint dimension mismatch")
            cons.append((h, normalize_relation(rel)))
        object.__setattr__(self, "constraints", tuple(cons))
        n = len(self.phi)
        if any(len(row) != n for row in self.phi) or len(self.x0) != n:
            raise ValueError("matrix must be square and match the start vector")

    def holds_at(self, n: int) -> bool:
        x = la.mat_vec(la.mat_pow(self.phi, n), self.x0)
        return all(relation_holds(h(x), rel) for h, rel in self.constraints)


def relation_holds(value, rel: str) -> bool:
    return {
        "=": value == 0,
        "<": value < 0,
        ">": value > 0,
        "<=": value <= 0,
        ">=": value >= 0,
    }[rel]


@dataclass
class PbReduction:
    dfa: Dfa
    constraints: list
    sequences: list
    ell: int
    m_bits: int
    k_depth: int
    prefix_bits: int
    manifest: dict = field(default_factory=dict)

    def witness(self, n: int, budget: int = DEFAULT_BUDGET) -> str | None:
        return combined_witness(self.constraints, self.ell, n, budget)


def chp_to_pb(inst: ChpInstance) -> PbReduction:
    """Automaton accepting a permutation word iff the orbit meets the chamber at some n >= 1."""
    seqs = []
    for h, rel in inst.constraints:
        if rel in ("<=", ">="):
            raise ValueError("split non-strict relations into '=' and strict parts first")
        y, _ = scale_to_integer(lrs_from_orbit(inst.phi, inst.x0, h, start=1))
        seqs.append((y, rel))
    data_bits = 1
    m_need = 1
    for y, _ in seqs:
        p, q = lrs_digraph_weights(y)
        data_bits = max([data_bits] + [_bits(v) for v in y.coeffs + y.init + tuple(p) + tuple(q)])
        m_need = max(m_need, pair_parameters(y)[0])
    k_need = max((2 * m_need * y.degree).bit_length() for y, _ in seqs)
    ell = max(1 + 3 * data_bits, m_need + k_need)
    k_depth = ell - m_need
    constraints = [Constraint(lrs_to_automata_pair(y, m_need, k_depth), rel) for y, rel in seqs]
    dfa = build_combined_automaton(constraints, ell)
    p_bits = (len(constraints) - 1).bit_length()
    manifest = {
        "ell": ell,
        "M": m_need,
        "k": k_depth,
        "prefix_bits": p_bits,
        "states": dfa.states,
        "constraints": [
            {"relation": rel, "degree": y.degree, "a_states": c.pair.a.states, "graph_vertices": c.pair.vertices}
            for (y, rel), c in zip(seqs, constraints)
        ],
    }
    return PbReduction(dfa, constraints, [y for y, _ in seqs], ell, m_need, k_depth, p_bits, manifest)


# ---------------------------------------------------------------------------
# Zero in the upper right corner, as block languages over track symbols.


def track_symbol(j: int, i: int, k: int, bit: int) -> str:
    return f"{j}|{i}.{k}.{bit}"


def parse_track_symbol(sym: str) -> tuple[int, int, int, int]:
    left, right = sym.split("|")
    i, k, bit = right.split(".")
    return int(left), int(i), int(k), int(bit)


@dataclass(frozen=True)
class ZurcLayout:
    matrices: tuple
    n: int
    d: int
    group: int  # symbols per factor, max(1, ceil(log2 M))

    @property
    def alphabet(self) -> tuple[str, ...]:
        return tuple(
            track_symbol(j, i, k, b)
            for j in range(1, self.n + 1)
            for i in range(1, self.d + 1)
            for k in range(1, self.d + 1)
            for b in (0, 1)
        )

    def entry(self, j: int, i: int, k: int) -> int:
        return self.matrices[j - 1][i - 1][k - 1]


def zurc_layout(matrices: Sequence) -> ZurcLayout:
    mats = tuple(tuple(tuple(int(x) for x in row) for row in m) for m in matrices)
    if not mats:
        raise ValueError("N must be positive")
    d = len(mats[0])
    if d < 1 or any(len(m) != d or any(len(r) != d for r in m) for m in mats):
        raise ValueError("matrices must all be D x D with D >= 1")
    big_m = max([abs(x) for m in mats for r in m for x in r] + [1])
    group = max(1, ceil(log2(big_m))) if big_m > 1 else 1
    return ZurcLayout(mats, len(mats), d, group)


def _tset_step(lay: ZurcLayout, start_i: int):
    """Transition of the factor-sequence checker; states carry the running sign."""
    dead = ("dead",)

    def step(st, sym):
        if st[0] == "dead":
            return dead
        j, i, k, bit = parse_track_symbol(sym)
        if st[0] in ("start", "end"):
            need = start_i if st[0] == "start" else st[1]
            sign = 1 if st[0] == "start" else st[2]
            if i != need:
                return dead
            st = ("grp", j, i, k, 0, 0, sign)
        _, gj, gi, gk, t, beta, sign = st
        if (j, i, k) != (gj, gi, gk):
            return dead
        t, beta = t + 1, 2 * beta + bit
        if t < lay.group:
            return ("grp", gj, gi, gk, t, beta, sign)
        entry = lay.entry(gj, gi, gk)
        if beta >= abs(entry):  # also rejects zero entries
            return dead
        return ("end", gk, sign * (1 if entry > 0 else -1))

    return step


def zurc_build_tsets(matrices: Sequence, i: int, k: int) -> tuple[Dfa, Dfa, Dfa]:
    """DFAs for T+_{ik}, T-_{ik} and the remaining words over track symbols."""
    lay = zurc_layout(matrices)
    if not (1 <= i <= lay.d and 1 <= k <= lay.d):
        raise ValueError("index out of range")
    step = _tset_step(lay, i)
    plus = build_dfa(lay.alphabet, ("start",), step, lambda st: st[:3] == ("end", k, 1))
    minus = build_dfa(lay.alphabet, ("start",), step, lambda st: st[:3] == ("end", k, -1))
    bad = build_dfa(lay.alphabet, ("start",), step, lambda st: st[:2] != ("end", k))
    return plus, minus, bad


def zurc_to_pepe(matrices: Sequence) -> Dfa:
    """Automaton C with L(C) meeting Per||P iff some product has a zero (1, D) entry.

    Blocks have length l*g (g = group size); on the first track each
    matrix index repeats g times.  Blocks are paired as T+ then T- and
    followed by the remaining blocks, as in the equality check.
    """
    lay = zurc_layout(matrices)
    tstep = _tset_step(lay, 1)
    dead = ("dead",)

    def classify(tst) -> str:
        if tst[0] == "end" and tst[1] == lay.d:
            return AB if tst[2] == 1 else BA
        return SIM

    def step(st, sym):
        if st[0] == "dead":
            return dead
        if st[0] == "start":
            return ("blk", "q0", ("start",), 0, 0) if sym == "#" else dead
        _, c, tst, t, cur_j = st
        if sym == "#":
            if t != 0 or tst == ("start",):
                return dead
            nc = pairing_step("=", c, classify(tst))
            return dead if nc is None else ("blk", nc, ("start",), 0, 0)
        j = parse_track_symbol(sym)[0]
        if t > 0 and j != cur_j:
            return dead
        return ("blk", c, tstep(tst, sym), (t + 1) % lay.group, j)

    def accepting(st):
        return st[0] == "blk" and st[2] == ("start",) and st[1] in PAIRING["="][1]

    return build_dfa(("#",) + lay.alphabet, ("start",), step, accepting)


def zurc_product(matrices: Sequence, seq: Sequence[int]) -> tuple:
    lay = zurc_layout(matrices)
    prod = la.identity(lay.d)
    for j in seq:
        prod = la.mat_mul(prod, lay.matrices[j - 1])
    return prod


def zurc_tset_counts(matrices: Sequence, seq: Sequence[int], i: int, k: int, budget: int = DEFAULT_BUDGET) -> tuple[int, int, int]:
    """(|T+|, |T-|, |T_bad|) among words whose first track is ``seq`` with each index repeated."""
    lay = zurc_layout(matrices)
    plus, minus, _ = zurc_build_tsets(matrices, i, k)
    length = len(seq) * lay.group
    second = [(i2, k2, b) for i2 in range(1, lay.d + 1) for k2 in range(1, lay.d + 1) for b in (0, 1)]
    if len(second) ** length > budget:
        raise Refusal(f"{len(second)}^{length} track words exceed budget {budget}")
    js = [j for j in seq for _ in range(lay.group)]
    counts = [0, 0, 0]
    for word in product(second, repeat=length):
        syms = [track_symbol(j, *x) for j, x in zip(js, word)]
        if plus.accepts(syms):
            counts[0] += 1
        elif minus.accepts(syms):
            counts[1] += 1
        else:
            counts[2] += 1
    return tuple(counts)


def zurc_witness(matrices: Sequence, seq: Sequence[int], budget: int = DEFAULT_BUDGET) -> list[list[str]] | None:
    """Track block word (list of symbol lists) certifying a zero (1, D) entry for ``seq``."""
    lay = zurc_layout(matrices)
    plus, minus, _ = zurc_build_tsets(matrices, 1, lay.d)
    length = len(seq) * lay.group
    second = [(i2, k2, b) for i2 in range(1, lay.d + 1) for k2 in range(1, lay.d + 1) for b in (0, 1)]
    if len(second) ** length > budget:
        raise Refusal(f"{len(second)}^{length} track words exceed budget {budget}")
    js = [j for j in seq for _ in range(lay.group)]
    groups: dict[str, list] = {AB: [], BA: [], SIM: []}
    for word in product(second, repeat=length):
        syms = [track_symbol(j, *x) for j, x in zip(js, word)]
        cls = AB if plus.accepts(syms) else BA if minus.accepts(syms) else SIM
        groups[cls].append(syms)
    if len(groups[AB]) != len(groups[BA]):
        return None
    return [w for pair in zip(groups[AB], groups[BA]) for w in pair] + groups[SIM]


def track_word(blocks: Sequence[Sequence[str]]) -> list[str]:
    out = ["#"]
    for blk in blocks:
        out += list(blk) + ["#"]
    return out
