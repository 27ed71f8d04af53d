"""Acceptance checks 1-12, shared by ``orbitreg verify`` and the test suite.

Every check compares a library result with an oracle written here from
scratch (plain recurrences, explicit enumeration, determinantal divisors),
so a bug has to appear twice to go unnoticed.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations, product
from math import gcd
from typing import Callable

from . import linalg as la
from .automata import AB, BA, SIM, Dfa, all_words, count_words
from .digraphs import build_counting_digraph, build_lrs_digraph, walk_weight_sum
from .filters import in_injective, in_surjective, parse_block_word
from .forward import (
    AutomataPair,
    build_equality_automaton,
    build_less_automaton,
    lrs_to_automata_pair,
    track_word,
    zurc_build_tsets,
    zurc_layout,
    zurc_product,
    zurc_tset_counts,
    zurc_to_pepe,
    zurc_witness,
)
from .lattice.cones import hilbert_basis, integral_caratheodory
from .lattice.snf import lattice_hitting_set, smith_normal_form
from .lrs import Lrs, scale_to_integer
from .monoid import nu_bruteforce, pb_to_wwhp, phi_system
from .shadow import decide_injective, decide_surjective

DEFAULT_SEED = 20240601
BLOCK = ("0", "1", "#")


@dataclass
class Result:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.number:2d} {self.name}: {self.detail} ({self.seconds:.2f}s)"


def recurrence(coeffs, init, count) -> list:
    """x_1..x_count by the defining recurrence, exact."""
    xs = [Fraction(v) for v in init][:count]
    d = len(coeffs)
    while len(xs) < count:
        xs.append(sum(Fraction(coeffs[i]) * xs[-1 - i] for i in range(d)))
    return xs


def random_lrs(rng: random.Random, max_degree: int, bound: int, rational: bool = False) -> Lrs:
    d = rng.randint(1, max_degree)

    def val():
        if rational:
            return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
        return rng.randint(-bound, bound)

    return Lrs([val() for _ in range(d)], [val() for _ in range(d)])


def random_dfa(rng: random.Random, states: int, alphabet=BLOCK) -> Dfa:
    trans = [[rng.randrange(states) for _ in alphabet] for _ in range(states)]
    acc = {q for q in range(states) if rng.random() < 0.5} or {rng.randrange(states)}
    return Dfa(alphabet, trans, 0, acc)


# 1 ------------------------------------------------------------------------


def check_counting_digraph(rng) -> tuple[bool, str]:
    g = build_counting_digraph(11, 4)
    out: dict = {}
    for a, b, w in g.edges:
        out.setdefault(a, []).append((b, w))

    def walks(v, k):
        if k == 0:
            return 1 if v == g.f else 0
        return sum(walks(b, k - 1) for b, _ in out.get(v, ()))

    n = walks(g.s, 4)
    weights = {w for _, _, w in g.edges}
    return n == 11 and weights == {1}, f"{n} walks of length 4 from s to f"


# 2 ------------------------------------------------------------------------


def check_scaling(rng) -> tuple[bool, str]:
    bad = 0
    for _ in range(100):
        s = random_lrs(rng, 3, 9, rational=True)
        y, big_n = scale_to_integer(s)
        xs = recurrence(s.coeffs, s.init, 15)
        ys = y.values(15)
        if not y.is_integral or any(big_n ** (n + 1) * xs[n - 1] != ys[n - 1] for n in range(1, 16)):
            bad += 1
    return bad == 0, f"100 sequences, {bad} mismatches"


# 3 ------------------------------------------------------------------------


def check_walk_sums(rng) -> tuple[bool, str]:
    bad = 0
    for _ in range(50):
        s = random_lrs(rng, 4, 3)
        g = build_lrs_digraph(s)
        xs = recurrence(s.coeffs, s.init, 8)
        bad += sum(walk_weight_sum(g, n) != xs[n - 1] for n in range(1, 9))
    return bad == 0, f"50 sequences x 8 indices, {bad} mismatches"


# 4 ------------------------------------------------------------------------


def check_automata_pairs(rng) -> tuple[bool, str]:
    bad = 0
    longest = 0
    for _ in range(25):
        s = random_lrs(rng, 3, 2)
        pair = lrs_to_automata_pair(s)
        ell = pair.ell
        xs = recurrence(s.coeffs, s.init, 4)
        for m in range(1, 4 * ell + 1):
            ca, cb = count_words(pair.a, m), count_words(pair.b, m)
            if m % ell:
                bad += (ca, cb) != (0, 0)
            else:
                bad += ca - cb != xs[m // ell - 1]
        longest = max(longest, 4 * ell)
    return bad == 0, f"25 sequences, word lengths up to {longest}, {bad} mismatches"


# 5 ------------------------------------------------------------------------


def _accepts_some_permutation(c: Dfa, blocks: list[str]) -> bool:
    for perm in permutations(blocks):
        if c.accepts("#" + "#".join(perm) + "#"):
            return True
    return False


def check_equality_automaton(rng) -> tuple[bool, str]:
    bad = cases = 0
    binary = ("0", "1")
    for ell in (1, 2, 3):
        for _ in range(4):
            a = random_dfa(rng, rng.randint(1, 3), binary)
            b = random_dfa(rng, rng.randint(1, 3), binary)
            pair = AutomataPair(a, b, ell)
            eq, lt = build_equality_automaton(pair), build_less_automaton(pair)
            for rank in range(1, 4):
                blocks = ["".join(w) for w in all_words(binary, rank)]
                n_ab = sum(a.accepts(w) and not b.accepts(w) for w in blocks)
                n_ba = sum(b.accepts(w) and not a.accepts(w) for w in blocks)
                ok_eq = rank % ell == 0 and n_ab == n_ba
                ok_lt = rank % ell == 0 and n_ab < n_ba
                cases += 1
                bad += _accepts_some_permutation(eq, blocks) != ok_eq
                bad += _accepts_some_permutation(lt, blocks) != ok_lt
    return bad == 0, f"{cases} (pair, rank) cases with exhaustive permutations, {bad} mismatches"


# 6 ------------------------------------------------------------------------


def check_phi_counts(rng) -> tuple[bool, str]:
    bad = 0
    dfas = [random_dfa(rng, rng.randint(1, 3)) for _ in range(30)]
    for a in dfas:
        system = phi_system(a)
        x = system.x0
        for n in range(9):
            got = {system.carrier[i]: v for i, v in enumerate(x) if v}
            if got != nu_bruteforce(a, n) or sum(x) != 2**n:
                bad += 1
            x = la.mat_vec(system.phi, x)
    return bad == 0, f"30 automata x n <= 8, {bad} mismatches"


# 7 ------------------------------------------------------------------------


def _permutation_word_exists(a: Dfa, rank: int) -> bool:
    """Subset dynamic programme over (state, blocks used): exhaustive."""
    blocks = ["".join(w) + "#" for w in all_words(("0", "1"), rank)]
    full = (1 << len(blocks)) - 1
    start = a.step(a.initial, "#")
    layer = {(start, 0)}
    seen = set(layer)
    while layer:
        nxt = set()
        for q, used in layer:
            for i, blk in enumerate(blocks):
                if not used >> i & 1:
                    st = (a.read(q, blk), used | 1 << i)
                    if st not in seen:
                        seen.add(st)
                        nxt.add(st)
        layer = nxt
    return any(used == full and q in a.accepting for q, used in seen)


def _exact_walk(g, target: tuple) -> bool:
    out: dict = {}
    for x, y, c in g.edges:
        out.setdefault(x, []).append((y, c))
    memo: dict = {}

    def go(v, rest):
        if not any(rest):
            return v == g.b
        key = (v, rest)
        if key not in memo:
            memo[key] = False
            memo[key] = any(
                rest[c - 1] > 0 and go(y, rest[: c - 1] + (rest[c - 1] - 1,) + rest[c:]) for y, c in out.get(v, ())
            )
        return memo[key]

    return go(g.a, target)


def check_cayley_consistency(rng) -> tuple[bool, str]:
    bad = yes = 0
    for _ in range(50):
        a = random_dfa(rng, 2)
        insts = pb_to_wwhp(a)
        system = phi_system(a)
        for n in range(1, 4):
            nu = tuple(int(v) for v in la.mat_vec(la.mat_pow(system.phi, n), system.x0))
            walk = any(_exact_walk(i.graph, nu) for i in insts)
            brute = _permutation_word_exists(a, n)
            yes += brute
            bad += walk != brute
    return bad == 0, f"50 automata x ranks 1..3, {yes} realizable, {bad} mismatches"


# 8 ------------------------------------------------------------------------


def _minors_gcd(m, k) -> int:
    rows, cols = la.shape(m)
    g = 0
    for rs in combinations(range(rows), k):
        for cs in combinations(range(cols), k):
            g = gcd(g, int(la.det([[m[r][c] for c in cs] for r in rs])))
    return g


def check_snf(rng) -> tuple[bool, str]:
    bad = 0
    for _ in range(100):
        r, c = rng.randint(1, 4), rng.randint(1, 4)
        m = la.matrix([[rng.randint(-9, 9) for _ in range(c)] for _ in range(r)])
        u, d, v = smith_normal_form(m)
        diag = [d[i][i] for i in range(min(r, c))]
        ok = la.mat_mul(la.mat_mul(u, d), v) == m
        ok &= abs(la.det(u)) == 1 and abs(la.det(v)) == 1
        ok &= all(d[i][j] == 0 for i in range(r) for j in range(c) if i != j)
        ok &= all(x >= 0 for x in diag)
        ok &= all(diag[i + 1] % diag[i] == 0 if diag[i] else diag[i + 1] == 0 for i in range(len(diag) - 1))
        # determinantal divisors: d_1 ... d_k = gcd of k x k minors
        prod = 1
        for k in range(1, len(diag) + 1):
            prod *= diag[k - 1]
            ok &= prod == _minors_gcd(m, k)
        bad += not ok
    return bad == 0, f"100 matrices, {bad} failures"


# 9 ------------------------------------------------------------------------

SIMPLICIAL = [
    ((1, 0), (1, 2)),
    ((2, 1), (1, 3)),
    ((1, 0), (0, 1)),
    ((3, 1), (1, 2)),
    ((2, 0), (1, 3)),
    ((1, 1), (1, 4)),
    ((1, 0, 0), (0, 1, 0), (1, 1, 2)),
    ((1, 1, 0), (0, 1, 1), (1, 0, 1)),
    ((2, 1, 0), (0, 1, 2), (1, 0, 1)),
    ((1, 0, 0), (0, 2, 1), (0, 1, 3)),
]

CARATHEODORY = [
    ((2, 0), (1, 1), (0, 2)),
    ((1, 0), (1, 2)),
    ((2, 0), (0, 3)),
    ((1, 0), (2, 1), (1, 3)),
    ((3, 0), (0, 2), (1, 1)),
    ((2, 1), (1, 2)),
    ((1, 0), (0, 1), (1, 1)),
    ((3, 1), (1, 3), (2, 2)),
    ((2, 0, 0), (0, 2, 0), (1, 1, 1)),
    ((1, 1, 0), (0, 1, 1), (1, 0, 1), (2, 0, 0)),
]


def _box(dim: int, side: int):
    return product(range(side + 1), repeat=dim)


def _closure(apex, gens, side: int) -> set:
    """``apex + N(gens)`` inside [0, side]^dim; generators are nonnegative."""
    apex = tuple(apex)
    if any(x < 0 or x > side for x in apex):
        return set()
    seen = {apex}
    stack = [apex]
    while stack:
        x = stack.pop()
        for g in gens:
            y = tuple(a + b for a, b in zip(x, g))
            if y not in seen and all(c <= side for c in y):
                seen.add(y)
                stack.append(y)
    return seen


def _in_rational_cone(x, gens) -> bool:
    lam = la.solve(la.transpose(la.matrix(gens)), x)
    return lam is not None and all(c >= 0 for c in lam)


def check_hilbert_caratheodory(rng) -> tuple[bool, str]:
    bad = []
    for gens in SIMPLICIAL:
        dim = len(gens[0])
        hb = [h for h in hilbert_basis(gens) if any(h)]
        cone_pts = {x for x in _box(dim, 15) if _in_rational_cone(x, gens)}
        if _closure((0,) * dim, hb, 15) != cone_pts:
            bad.append(str(gens))
    for gens in CARATHEODORY:
        dim = len(gens[0])
        points, cones = integral_caratheodory((0,) * dim, gens)
        union = {tuple(p) for p in points if all(0 <= x <= 12 for x in p)}
        for c in cones:
            union |= _closure(c.apex, c.gens, 12)
        if union != _closure((0,) * dim, gens, 12):
            bad.append(str(gens))
    return not bad, f"{len(SIMPLICIAL)} Hilbert cones, {len(CARATHEODORY)} decompositions" + (
        "; failing " + ", ".join(bad) if bad else ""
    )


# 10 -----------------------------------------------------------------------


def check_lattice_hitting(rng) -> tuple[bool, str]:
    bad = 0
    for _ in range(20):
        s = rng.randint(1, 3)
        phi = la.matrix([[rng.randint(-2, 2) for _ in range(s)] for _ in range(s)])
        x0 = tuple(rng.randint(-3, 3) for _ in range(s))
        v0 = tuple(rng.randint(-3, 3) for _ in range(s))
        while True:
            gens = [tuple(rng.randint(-4, 4) for _ in range(s)) for _ in range(s)]
            if la.det(gens) != 0:
                break
        hits = lattice_hitting_set(phi, x0, v0, gens)
        x = la.vector(x0)
        for n in range(51):
            diff = [a - b for a, b in zip(x, v0)]
            coeffs = la.solve(la.transpose(la.matrix(gens)), diff)
            direct = all(Fraction(c).denominator == 1 for c in coeffs)
            bad += hits.contains(n) != direct
            x = la.mat_vec(phi, x)
    return bad == 0, f"20 instances x n <= 50, {bad} mismatches"


# 11 -----------------------------------------------------------------------


def _table(rows, accepting, initial=0) -> Dfa:
    return Dfa(BLOCK, rows, initial, accepting)


# (name, automaton, surjective answer, injective answer); symbol order 0 1 #
GOLDEN = [
    ("all words", _table(((0, 0, 0),), {0}), "yes", "yes"),
    ("blocks start with 0", _table(((3, 3, 1), (2, 3, 1), (2, 2, 1), (3, 3, 3)), {1}), "no", "yes"),
    ("empty word only", _table(((1, 1, 1), (1, 1, 1)), {0}), "no", "no"),
    ("empty language", _table(((0, 0, 0),), set()), "no", "no"),
    ("exactly one block", _table(((0, 0, 1), (1, 1, 2), (2, 2, 3), (3, 3, 3)), {2}), "no", "yes"),
    ("no letter 1", _table(((0, 1, 0), (1, 1, 1)), {0}), "no", "yes"),
    ("even number of blocks", _table(((0, 0, 1), (1, 1, 0)), {1}), "yes", "yes"),
    ("blocks of length 1", _table(((3, 3, 1), (2, 2, 3), (3, 3, 1), (3, 3, 3)), {1}), "yes", "yes"),
    ("blocks of length >= 2", _table(((1, 1, 3), (2, 2, 3), (2, 2, 0), (3, 3, 3)), {0}, initial=2), "yes", "yes"),
    ("contains 11", _table(((0, 1, 0), (0, 2, 0), (2, 2, 2)), {2}), "yes", "yes"),
    ("block count divisible by 3", _table(((0, 0, 1), (1, 1, 2), (2, 2, 0)), {1}), "yes", "yes"),
    # boundary states 3 -> 0; 0 -"0"-> 2; 2 -"1"-> 3 (accepting); so the last
    # two blocks are 0 and 1 after at least one more block: rank 1, repeats
    ("ends with blocks 0 1", _table(((1, 3, 3), (3, 3, 2), (3, 0, 2), (3, 3, 0)), {3}), "yes", "no"),
]


def _certified(a: Dfa, word: str | None, mode: str) -> bool:
    if word is None or not a.accepts(word):
        return False
    rank = parse_block_word(word).rank
    member = in_surjective(word) if mode == "S" else in_injective(word)
    return member and rank <= 2


def check_golden(rng) -> tuple[bool, str]:
    wrong = []
    for name, a, sur, inj in GOLDEN:
        ds, di = decide_surjective(a, witness_rank=2), decide_injective(a, witness_rank=2)
        ok = ds.verdict == sur and di.verdict == inj
        if ds.verdict == "yes":
            ok &= _certified(a, ds.witness, "S")
        if di.verdict == "yes":
            ok &= _certified(a, di.witness, "I")
        if not ok:
            wrong.append(name)
    return not wrong, f"{len(GOLDEN)} instances" + ("; wrong: " + ", ".join(wrong) if wrong else "")


# 12 -----------------------------------------------------------------------


def _pepe_accepts_arrangement(c: Dfa, blocks_by_class: dict) -> bool:
    """Exhaustive over block orders: C's state between blocks depends only on
    the blocks read so far, and blocks of one class act alike (checked)."""
    boundary = c.step(c.initial, "#")
    everything = [b for blocks in blocks_by_class.values() for b in blocks]
    states = {boundary}
    todo = [boundary]
    while todo:
        q = todo.pop()
        for b in everything:
            r = c.read(q, list(b) + ["#"])
            if r not in states:
                states.add(r)
                todo.append(r)
    reps = {}
    for cls, blocks in blocks_by_class.items():
        acts = {tuple((q, c.read(q, list(b) + ["#"])) for q in sorted(states)) for b in blocks}
        if len(acts) > 1:
            raise AssertionError(f"blocks of class {cls} act differently")
        if acts:
            reps[cls] = dict(acts.pop())
    counts = tuple(len(blocks_by_class[k]) for k in (AB, BA, SIM))
    layer = {(boundary, (0, 0, 0))}
    seen = set(layer)
    while layer:
        nxt = set()
        for q, used in layer:
            for i, cls in enumerate((AB, BA, SIM)):
                if used[i] < counts[i]:
                    u = used[:i] + (used[i] + 1,) + used[i + 1 :]
                    st = (reps[cls][q], u)
                    if st not in seen:
                        seen.add(st)
                        nxt.add(st)
        layer = nxt
    return any(u == counts and q in c.accepting for q, u in seen)


def check_zurc(rng) -> tuple[bool, str]:
    bad = zero = cases = 0
    instances = []
    for big_n in (1, 2):
        for _ in range(4):
            instances.append([[[rng.randint(-3, 3) for _ in range(2)] for _ in range(2)] for _ in range(big_n)])
    instances.append([[[1, 1], [0, 1]], [[1, -1], [0, 1]]])  # zero at length 2
    for mats in instances:
        lay = zurc_layout(mats)
        c = zurc_to_pepe(mats)
        plus, minus, _ = zurc_build_tsets(mats, 1, lay.d)
        for ell in (1, 2):
            for seq in product(range(1, lay.n + 1), repeat=ell):
                cases += 1
                prod = zurc_product(mats, seq)
                for i in range(1, 3):
                    for k in range(1, 3):
                        p, m, _ = zurc_tset_counts(mats, seq, i, k)
                        bad += p - m != prod[i - 1][k - 1]
                top = prod[0][lay.d - 1]
                zero += top == 0
                wit = zurc_witness(mats, seq)
                if top == 0:
                    bad += wit is None or not c.accepts(track_word(wit))
                else:
                    bad += wit is not None
                # every arrangement of the track blocks, grouped by class
                second = [(i2, k2, b) for i2 in (1, 2) for k2 in (1, 2) for b in (0, 1)]
                js = [j for j in seq for _ in range(lay.group)]
                groups: dict = {AB: [], BA: [], SIM: []}
                for word in product(second, repeat=len(js)):
                    syms = [f"{j}|{x[0]}.{x[1]}.{x[2]}" for j, x in zip(js, word)]
                    cls = AB if plus.accepts(syms) else BA if minus.accepts(syms) else SIM
                    groups[cls].append(syms)
                bad += _pepe_accepts_arrangement(c, groups) != (top == 0)
    return bad == 0, f"{len(instances)} matrix sets, {cases} sequences ({zero} zero), {bad} mismatches"


CHECKS: dict[int, tuple[str, Callable]] = {
    1: ("counting digraph 11 walks", check_counting_digraph),
    2: ("rational scaling", check_scaling),
    3: ("walk sums", check_walk_sums),
    4: ("automata pair counts", check_automata_pairs),
    5: ("equality automaton permutations", check_equality_automaton),
    6: ("transition monoid counts", check_phi_counts),
    7: ("Cayley walk consistency", check_cayley_consistency),
    8: ("Smith normal form", check_snf),
    9: ("Hilbert basis and decomposition", check_hilbert_caratheodory),
    10: ("lattice hitting sets", check_lattice_hitting),
    11: ("golden decider suite", check_golden),
    12: ("ZURC track construction", check_zurc),
}


def run_check(number: int, seed: int = DEFAULT_SEED) -> Result:
    name, fn = CHECKS[number]
    rng = random.Random(seed * 100 + number)
    t0 = time.perf_counter()
    try:
        passed, detail = fn(rng)
    except Exception as exc:  # a crash is a failure, reported like one
        passed, detail = False, f"{type(exc).__name__}: {exc}"
    return Result(number, name, passed, detail, time.perf_counter() - t0)


def run_all(seed: int = DEFAULT_SEED, numbers=None) -> list[Result]:
    return [run_check(k, seed) for k in (numbers or sorted(CHECKS))]
