"""Orbit hitting of integer cones, reduced to rational-cone hitting.

Verdicts are the strings ``yes``, ``no`` and ``unknown``; an unknown always
carries the bound that was exhausted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from .. import linalg as la
from ..monoid import WwhpInstance
from .cones import TranslatedCone, in_rational_cone, integral_caratheodory
from .semilinear import parikh
from .snf import complete_independent, extend_to_basis, lattice_hitting_set

YES, NO, UNKNOWN = "yes", "no", "unknown"


@dataclass(frozen=True)
class IhpInstance:
    """Is ``phi**n x0`` in ``apex + N(gens)`` for some n >= min_power?"""

    phi: tuple
    x0: tuple
    apex: tuple
    gens: tuple = ()
    min_power: int = 0

    @property
    def cone(self) -> TranslatedCone:
        return TranslatedCone(tuple(self.apex), tuple(self.gens))


@dataclass
class Answer:
    verdict: str
    hit: int | None = None
    notes: list = field(default_factory=list)

    def __str__(self) -> str:
        head = self.verdict if self.hit is None else f"{self.verdict} n={self.hit}"
        return "\n".join([head] + [f"# {n}" for n in self.notes])


def wwhp_to_ihp(inst: WwhpInstance) -> list[IhpInstance]:
    """One cone-hitting instance per component of the walk-weight set."""
    if inst.relation != "eq":
        raise ValueError("only equality instances reduce to cone hitting; use shadow_decide for order relations")
    sl = parikh(inst.graph)
    return [
        IhpInstance(tuple(inst.phi), tuple(inst.x0), c.base, c.periods, inst.min_power)
        for c in sl.components
    ]


PhpOracle = Callable[[tuple, tuple, tuple, tuple], Answer]


def bounded_php_oracle(bound: int) -> PhpOracle:
    """Semi-decider for ``exists k >= 0: phi**k x in apex + cone(gens)``.

    Answers yes on a hit, no once the orbit repeats without a hit, and
    unknown when the bound runs out.
    """

    def oracle(phi, x, apex, gens) -> Answer:
        seen = set()
        cur = la.vector(x)
        for k in range(bound + 1):
            if in_rational_cone(cur, gens, apex):
                return Answer(YES, k)
            if cur in seen:
                return Answer(NO, notes=[f"orbit periodic after {k} steps"])
            seen.add(cur)
            cur = la.mat_vec(phi, cur)
        return Answer(UNKNOWN, notes=[f"no hit within bound {bound}"])

    return oracle


def _shift_progressions(h, min_power: int):
    finite = sorted(n for n in h.finite if n >= min_power)
    progs = []
    for n0, d in h.progressions:
        if n0 < min_power:
            n0 += -(-(min_power - n0) // d) * d
        progs.append((n0, d))
    return finite, progs


def simplicial_ihp_to_php(inst: IhpInstance, oracle: PhpOracle) -> Answer:
    """Decide hitting of a simplicial translate with a rational-cone oracle.

    ``x`` lies in ``apex + N(T)`` exactly when it lies in the rational cone
    and ``x - apex`` is in the lattice spanned by T together with unit
    vectors completing T to a basis of Q^s.  The lattice condition gives a
    finite set plus progressions (n0, N); each progression becomes one
    oracle query on ``phi**N`` started at ``phi**n0 x0``.
    """
    s = len(inst.x0)
    gens = [tuple(int(x) for x in g) for g in inst.gens]
    notes = []
    if gens and la.rank(gens) < len(gens):
        raise ValueError("generators must be independent")
    units = extend_to_basis(gens, s) if gens else list(range(s))
    if units is None:
        units = complete_independent(gens, s)
        notes.append(f"no unimodular unit completion; using independent units {units}")
    lattice = gens + [tuple(int(i == j) for j in range(s)) for i in units]
    h = lattice_hitting_set(inst.phi, inst.x0, inst.apex, lattice)
    finite, progs = _shift_progressions(h, inst.min_power)
    for n in finite:
        x = la.mat_vec(la.mat_pow(inst.phi, n), inst.x0)
        if in_rational_cone(x, gens, inst.apex):
            return Answer(YES, n, notes)
    pending = []
    for n0, d in progs:
        phi1 = la.mat_pow(inst.phi, d)
        x1 = la.mat_vec(la.mat_pow(inst.phi, n0), inst.x0)
        ans = oracle(phi1, x1, tuple(inst.apex), tuple(gens))
        if ans.verdict == YES:
            return Answer(YES, n0 + d * ans.hit, notes + ans.notes)
        if ans.verdict == UNKNOWN:
            pending.append(f"progression {n0} mod {d}: " + "; ".join(ans.notes))
    if pending:
        return Answer(UNKNOWN, None, notes + pending)
    return Answer(NO, None, notes)


def ihp_to_php(inst: IhpInstance, oracle: PhpOracle) -> Answer:
    """Split the integer cone into points and simplicial translates, then
    decide each piece; points are translates of the zero cone."""
    points, cones = integral_caratheodory(inst.apex, inst.gens)
    pieces = [IhpInstance(inst.phi, inst.x0, p, (), inst.min_power) for p in points]
    pieces += [IhpInstance(inst.phi, inst.x0, c.apex, c.gens, inst.min_power) for c in cones]
    unknown = []
    best = None
    for piece in pieces:
        ans = simplicial_ihp_to_php(piece, oracle)
        if ans.verdict == YES and (best is None or ans.hit < best.hit):
            best = ans
        elif ans.verdict == UNKNOWN:
            unknown += ans.notes
    if best is not None:
        return best
    notes = [f"{len(points)} points and {len(cones)} simplicial cones"]
    return Answer(UNKNOWN, None, notes + unknown) if unknown else Answer(NO, None, notes)


def orbit_hits_cone(inst: IhpInstance, bound: int) -> int | None:
    """Reference scan: least n <= bound with an exact integer-cone hit."""
    from .cones import cone_member

    cur = la.vector(inst.x0)
    for n in range(bound + 1):
        if n >= inst.min_power and cone_member(cur, inst.gens, inst.apex):
            return n
        cur = la.mat_vec(inst.phi, cur)
    return None


def decide_wwhp(inst: WwhpInstance, oracle: PhpOracle) -> Answer:
    answers = [ihp_to_php(i, oracle) for i in wwhp_to_ihp(inst)]
    hits = [a for a in answers if a.verdict == YES]
    if hits:
        return min(hits, key=lambda a: a.hit)
    if any(a.verdict == UNKNOWN for a in answers):
        return Answer(UNKNOWN, None, [n for a in answers for n in a.notes])
    return Answer(NO)
