"""Orbit hitting problems, their inter-reductions and bounded scans.

Orbit indices start at 0 (``phi**0 x0 = x0``) while LRS indices start at 1,
so a reduction to an LRS places orbit point n at LRS index n + 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

from . import linalg as la
from .errors import Refusal
from .lrs import (
    Affine,
    Lrs,
    as_affine,
    companion_system,
    constant,
    last_coordinate,
    lrs_from_orbit,
    lrs_interleave,
    shp_product_lrs,
)

MAX_PATTERN_FUNCS = 12


def sign(t) -> int:
    return (t > 0) - (t < 0)


@dataclass(frozen=True)
class Chamber:
    funcs: tuple  # Affine
    signs: tuple

    def __post_init__(self):
        object.__setattr__(self, "funcs", tuple(as_affine(h) for h in self.funcs))
        object.__setattr__(self, "signs", tuple(int(s) for s in self.signs))
        if len(self.funcs) != len(self.signs):
            raise ValueError("one sign per function")
        if any(s not in (-1, 0, 1) for s in self.signs):
            raise ValueError("signs must be -1, 0 or +1")
        if len({h.dim for h in self.funcs}) > 1:
            raise ValueError("functions of different dimensions")


def pattern(funcs: Sequence[Affine], x) -> tuple:
    return tuple(sign(h(x)) for h in funcs)


def chamber_member(c: Chamber, x) -> bool:
    return pattern(c.funcs, x) == c.signs


def chamber_constraints(c: Chamber) -> list[tuple[Affine, str]]:
    """The chamber as (function, relation) pairs with relations '=', '>', '<'."""
    rel = {0: "=", 1: ">", -1: "<"}
    return [(h, rel[s]) for h, s in zip(c.funcs, c.signs)]


@dataclass(frozen=True)
class ChpInstance:
    """Does the orbit meet the chamber?"""

    phi: tuple
    x0: tuple
    chamber: Chamber

    def target(self, x) -> bool:
        return chamber_member(self.chamber, x)


@dataclass(frozen=True)
class OdpInstance:
    """Does every orbit point lie in the union of the listed chambers?

    Scans search for an escaping point, which settles the answer as no.
    """

    phi: tuple
    x0: tuple
    funcs: tuple
    patterns: frozenset

    def target(self, x) -> bool:
        return pattern(self.funcs, x) not in self.patterns


@dataclass(frozen=True)
class ShpInstance:
    """Does the orbit meet the union of subspaces ``{h_jk = 0 for all k}``?"""

    phi: tuple
    x0: tuple
    families: tuple  # tuple of tuples of Affine

    def target(self, x) -> bool:
        return any(all(h(x) == 0 for h in fam) for fam in self.families)


@dataclass(frozen=True)
class PlpInstance:
    """Does the orbit stay inside ``{h >= 0 for inequalities, h = 0 for equalities}``?

    Scans search for an escaping point.
    """

    phi: tuple
    x0: tuple
    ineqs: tuple = ()
    eqs: tuple = ()

    def target(self, x) -> bool:
        return any(h(x) < 0 for h in self.ineqs) or any(h(x) != 0 for h in self.eqs)


@dataclass(frozen=True)
class ScanResult:
    hit: int | None
    bound: int

    @property
    def found(self) -> bool:
        return self.hit is not None

    def __str__(self) -> str:
        return f"hit {self.hit}" if self.found else f"no-hit-within {self.bound}"


def orbit_scan(inst, bound: int) -> ScanResult:
    """Least n <= bound whose orbit point satisfies the instance's target."""
    x = la.vector(inst.x0)
    for n in range(bound + 1):
        if inst.target(x):
            return ScanResult(n, bound)
        x = la.mat_vec(inst.phi, x)
    return ScanResult(None, bound)


def all_patterns(m: int) -> list[tuple]:
    if m > MAX_PATTERN_FUNCS:
        raise Refusal(f"pattern space 3^{m} exceeds the cap of {MAX_PATTERN_FUNCS} functions")
    return [tuple(p) for p in product((1, 0, -1), repeat=m)]


def complement_patterns(patterns, m: int) -> frozenset:
    return frozenset(all_patterns(m)) - frozenset(patterns)


def chp_to_odp(inst: ChpInstance) -> OdpInstance:
    """The chamber is missed forever iff the orbit stays in the complement."""
    funcs = inst.chamber.funcs
    return OdpInstance(inst.phi, inst.x0, funcs, complement_patterns([inst.chamber.signs], len(funcs)))


def odp_to_chp(inst: OdpInstance) -> list[ChpInstance]:
    """One chamber-hitting query per pattern outside the list."""
    missing = sorted(complement_patterns(inst.patterns, len(inst.funcs)), reverse=True)
    return [ChpInstance(inst.phi, inst.x0, Chamber(inst.funcs, p)) for p in missing]


def chp_odp_roundtrip(inst):
    if isinstance(inst, ChpInstance):
        return chp_to_odp(inst)
    if isinstance(inst, OdpInstance):
        return odp_to_chp(inst)
    raise TypeError("expected a ChpInstance or OdpInstance")


def skolem_to_chp(s: Lrs) -> ChpInstance:
    """Orbit point n is zero in the chamber exactly when ``x_{n+1} = 0``."""
    phi, x0 = companion_system(s)
    return ChpInstance(phi, x0, Chamber((last_coordinate(s.degree),), (0,)))


def nonneg_to_odp(s: Lrs) -> OdpInstance:
    phi, x0 = companion_system(s)
    return OdpInstance(phi, x0, (last_coordinate(s.degree),), frozenset({(0,), (1,)}))


def _orbit_lrs(phi, x0, h) -> Lrs:
    return lrs_from_orbit(phi, x0, h, start=0)


def shp_to_skolem(inst: ShpInstance) -> Lrs:
    """LRS whose element n + 1 vanishes iff orbit point n lies in a subspace."""
    fams = [[_orbit_lrs(inst.phi, inst.x0, h) for h in fam] for fam in inst.families]
    return shp_product_lrs(fams)


def affine_hull_contained(phi, x0, eqs: Sequence[Affine]) -> bool:
    """Whether the whole orbit satisfies the equalities.

    The affine hull of the orbit is spanned by its first d + 1 points, so
    checking those points is exact.
    """
    d = len(x0)
    x = la.vector(x0)
    for _ in range(d + 1):
        if any(h(x) != 0 for h in eqs):
            return False
        x = la.mat_vec(phi, x)
    return True


def plp_to_nonneg(inst: PlpInstance) -> Lrs:
    """LRS that is nonnegative everywhere iff the orbit stays in the polyhedron.

    Equalities are settled on the orbit's affine hull first; a violated
    equality yields the constant -1.  Inequality sequences are interleaved.
    """
    if inst.eqs and not affine_hull_contained(inst.phi, inst.x0, inst.eqs):
        return constant(-1)
    if not inst.ineqs:
        return constant(1)
    seqs = [_orbit_lrs(inst.phi, inst.x0, h) for h in inst.ineqs]
    return lrs_interleave(seqs)


def plp_from_chamber_union(phi, x0, funcs: Sequence[Affine], interior: Sequence[int]) -> PlpInstance:
    """Polyhedron from an interior sign pattern: negative signs are flipped,
    zero signs become equalities."""
    ineqs, eqs = [], []
    for h, s in zip(funcs, interior):
        h = as_affine(h)
        if s == 0:
            eqs.append(h)
        elif s > 0:
            ineqs.append(h)
        else:
            ineqs.append(Affine(tuple(-c for c in h.coeffs), -h.const))
    return PlpInstance(phi, x0, tuple(ineqs), tuple(eqs))

