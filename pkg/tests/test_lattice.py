from fractions import Fraction
from itertools import combinations, product
from math import gcd

import pytest

from orbitreg import linalg as la
from orbitreg.digraphs import ColoredDigraph, walk_weights
from orbitreg.errors import Refusal
from orbitreg.lattice.cones import (
    LinearConstraint,
    cone_dualize,
    cone_member,
    decomposition_member,
    hilbert_basis,
    in_rational_cone,
    integer_feasibility,
    integral_caratheodory,
    parallelepiped_points,
)
from orbitreg.lattice.ihp import IhpInstance, bounded_php_oracle, ihp_to_php, orbit_hits_cone
from orbitreg.lattice.semilinear import (
    ProgressionSet,
    eventually_periodic,
    nonneg_combination,
    parikh,
    progression_set,
)
from orbitreg.lattice.snf import (
    complete_independent,
    extend_to_basis,
    invariant_factors,
    lattice_hitting_set,
    lattice_member,
    smith_normal_form,
)


def minors_gcd(m, k):
    rows, cols = len(m), len(m[0])
    g = 0
    for r in combinations(range(rows), k):
        for c in combinations(range(cols), k):
            g = gcd(g, int(la.det([[m[i][j] for j in c] for i in r])))
    return g


@pytest.mark.parametrize(
    "m",
    [
        ((2, 4, 4), (-6, 6, 12), (10, -4, -16)),
        ((2, 0), (0, 3)),
        ((1, 2, 3), (4, 5, 6)),
        ((0, 0), (0, 0)),
    ],
)
def test_snf_against_minors(m):
    u, d, v = smith_normal_form(m)
    assert la.mat_mul(la.mat_mul(u, d), v) == la.matrix(m)
    assert abs(la.det(u)) == 1 and abs(la.det(v)) == 1
    facs = invariant_factors(m)
    prod = 1
    for k, f in enumerate(facs, 1):
        prod *= f
        assert prod == minors_gcd(m, k)
    nz = [f for f in facs if f]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))


def test_snf_textbook_example():
    assert invariant_factors(((2, 4, 4), (-6, 6, 12), (10, -4, -16))) == [2, 6, 12]


def test_lattice_hitting_set_matches_orbit():
    phi = ((1, 1), (0, 1))
    x0 = (0, 1)
    gens = ((3, 0), (0, 1))
    h = lattice_hitting_set(phi, x0, (0, 0), gens)
    x = x0
    for n in range(30):
        assert h.contains(n) == lattice_member(x, (0, 0), gens)
        x = la.mat_vec(phi, x)
    assert h.members(9) == [0, 3, 6, 9]


def test_extend_to_basis():
    assert extend_to_basis([(1, 1, 0)], 3) == [0, 2]
    assert extend_to_basis([(2, 0)], 2) is None
    assert complete_independent([(2, 0)], 2) == [1]
    with pytest.raises(ValueError):
        extend_to_basis([(1, 1), (2, 2)], 2)


def test_parallelepiped_points_brute():
    gens = [(2, 1), (0, 3)]
    pts = set(parallelepiped_points(gens))
    brute = set()
    for x in product(range(0, 3), range(0, 5)):
        lam = la.solve(la.transpose(la.matrix(gens)), x)
        if lam is not None and all(0 <= c <= 1 for c in lam):
            brute.add(x)
    assert pts == brute
    half = set(parallelepiped_points(gens, half_open=True))
    assert len(half) == abs(la.det(gens)) == 6
    assert set(hilbert_basis(gens)) == pts


def test_caratheodory_matches_integer_cone():
    apex = (1, 0)
    gens = [(2, 0), (3, 0), (1, 1)]
    points, cones = integral_caratheodory(apex, gens)
    for x in product(range(-1, 12), range(-1, 6)):
        assert decomposition_member(x, points, cones) == cone_member(x, gens, apex)


def test_caratheodory_independent_shortcut():
    points, cones = integral_caratheodory((0, 0), [(1, 0), (0, 1)])
    assert points == [] and len(cones) == 1


def test_rational_cone():
    assert in_rational_cone((1, 1), [(2, 0), (0, 2)])
    assert not in_rational_cone((-1, 1), [(2, 0), (0, 2)])
    assert in_rational_cone((3, 3), [], (3, 3))


def test_cone_dualize():
    gens = [(1, 0, 0), (1, 1, 0)]
    cons = cone_dualize(gens)
    for lam in product(range(4), repeat=2):
        x = tuple(lam[0] * a + lam[1] * b for a, b in zip(*gens))
        assert all(c.holds(x) for c in cons)
    assert not all(c.holds((0, 1, 0)) for c in cons)
    assert not all(c.holds((1, 0, 1)) for c in cons)


def test_integer_feasibility():
    cons = [LinearConstraint((2, 2), "==", Fraction(3))]
    assert integer_feasibility(cons, 2, [0, 0], [5, 5]) is None
    cons = [LinearConstraint((1, 1), "==", Fraction(4)), LinearConstraint((1, -1), ">=", Fraction(2))]
    x = integer_feasibility(cons, 2, [0, 0], [None, None])
    assert x is not None and all(c.holds(x) for c in cons)
    with pytest.raises(Refusal):
        integer_feasibility([LinearConstraint((1, -1), "==", Fraction(0))], 2, [0, 0], [None, None])


def test_nonneg_combination():
    assert nonneg_combination((5,), [(2,), (3,)]) is not None
    assert nonneg_combination((1,), [(2,), (3,)]) is None


def test_progressions():
    states, pre, period = eventually_periodic(lambda x: (x * 2) % 12, 1)
    assert (pre, period) == (2, 2)
    ps = progression_set([s == 4 for s in states], pre, period)
    assert ps.members(10) == [2, 4, 6, 8, 10]
    assert ProgressionSet(frozenset(), ()).empty


def test_parikh_matches_walk_weights():
    edges = ((0, 1, 1), (1, 1, 2), (1, 0, 1), (1, 2, 2), (2, 2, 1))
    g = ColoredDigraph(3, edges, 2, 0, 2)
    sl = parikh(g)
    reach = walk_weights(g, 0, 2, 9)
    for x in product(range(7), repeat=2):
        if sum(x) <= 9:
            assert sl.contains(x) == (x in reach)


def test_ihp_to_php_against_scan():
    phi = ((1, 1), (0, 1))
    cases = [
        IhpInstance(phi, (0, 1), (4, 1), ((3, 0),)),
        IhpInstance(phi, (0, 1), (2, 1), ((4, 0),)),
        IhpInstance(phi, (0, 2), (1, 2), ((2, 0), (3, 0))),
        IhpInstance(((2, 0), (0, 1)), (1, 1), (3, 1), ((1, 0),), 1),
    ]
    for inst in cases:
        ans = ihp_to_php(inst, bounded_php_oracle(40))
        ref = orbit_hits_cone(inst, 40)
        if ref is None:
            assert ans.verdict != "yes"
        else:
            assert ans.verdict == "yes" and ans.hit == ref
