import random

from orbitreg.filters import brute_realizability, in_injective, in_surjective
from orbitreg.shadow import (
    classify_vertices,
    cycle_period,
    decide_injective,
    decide_surjective,
    down_boxes,
    gamma_edges,
    minimal_walk_weights,
    positivity_set,
    shadow_certificate_check,
    shortest_cycle,
    system_analysis,
    unbounded_components,
)

from conftest import table


def test_classify_vertices():
    # 0 -> 1 (loop at 1) -> 2, and 3 unreachable with a loop
    edges = [(0, 1), (1, 1), (1, 2), (3, 3)]
    c = classify_vertices(4, edges, 0)
    assert c.v1 == {1} and c.v2 == {2} and c.v3 == {0, 3}
    assert shortest_cycle(4, edges, 1) == 1 and shortest_cycle(4, edges, 0) is None
    assert cycle_period(4, edges, c) == 1


def test_positivity_set():
    edges = [(0, 1), (1, 2), (2, 0)]
    assert positivity_set(3, edges, 0, 2).members(10) == [2, 5, 8]
    assert positivity_set(3, [(0, 1)], 0, 1).members(5) == [1]


def test_unbounded_components():
    an = unbounded_components(((1, 0), (1, 1)), (1, 0))  # orbit (1, n)
    assert an.period == 1
    assert an.limits(0) == [1, None]
    assert down_boxes(an) == [(1, None)]
    assert shadow_certificate_check(an)


def test_unbounded_components_period_two():
    an = unbounded_components(((0, 1), (1, 0)), (1, 0))  # swaps forever
    assert an.period == 2
    assert sorted(tuple(an.limits(r)) for r in range(2)) == [(0, 1), (1, 0)]


def test_gamma_edges():
    # edge j -> i carries phi[i][j]
    assert sorted(gamma_edges(((0, 2), (1, 0)))) == [(0, 1, 1), (1, 0, 2)]


def test_minimal_walk_weights():
    edges = ((0, 0, 1), (0, 1, 2), (1, 1, 1))
    assert minimal_walk_weights(2, edges, 2, 0, 1) == [(0, 1)]
    assert minimal_walk_weights(2, edges, 2, 0, 0) == [(1, 0)]
    assert minimal_walk_weights(2, edges, 2, 0, 1, cap=(None, 0)) == []


def test_golden_examples():
    everything = table(((0, 0, 0),), {0})
    assert decide_injective(everything).verdict == "yes"
    assert decide_surjective(everything).verdict == "yes"
    nothing = table(((0, 0, 0),), set())
    assert decide_injective(nothing).verdict == "no"
    assert decide_surjective(nothing).verdict == "no"
    no_ones = table(((0, 1, 0), (1, 1, 1)), {0})
    assert decide_surjective(no_ones).verdict == "no"
    d = decide_injective(no_ones)
    assert d.verdict == "yes" and in_injective(d.witness)


def test_against_bounded_search():
    rng = random.Random(5)
    for _ in range(80):
        rows = tuple(tuple(rng.randrange(3) for _ in range(3)) for _ in range(3))
        a = table(rows, {rng.randrange(3)})
        for mode, decide, member in (("I", decide_injective, in_injective), ("S", decide_surjective, in_surjective)):
            found = brute_realizability(a, mode, max_rank=3, slack=4).found
            d = decide(a, witness_rank=0)
            assert (d.verdict == "yes") == found, (rows, mode)


def test_system_analysis_certificate():
    a = table(((1, 0, 0), (1, 2, 1), (2, 2, 2)), {2})
    assert shadow_certificate_check(system_analysis(a))
