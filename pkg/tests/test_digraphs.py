from itertools import product

from hypothesis import given, settings
from hypothesis import strategies as st

from orbitreg.digraphs import (
    ColoredDigraph,
    WeightedDigraph,
    build_counting_digraph,
    build_lrs_digraph,
    count_paths,
    lrs_digraph_weights,
    walk_weight_sum,
    walk_weights,
)
from orbitreg.lrs import Lrs, lrs_eval


def brute_walk_sum(g, n):
    """Explicit enumeration of every edge sequence of length n."""
    total = 0
    for seq in product(g.edges, repeat=n):
        if n and (seq[0][0] != g.s or seq[-1][1] != g.f):
            continue
        if any(a[1] != b[0] for a, b in zip(seq, seq[1:])):
            continue
        w = 1
        for e in seq:
            w *= e[2]
        total += w
    if n == 0:
        return int(g.s == g.f)
    return total


def test_fibonacci_walk_sums(fib):
    g = build_lrs_digraph(fib)
    assert [walk_weight_sum(g, n) for n in range(1, 7)] == [1, 1, 2, 3, 5, 8]
    assert all(brute_walk_sum(g, n) == lrs_eval(fib, n) for n in range(1, 6))


def test_degree_one_weights():
    s = Lrs((2,), (3,))
    p, q = lrs_digraph_weights(s)
    assert (p, q) == ([3], [2])
    g = build_lrs_digraph(s)
    assert [walk_weight_sum(g, n) for n in (1, 2, 3)] == [3, 6, 12]


def test_shift_sequence():
    s = Lrs((0, 1), (1, 0))
    p, q = lrs_digraph_weights(s)
    assert p[1] == 0
    g = build_lrs_digraph(s)
    assert [walk_weight_sum(g, n) for n in range(1, 9)] == s.values(8)


def test_empty_walks():
    g = WeightedDigraph(2, ((0, 1, 1),), 0, 1)
    assert walk_weight_sum(g, 0) == 0
    assert walk_weight_sum(WeightedDigraph(1, (), 0, 0), 0) == 1


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4).flatmap(lambda d: st.tuples(st.lists(st.integers(-3, 3), min_size=d, max_size=d), st.lists(st.integers(-3, 3), min_size=d, max_size=d))))
def test_walk_sum_property(data):
    s = Lrs(*data)
    g = build_lrs_digraph(s)
    assert [walk_weight_sum(g, n) for n in range(1, 9)] == s.values(8)


def test_counting_digraph_eleven_walks():
    g = build_counting_digraph(11, 4)
    assert count_paths(g, g.s, g.f, 4) == 11
    assert brute_walk_sum(g, 4) == 11


def test_counting_digraph_small():
    g = build_counting_digraph(1, 1)
    assert len(g.edges) == 1 and count_paths(g, g.s, g.f, 1) == 1
    g = build_counting_digraph(6, 5)
    assert brute_walk_sum(g, 5) == 6


def test_counting_digraph_rejects_short_k():
    import pytest

    with pytest.raises(ValueError):
        build_counting_digraph(11, 3)


def test_walk_weights_examples():
    g = ColoredDigraph(2, ((0, 1, 1),), 1)
    assert walk_weights(g, 0, 1, 1) == {(1,)}
    loop = ColoredDigraph(1, ((0, 0, 1),), 1)
    assert walk_weights(loop, 0, 0, 3) == {(0,), (1,), (2,), (3,)}
    g = ColoredDigraph(3, ((0, 1, 1), (0, 1, 2), (1, 2, 1)), 2)
    assert walk_weights(g, 0, 2, 2) == {(2, 0), (1, 1)}
