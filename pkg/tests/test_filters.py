from itertools import permutations, product

import pytest

from orbitreg.errors import FormatError
from orbitreg.filters import (
    FILTERS,
    brute_realizability,
    in_injective,
    in_periodic,
    in_permutation_filter,
    in_surjective,
    parse_block_word,
    project,
    track_product_member,
)

from conftest import table


def test_parse_examples():
    bw = parse_block_word("#01#10#")
    assert bw.rank == 2 and bw.joined() == ["01", "10"]
    for bad in ("01#", "#01", "##", "#0#01#"):
        with pytest.raises(FormatError):
            parse_block_word(bad)


def test_filter_examples():
    assert in_permutation_filter("#00#01#10#11#")
    assert in_permutation_filter("#1#0#")
    assert not in_permutation_filter("#0#0#")
    assert in_periodic("#0#0#") and not in_injective("#0#0#")
    assert in_surjective("#0#1#0#") and not in_injective("#0#1#0#")
    assert in_injective("#01#") and not in_surjective("#01#")


def test_filters_agree_with_definitions():
    words = ["".join(t) for t in product("01", repeat=2)]
    for k in range(1, 6):
        for blocks in product(words, repeat=k):
            w = "#" + "#".join(blocks) + "#"
            assert FILTERS["I"](w) == (len(set(blocks)) == k)
            assert FILTERS["S"](w) == (set(blocks) == set(words))
            assert FILTERS["P"](w) == (sorted(blocks) == words)
            assert FILTERS["Per"](w) == (len(set(blocks)) == 1)


def test_projection():
    w = ["#", "0|1", "1|1", "#", "1|0", "0|0", "#"]
    assert project(w, 0) == list("#01#10#")
    assert project(w, 1) == list("#11#00#")
    v = ["#", "0|1", "#", "1|1", "#"]
    assert track_product_member(v, in_permutation_filter, in_periodic)
    assert not track_product_member(v, in_permutation_filter, in_injective)
    assert track_product_member(w, in_injective, in_injective)


def brute_pb(a, rank):
    blocks = ["".join(t) for t in product("01", repeat=rank)]
    return any(a.accepts("#" + "#".join(p) + "#") for p in permutations(blocks))


def test_brute_realizability_examples():
    everything = table(((0, 0, 0),), {0})
    res = brute_realizability(everything, "P", max_rank=2, budget=64)
    assert res.word == "#0#1#" and res.rank == 1
    nothing = table(((0, 0, 0),), set())
    res = brute_realizability(nothing, "P", max_rank=2, budget=64)
    assert not res.found and res.bound.startswith("exhausted")


def test_brute_matches_permutation_oracle():
    import random

    rng = random.Random(7)
    for _ in range(60):
        rows = tuple(tuple(rng.randrange(3) for _ in range(3)) for _ in range(3))
        a = table(rows, {rng.randrange(3)})
        truth = next((r for r in (1, 2) if brute_pb(a, r)), None)
        res = brute_realizability(a, "P", max_rank=2, budget=64)
        assert res.rank == truth
        if res.found:
            assert a.accepts(res.word) and in_permutation_filter(res.word)


def test_brute_injective_and_surjective():
    one_block = table(((0, 0, 1), (1, 1, 2), (2, 2, 3), (3, 3, 3)), {2})
    res = brute_realizability(one_block, "I", max_rank=2, budget=64)
    assert res.word == "#0#" and in_injective(res.word)
    assert not brute_realizability(one_block, "S", max_rank=2, budget=64).found
