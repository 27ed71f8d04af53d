import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbitreg.automata import count_words
from orbitreg.filters import in_permutation_filter, parse_block_word
from orbitreg.forward import (
    AutomataPair,
    ChpInstance,
    build_equality_automaton,
    build_less_automaton,
    chp_to_pb,
    construct_pairing_witness,
    lrs_to_automata_pair,
    normalize_relation,
    pair_parameters,
    track_word,
    zurc_product,
    zurc_tset_counts,
    zurc_to_pepe,
    zurc_witness,
)
from orbitreg.lrs import Affine, Lrs, lrs_eval


def difference(pair: AutomataPair, n: int) -> int:
    m = pair.ell * n
    return count_words(pair.a, m) - count_words(pair.b, m)


def test_pair_parameters_fibonacci(fib):
    m, k = pair_parameters(fib)
    assert m >= 1 and 2**k > 2 * m * 2


def test_pair_counts_fibonacci(fib):
    pair = lrs_to_automata_pair(fib)
    assert [difference(pair, n) for n in range(1, 8)] == fib.values(7)


def test_pair_counts_negative_terms():
    s = Lrs((2, -1), (-2, -1))  # n - 3
    pair = lrs_to_automata_pair(s)
    assert [difference(pair, n) for n in range(1, 7)] == [-2, -1, 0, 1, 2, 3]


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 2).flatmap(lambda d: st.tuples(st.lists(st.integers(-2, 2), min_size=d, max_size=d), st.lists(st.integers(-2, 2), min_size=d, max_size=d))))
def test_pair_counts_property(data):
    s = Lrs(*data)
    pair = lrs_to_automata_pair(s)
    assert [difference(pair, n) for n in range(1, 4)] == s.values(3)


def test_pair_rejects_rational_data():
    from fractions import Fraction

    with pytest.raises(ValueError):
        lrs_to_automata_pair(Lrs((Fraction(1, 2),), (1,)))


def test_pair_rejects_small_parameters(fib):
    with pytest.raises(ValueError):
        lrs_to_automata_pair(fib, m_bits=0)


def test_equality_witness_at_zero():
    s = Lrs((2, -1), (-1, 0))  # n - 2
    pair = lrs_to_automata_pair(s)
    eq = build_equality_automaton(pair)
    lt = build_less_automaton(pair)
    w = construct_pairing_witness(pair, 2, "=")
    assert w is not None and in_permutation_filter(w)
    assert parse_block_word(w).rank == 2 * pair.ell
    assert eq.accepts(w)
    assert construct_pairing_witness(pair, 1, "=") is None
    w_lt = construct_pairing_witness(pair, 1, "<")
    assert w_lt is not None and lt.accepts(w_lt) and not eq.accepts(w_lt)


def test_normalize_relation():
    assert normalize_relation("== 0") == "="
    assert normalize_relation(">0") == ">"
    with pytest.raises(ValueError):
        normalize_relation("~")


def test_chp_to_pb_witness_iff_hit():
    # x_n = n - 3 as an orbit: phi = [[1,1],[0,1]], x0 = (-2, 1)
    inst = ChpInstance(((1, 1), (0, 1)), (-2, 1), [((1, 0), "=")])
    red = chp_to_pb(inst)
    assert red.ell * 2 <= 16
    assert red.manifest["ell"] == red.ell
    assert red.witness(1) is None
    w = red.witness(2)
    assert inst.holds_at(2) and red.dfa.accepts(w)


def test_chp_holds_at():
    inst = ChpInstance(((1, 1), (0, 1)), (-3, 1), [((1, 0), "=")])
    assert [n for n in range(8) if inst.holds_at(n)] == [3]
    with pytest.raises(ValueError):
        ChpInstance(((1,),), (1, 2), [((1,), "=")])


# Upper right corner products.
MATS = [((1, 1), (0, 1)), ((1, -1), (0, 1))]


def test_zurc_product():
    assert zurc_product(MATS, [1, 2]) == ((1, 0), (0, 1))
    assert zurc_product(MATS, [1, 1]) == ((1, 2), (0, 1))


def test_zurc_counts_match_entries():
    for seq in ([1], [2], [1, 2], [1, 1]):
        plus, minus, _ = zurc_tset_counts(MATS, seq, 1, 2, budget=1 << 20)
        assert plus - minus == zurc_product(MATS, seq)[0][1]


def test_zurc_witness_and_automaton():
    pepe = zurc_to_pepe(MATS)
    w = zurc_witness(MATS, [1, 2], budget=1 << 20)
    assert w is not None and pepe.accepts(track_word(w))
    assert zurc_witness(MATS, [1, 1], budget=1 << 20) is None
