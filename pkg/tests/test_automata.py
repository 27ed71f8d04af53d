from itertools import product

from orbitreg.automata import (
    AB,
    BA,
    SIM,
    all_words,
    canonical,
    classify_block,
    count_words,
    dfa_combine,
    dfa_complement,
    dfa_run,
    empty,
    universal,
)

from conftest import table

BIN = ("0", "1")
PARITY = table(((0, 1), (1, 0)), {0}, BIN)  # even number of 1s


def words(n):
    return ["".join(w) for k in range(n + 1) for w in product("01", repeat=k)]


def test_run_examples():
    assert dfa_run(PARITY, "") is True
    assert dfa_run(table(((0, 0),), set(), BIN), "") is False
    assert all(dfa_run(universal(BIN), w) for w in words(5))
    length_parity = table(((1, 1), (0, 0)), {0}, BIN)
    assert all(dfa_run(length_parity, w) == (len(w) % 2 == 0) for w in words(6))


def test_count_examples():
    assert count_words(universal(BIN), 5) == 32
    assert all(count_words(empty(BIN), n) == 0 for n in range(6))
    assert count_words(PARITY, 3) == sum(w.count("1") % 2 == 0 for w in ("".join(x) for x in product("01", repeat=3))) == 4


def test_count_matches_enumeration():
    a = table(((1, 0), (2, 0), (2, 2)), {2}, BIN)  # contains 00
    for n in range(9):
        assert count_words(a, n) == sum(a.accepts(w) for w in all_words(BIN, n))


def test_combine_identities():
    a = table(((1, 0), (2, 0), (2, 2)), {2}, BIN)
    assert all(count_words(dfa_combine(a, a, "diff"), n) == 0 for n in range(9))
    twice = dfa_complement(dfa_complement(a))
    both = dfa_combine(a, universal(BIN), "and")
    for w in words(8):
        assert twice.accepts(w) == a.accepts(w) == both.accepts(w)


def test_classify_block():
    a = table(((1, 0), (2, 0), (2, 2)), {2}, BIN)
    assert all(classify_block(a, a, w) == SIM for w in words(4))
    assert all(classify_block(universal(BIN), empty(BIN), w) == AB for w in words(4))
    zeros = table(((0, 1), (1, 1)), {0}, BIN)
    ones = table(((1, 0), (1, 1)), {0}, BIN)
    assert classify_block(zeros, ones, "01") == SIM
    assert classify_block(ones, zeros, "0") == BA


def test_canonical_drops_unreachable_states():
    a = table(((0, 0), (1, 1)), {0}, BIN)
    assert canonical(a).states == 1
