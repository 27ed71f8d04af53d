from itertools import product

import pytest

from orbitreg.automata import Dfa
from orbitreg.lrs import Lrs

BLOCK = ("0", "1", "#")


@pytest.fixture
def fib():
    return Lrs((1, 1), (1, 1))


def table(rows, accepting, alphabet=BLOCK, initial=0):
    return Dfa(alphabet, rows, initial, accepting)


def every_dfa(states, alphabet=("0", "1")):
    """All automata with the given state count, accepting set {last state}."""
    cells = states * len(alphabet)
    for flat in product(range(states), repeat=cells):
        rows = [flat[i * len(alphabet) : (i + 1) * len(alphabet)] for i in range(states)]
        yield Dfa(alphabet, rows, 0, {states - 1})


def fib_values(n):
    a, b = 1, 1
    out = []
    for _ in range(n):
        out.append(a)
        a, b = b, a + b
    return out
