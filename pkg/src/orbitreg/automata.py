"""Deterministic finite automata over declared alphabets."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Sequence

AB, BA, SIM = "AB", "BA", "SIM"


@dataclass(frozen=True)
class Dfa:
    alphabet: tuple
    trans: tuple  # trans[q][i] = target of state q on alphabet[i]
    initial: int
    accepting: frozenset

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(str(a) for a in self.alphabet))
        object.__setattr__(self, "trans", tuple(tuple(row) for row in self.trans))
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("duplicate alphabet symbol")
        n = len(self.trans)
        if not 0 <= self.initial < n:
            raise ValueError("initial state out of range")
        for row in self.trans:
            if len(row) != len(self.alphabet) or any(not 0 <= t < n for t in row):
                raise ValueError("transition table must be total over states and alphabet")
        if any(not 0 <= q < n for q in self.accepting):
            raise ValueError("accepting state out of range")

    @property
    def states(self) -> int:
        return len(self.trans)

    def index(self, symbol: str) -> int:
        try:
            return self._index[symbol]
        except AttributeError:
            object.__setattr__(self, "_index", {a: i for i, a in enumerate(self.alphabet)})
            return self.index(symbol)
        except KeyError:
            raise ValueError(f"symbol {symbol!r} not in alphabet {self.alphabet}") from None

    def symbols(self, word) -> list[str]:
        """Split a word into alphabet symbols; strings are read char by char."""
        if isinstance(word, str):
            if all(len(a) == 1 for a in self.alphabet):
                return list(word)
            return word.split()
        return [str(x) for x in word]

    def step(self, q: int, symbol: str) -> int:
        return self.trans[q][self.index(symbol)]

    def read(self, q: int, word) -> int:
        for a in self.symbols(word):
            q = self.trans[q][self.index(a)]
        return q

    def accepts(self, word) -> bool:
        return self.read(self.initial, word) in self.accepting

    def __str__(self) -> str:
        lines = [
            "dfa",
            "alphabet " + " ".join(self.alphabet),
            f"states {self.states}",
            f"initial {self.initial}",
            "accepting " + " ".join(str(q) for q in sorted(self.accepting)),
        ]
        for q, row in enumerate(self.trans):
            lines += [f"trans {q} {a} {t}" for a, t in zip(self.alphabet, row)]
        return "\n".join(lines) + "\n"


def build_dfa(
    alphabet: Sequence[str],
    initial: Hashable,
    step: Callable[[Hashable, str], Hashable],
    accepting: Callable[[Hashable], bool],
) -> Dfa:
    """Explore reachable abstract states breadth-first and number them canonically."""
    ids = {initial: 0}
    order = [initial]
    queue = deque([initial])
    rows = []
    while queue:
        key = queue.popleft()
        row = []
        for a in alphabet:
            nxt = step(key, a)
            if nxt not in ids:
                ids[nxt] = len(order)
                order.append(nxt)
                queue.append(nxt)
            row.append(ids[nxt])
        rows.append(row)
    # rows were appended in BFS order, matching ids
    acc = frozenset(i for i, key in enumerate(order) if accepting(key))
    return Dfa(tuple(alphabet), tuple(rows), 0, acc)


def canonical(a: Dfa) -> Dfa:
    """Renumber reachable states breadth-first from the initial state."""
    return build_dfa(a.alphabet, a.initial, lambda q, s: a.step(q, s), lambda q: q in a.accepting)


def dfa_run(a: Dfa, word) -> bool:
    return a.accepts(word)


def count_words(a: Dfa, n: int) -> int:
    """Number of accepted words of length n."""
    vec = {a.initial: 1}
    for _ in range(n):
        nxt: dict[int, int] = {}
        for q, c in vec.items():
            for t in a.trans[q]:
                nxt[t] = nxt.get(t, 0) + c
        vec = nxt
    return sum(c for q, c in vec.items() if q in a.accepting)


def all_words(alphabet: Sequence[str], n: int) -> Iterable[tuple]:
    from itertools import product

    return product(alphabet, repeat=n)


def universal(alphabet: Sequence[str]) -> Dfa:
    return Dfa(tuple(alphabet), ((0,) * len(alphabet),), 0, {0})


def empty(alphabet: Sequence[str]) -> Dfa:
    return Dfa(tuple(alphabet), ((0,) * len(alphabet),), 0, set())


_MODES = {
    "and": lambda x, y: x and y,
    "or": lambda x, y: x or y,
    "diff": lambda x, y: x and not y,
    "xor": lambda x, y: x != y,
}


def dfa_combine(a: Dfa, b: Dfa, mode: str) -> Dfa:
    if a.alphabet != b.alphabet:
        raise ValueError("alphabet mismatch")
    op = _MODES[mode]
    return build_dfa(
        a.alphabet,
        (a.initial, b.initial),
        lambda st, s: (a.step(st[0], s), b.step(st[1], s)),
        lambda st: op(st[0] in a.accepting, st[1] in b.accepting),
    )


def dfa_complement(a: Dfa) -> Dfa:
    return Dfa(a.alphabet, a.trans, a.initial, frozenset(range(a.states)) - a.accepting)


def block_class(in_a: bool, in_b: bool) -> str:
    if in_a and not in_b:
        return AB
    if in_b and not in_a:
        return BA
    return SIM


def classify_block(a: Dfa, b: Dfa, w) -> str:
    if a.alphabet != b.alphabet:
        raise ValueError("alphabet mismatch")
    return block_class(a.accepts(w), b.accepts(w))
