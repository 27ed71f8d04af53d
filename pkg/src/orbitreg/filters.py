"""Block-word filters and bounded realizability search.

A block word is ``#w_1#w_2#...#w_N#`` with all blocks of one length
(the rank).  The filters are the permutation filter P (blocks are exactly
the words of that length), injective I (no repeated block), surjective S
(every word of that length occurs) and periodic Per (all blocks equal).
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from itertools import product
from typing import Callable, Sequence

from .automata import Dfa
from .errors import FormatError, Refusal

BINARY = ("0", "1")


@dataclass(frozen=True)
class BlockWord:
    blocks: tuple  # tuple of symbol tuples
    rank: int

    def joined(self) -> list[str]:
        return ["".join(b) for b in self.blocks]


def _symbols(w) -> list[str]:
    if isinstance(w, str):
        return w.split() if " " in w.strip() else list(w)
    return [str(x) for x in w]


def parse_block_word(w) -> BlockWord:
    syms = _symbols(w)
    if not syms or syms[0] != "#":
        raise FormatError("block word must start with '#' (position 0)")
    if syms[-1] != "#":
        raise FormatError(f"block word must end with '#' (position {len(syms) - 1})")
    blocks = []
    cur: list[str] = []
    for pos, s in enumerate(syms[1:], 1):
        if s == "#":
            if not cur:
                raise FormatError(f"empty block ending at position {pos}")
            blocks.append(tuple(cur))
            cur = []
        else:
            cur.append(s)
    if not blocks:
        raise FormatError("no blocks")
    rank = len(blocks[0])
    for i, b in enumerate(blocks):
        if len(b) != rank:
            raise FormatError(f"block {i + 1} has length {len(b)}, expected {rank}")
    return BlockWord(tuple(blocks), rank)


def _parsed(w) -> BlockWord:
    return w if isinstance(w, BlockWord) else parse_block_word(w)


def in_permutation_filter(w, alphabet: Sequence[str] = BINARY) -> bool:
    bw = _parsed(w)
    return (
        all(s in alphabet for b in bw.blocks for s in b)
        and len(set(bw.blocks)) == len(bw.blocks) == len(alphabet) ** bw.rank
    )


def in_injective(w) -> bool:
    bw = _parsed(w)
    return len(set(bw.blocks)) == len(bw.blocks)


def in_surjective(w, alphabet: Sequence[str] = BINARY) -> bool:
    bw = _parsed(w)
    present = set(bw.blocks)
    return all(tuple(t) in present for t in product(alphabet, repeat=bw.rank))


def in_periodic(w) -> bool:
    bw = _parsed(w)
    return len(set(bw.blocks)) == 1


def project(w, track: int) -> list[str]:
    """Track projection; symbols are written ``a|b`` and '#' maps to itself."""
    out = []
    for s in _symbols(w):
        if s == "#":
            out.append(s)
        else:
            parts = s.split("|")
            if len(parts) != 2:
                raise FormatError(f"track symbol {s!r} is not of the form a|b")
            out.append(parts[track])
    return out


def track_product_member(w, pred1: Callable, pred2: Callable) -> bool:
    parse_block_word(w)
    return bool(pred1(project(w, 0))) and bool(pred2(project(w, 1)))


FILTERS = {
    "P": in_permutation_filter,
    "I": in_injective,
    "S": in_surjective,
    "Per": in_periodic,
}


@dataclass(frozen=True)
class SearchResult:
    word: str | None
    rank: int | None = None
    count: int | None = None
    bound: str = ""

    @property
    def found(self) -> bool:
        return self.word is not None


class _Arranger:
    """Exact search for an accepted ordering of a multiset of blocks.

    Blocks that induce the same state map on ``R`` (reading ``w#``) are
    interchangeable, so the search runs over per-class usage counts.
    Options are tried in lexicographic block order, which makes the first
    success the lexicographically least accepted word.
    """

    def __init__(self, r: Dfa, blocks: Sequence[str], budget: int):
        self.r = r
        self.budget = budget
        groups: dict[tuple, list[str]] = defaultdict(list)
        for b in sorted(blocks):
            key = tuple(r.read(q, list(b) + ["#"]) for q in range(r.states))
            groups[key].append(b)
        self.maps = list(groups)
        self.members = [groups[k] for k in self.maps]
        self.start = r.step(r.initial, "#")
        self.nodes = 0

    def run(self, total: int, need_all: bool, extras: int) -> list[str] | None:
        counts = tuple(len(m) for m in self.members)
        memo: dict = {}

        def feasible(q: int, used: tuple, ext: int) -> bool:
            # iterative depth-first evaluation; the recursion would be 2**rank deep
            root = (q, used, ext)
            stack = [(root, None)]
            while stack:
                key, pending = stack[-1]
                if key in memo:
                    stack.pop()
                    continue
                if pending is None:
                    self.nodes += 1
                    if self.nodes > self.budget:
                        raise Refusal(f"arrangement search exceeded budget {self.budget}")
                    kq, kused, kext = key
                    if sum(kused) + kext == total:
                        memo[key] = (
                            kq in self.r.accepting and kext == extras and (not need_all or kused == counts)
                        )
                        stack.pop()
                        continue
                    pending = [nxt for _, nxt in self._options(kq, kused, kext, counts, extras)]
                    pending.reverse()
                    stack[-1] = (key, pending)
                while pending and pending[-1] in memo and not memo[pending[-1]]:
                    pending.pop()
                if not pending:
                    memo[key] = False
                    stack.pop()
                elif pending[-1] in memo:
                    memo[key] = True
                    stack.pop()
                else:
                    stack.append((pending[-1], None))
            return memo[root]

        word: list[str] = []
        state = (self.start, (0,) * len(counts), 0)
        if not feasible(*state):
            return None
        while sum(state[1]) + state[2] < total:
            for block, nxt in self._options(*state, counts, extras):
                if feasible(*nxt):
                    word.append(block)
                    state = nxt
                    break
        return word

    def _options(self, q, used, ext, counts, extras):
        opts = []
        for c, members in enumerate(self.members):
            target = self.maps[c][q]
            if used[c] < counts[c]:
                nxt_used = used[:c] + (used[c] + 1,) + used[c + 1 :]
                opts.append((members[used[c]], (target, nxt_used, ext)))
            if ext < extras and used[c] > 0:
                opts.append((members[0], (target, used, ext + 1)))
        opts.sort(key=lambda o: o[0])
        return opts


def _serialize(blocks: Sequence[str]) -> str:
    return "#" + "#".join(blocks) + "#"


def rank_search(r: Dfa, mode: str, rank: int, count: int | None = None, alphabet=BINARY, budget: int = 1 << 20) -> str | None:
    """Exact search at one rank and block count; returns the least accepted member."""
    blocks = ["".join(t) for t in product(alphabet, repeat=rank)]
    arr = _Arranger(r, blocks, budget)
    full = len(blocks)
    if mode == "P":
        found = arr.run(full, True, 0)
    elif mode == "I":
        found = arr.run(count if count is not None else full, False, 0)
    elif mode == "S":
        extra = 0 if count is None else count - full
        if extra < 0:
            return None
        found = arr.run(full + extra, True, extra)
    else:
        raise ValueError(f"unknown filter {mode!r}")
    return None if found is None else _serialize(found)


def brute_realizability(
    r: Dfa,
    mode: str = "P",
    max_rank: int = 3,
    budget: int = 1 << 20,
    slack: int = 2,
    alphabet: Sequence[str] = BINARY,
) -> SearchResult:
    """Least filter member accepted by ``r`` up to ``max_rank``; never answers no.

    Order is by rank, then block count, then serialization.  I-words use
    block counts 1..|alphabet|**n and S-words |alphabet|**n .. + slack.
    """
    if "#" not in r.alphabet or any(a not in r.alphabet for a in alphabet):
        raise ValueError("automaton alphabet must contain '#' and the block alphabet")
    for n in range(1, max_rank + 1):
        if len(alphabet) ** n > budget:
            raise Refusal(f"rank {n} has more blocks than budget {budget}")
        full = len(alphabet) ** n
        counts = {"P": [full], "I": range(1, full + 1), "S": range(full, full + slack + 1)}[mode]
        for c in counts:
            word = rank_search(r, mode, n, c, alphabet, budget)
            if word is not None:
                return SearchResult(word, n, c)
    return SearchResult(None, bound=f"exhausted(rank<={max_rank})")

