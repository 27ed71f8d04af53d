"""Exact reductions between linear-recurrence and orbit problems and regular
realizability of block-word filters."""

from .automata import Dfa, count_words
from .digraphs import build_counting_digraph, build_lrs_digraph, walk_weight_sum
from .errors import FormatError, Refusal
from .forward import chp_to_pb, lrs_to_automata_pair, zurc_to_pepe
from .lrs import Lrs, lrs_eval, scale_to_integer
from .monoid import pb_to_wwhp, phi_system
from .shadow import decide_injective, decide_surjective

__version__ = "0.1.0"

__all__ = [
    "Dfa",
    "FormatError",
    "Lrs",
    "Refusal",
    "build_counting_digraph",
    "build_lrs_digraph",
    "chp_to_pb",
    "count_words",
    "decide_injective",
    "decide_surjective",
    "lrs_eval",
    "lrs_to_automata_pair",
    "pb_to_wwhp",
    "phi_system",
    "scale_to_integer",
    "walk_weight_sum",
    "zurc_to_pepe",
]
