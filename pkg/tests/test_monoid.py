import random
from itertools import permutations, product

from orbitreg import linalg as la
from orbitreg.digraphs import walk_weights
from orbitreg.monoid import (
    cayley_graph,
    closure,
    compose,
    identity_map,
    nu_bruteforce,
    pb_to_wwhp,
    phi_system,
    transition_maps,
    word_map,
)

from conftest import table


def random_block_dfa(rng, states):
    rows = tuple(tuple(rng.randrange(states) for _ in range(3)) for _ in range(states))
    return table(rows, {rng.randrange(states)})


def test_compose_order():
    f, g = (1, 0, 2), (2, 2, 0)
    assert compose(f, g) == (2, 2, 1)
    a = table(((1, 0, 0), (1, 2, 1), (2, 2, 2)), {2})
    f0, f1, _ = transition_maps(a)
    assert word_map(a, "01") == compose(f1, f0)


def test_closure_cyclic_group():
    rot = (1, 2, 0)
    m = closure([rot])
    assert len(m.elements) == 3 and m.elements[m.identity] == identity_map(3)
    g = cayley_graph(m)
    assert len(g.edges) == 3 and all(c == 1 for _, _, c in g.edges)


def test_closure_without_identity():
    const = (0, 0)
    m = closure([const], with_identity=False)
    assert m.elements == ((0, 0),) and m.identity is None


def test_nu_matches_bruteforce():
    rng = random.Random(3)
    for _ in range(20):
        a = random_block_dfa(rng, 3)
        system = phi_system(a)
        assert system.carrier[0] == identity_map(3)
        for n in range(0, 7):
            nu = system.nu(n)
            assert nu == nu_bruteforce(a, n)
            assert sum(nu.values()) == 2**n


def brute_pb(a, rank):
    blocks = ["".join(t) for t in product("01", repeat=rank)]
    return any(a.accepts("#" + "#".join(p) + "#") for p in permutations(blocks))


def wwhp_hits(a, rank):
    for inst in pb_to_wwhp(a):
        target = la.mat_vec(la.mat_pow(inst.phi, rank), inst.x0)
        g = inst.graph
        if tuple(target) in walk_weights(g, g.a, g.b, 2**rank):
            return True
    return False


def test_pb_to_wwhp_agrees_with_permutations():
    rng = random.Random(11)
    for _ in range(40):
        a = random_block_dfa(rng, 3)
        for rank in (1, 2):
            assert wwhp_hits(a, rank) == brute_pb(a, rank)
