import json
from fractions import Fraction

import pytest

from orbitreg.errors import FormatError
from orbitreg.formats import (
    format_dfa,
    format_ihp,
    format_lrs,
    format_matrix,
    format_orbit_instance,
    format_wwhp,
    parse_dfa,
    parse_digraph,
    parse_ihp,
    parse_lrs,
    parse_matrix,
    parse_orbit_instance,
    parse_progression,
    parse_semilinear,
    parse_wwhp,
    to_jsonl,
)
from orbitreg.hitting import Chamber, ChpInstance, OdpInstance, PlpInstance, ShpInstance
from orbitreg.lattice.ihp import IhpInstance
from orbitreg.lrs import Affine, Lrs
from orbitreg.monoid import pb_to_wwhp

from conftest import table


def test_lrs_roundtrip():
    s = Lrs((Fraction(1, 2), -3), (7, Fraction(-2, 3)))
    assert parse_lrs(format_lrs(s)) == s
    assert parse_lrs("% fibonacci\nlrs 2\na 1 1\nb 1 1\n") == Lrs((1, 1), (1, 1))


def test_lrs_errors_carry_line_numbers():
    with pytest.raises(FormatError, match="2"):
        parse_lrs("lrs 2\na 1\nb 1 1\n")
    with pytest.raises(FormatError):
        parse_lrs("lrs 1\na x\nb 1\n")
    with pytest.raises(FormatError):
        parse_lrs("lrs 1\na 1\nb 1\nextra 3\n")


def test_matrix_roundtrip():
    m = ((1, Fraction(-1, 2)), (0, 3))
    assert parse_matrix(format_matrix(m)) == m


def test_dfa_roundtrip():
    a = table(((1, 0, 2), (1, 2, 0), (2, 2, 2)), {0, 1})
    b = parse_dfa(format_dfa(a))
    assert b == a
    with pytest.raises(FormatError, match="missing transition"):
        parse_dfa("dfa\nalphabet 0 1\nstates 1\ninitial 0\naccepting 0\ntrans 0 0 0\n")


def test_digraph_parse():
    g = parse_digraph("digraph 2\nmark s 0\nmark f 1\nedge 0 1 3\n")
    assert g.edges == ((0, 1, 3),) and g.f == 1
    c = parse_digraph("digraph 1\ncolors 2\nedge 0 0 2\n")
    assert c.colors == 2
    with pytest.raises(FormatError):
        parse_digraph("digraph 1\nvertex 0\n")


def test_wwhp_roundtrip():
    inst = pb_to_wwhp(table(((0, 0, 0),), {0}))[0]
    back = parse_wwhp(format_wwhp(inst))
    assert back.graph == inst.graph and back.phi == inst.phi and back.x0 == inst.x0


def test_ihp_roundtrip():
    inst = IhpInstance(((1, 1), (0, 1)), (0, 1), (2, 1), ((3, 0),), 1)
    assert parse_ihp(format_ihp(inst)) == inst


@pytest.mark.parametrize(
    "inst",
    [
        ChpInstance(((1, 1), (0, 1)), (0, 1), Chamber((Affine((1, 0), -2),), (0,))),
        OdpInstance(((1, 1), (0, 1)), (0, 1), (Affine((1, 0)),), frozenset({(0,), (1,)})),
        ShpInstance(((1, 1), (0, 1)), (0, 1), ((Affine((1, 0), -5),), (Affine((0, 1)), Affine((1, 0))))),
        PlpInstance(((1, 1), (0, 1)), (0, 1), (Affine((-1, 0), 4),), (Affine((0, 1), -1),)),
    ],
)
def test_orbit_instance_roundtrip(inst):
    assert parse_orbit_instance(format_orbit_instance(inst)) == inst


def test_semilinear_and_progressions():
    sl = parse_semilinear("semilinear 2\ncomponent\nbase 1 0\nperiod 0 2\n")
    assert sl.contains((1, 4)) and not sl.contains((1, 3))
    ps = parse_progression("finite 1\nprog 4 3\n")
    assert ps.members(10) == [1, 4, 7, 10]
    with pytest.raises(FormatError):
        parse_progression("finite\nprog 4 0\n")


def test_jsonl_fields_match_text():
    text = "% scale 2\nlrs 1\na 1\nb 4\n55\n"
    rows = [json.loads(x) for x in to_jsonl(text).splitlines()]
    assert rows[0] == {"field": "comment", "values": ["scale", "2"]}
    assert rows[1] == {"field": "lrs", "values": ["1"]}
    assert rows[-1] == {"field": "value", "values": ["55"]}
    assert len(rows) == 5
