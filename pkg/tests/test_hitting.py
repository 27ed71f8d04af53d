import pytest

from orbitreg.errors import Refusal
from orbitreg.hitting import (
    Chamber,
    ChpInstance,
    OdpInstance,
    PlpInstance,
    ShpInstance,
    all_patterns,
    chamber_member,
    chp_odp_roundtrip,
    chp_to_odp,
    nonneg_to_odp,
    odp_to_chp,
    orbit_scan,
    plp_from_chamber_union,
    plp_to_nonneg,
    shp_to_skolem,
    skolem_to_chp,
)
from orbitreg.lrs import Affine, Lrs

SHIFT = ((1, 1), (0, 1))  # (a, 1) -> (a + 1, 1)


def first_index(values, pred):
    return next((n for n, v in enumerate(values, 1) if pred(v)), None)


def test_chamber_member():
    c = Chamber((Affine((1, 0)), Affine((0, 1), -1)), (1, 0))
    assert chamber_member(c, (3, 1)) and not chamber_member(c, (0, 1))
    with pytest.raises(ValueError):
        Chamber((Affine((1,)),), (2,))


def test_skolem_to_chp():
    s = Lrs((2, -1), (-2, -1))  # n - 3
    r = orbit_scan(skolem_to_chp(s), 20)
    assert r.hit is not None and r.hit + 1 == first_index(s.values(20), lambda v: v == 0)
    assert not orbit_scan(skolem_to_chp(Lrs((1,), (1,))), 20).found


def test_nonneg_to_odp():
    s = Lrs((2, -1), (2, 1))  # 3 - n
    r = orbit_scan(nonneg_to_odp(s), 20)
    assert r.hit + 1 == first_index(s.values(20), lambda v: v < 0) == 4


def test_roundtrip():
    c = ChpInstance(SHIFT, (-2, 1), Chamber((Affine((1, 0)),), (0,)))
    odp = chp_odp_roundtrip(c)
    assert isinstance(odp, OdpInstance) and len(odp.patterns) == 2
    back = odp_to_chp(odp)
    assert [x.chamber.signs for x in back] == [(0,)]
    assert orbit_scan(c, 10).hit == orbit_scan(odp, 10).hit == 2
    assert chp_odp_roundtrip(chp_to_odp(c)) == back
    with pytest.raises(TypeError):
        chp_odp_roundtrip(3)


def test_pattern_cap():
    assert len(all_patterns(2)) == 9
    with pytest.raises(Refusal):
        all_patterns(40)


def test_shp_to_skolem():
    fams = ((Affine((1, 0), -5),), (Affine((1, 0), -2), Affine((0, 1), -1)))
    inst = ShpInstance(SHIFT, (0, 1), fams)
    s = shp_to_skolem(inst)
    zeros = [n for n, v in enumerate(s.values(12), 1) if v == 0]
    assert zeros == [3, 6]
    assert orbit_scan(inst, 12).hit + 1 == zeros[0]


def test_plp_to_nonneg():
    inst = PlpInstance(SHIFT, (0, 1), ineqs=(Affine((-1, 0), 4),))  # a <= 4
    s = plp_to_nonneg(inst)
    assert orbit_scan(inst, 20).hit == 5
    assert first_index(s.values(20), lambda v: v < 0) == 6
    off = PlpInstance(SHIFT, (0, 1), eqs=(Affine((1, 0)),))
    assert plp_to_nonneg(off).values(3) == [-1, -1, -1]
    on = PlpInstance(SHIFT, (0, 1), eqs=(Affine((0, 1), -1),))
    assert plp_to_nonneg(on).values(3) == [1, 1, 1]
    assert not orbit_scan(on, 20).found


def test_plp_from_chamber_union():
    inst = plp_from_chamber_union(SHIFT, (0, 1), [Affine((1, 0), -3), Affine((0, 1), -1)], (-1, 0))
    assert len(inst.ineqs) == 1 and len(inst.eqs) == 1
    assert orbit_scan(inst, 10).hit == 4
