from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbitreg import linalg as la
from orbitreg.acceptance import recurrence
from orbitreg.lrs import (
    Affine,
    Lrs,
    companion_orbit,
    constant,
    lrs_add,
    lrs_eval,
    lrs_from_orbit,
    lrs_hadamard,
    lrs_interleave,
    scale_to_integer,
    shp_product_lrs,
    square_minus_one,
    zero,
)

from conftest import fib_values


def test_eval_examples(fib):
    assert lrs_eval(fib, 5) == 5
    s = Lrs((3, -1), (7, 2))
    assert lrs_eval(s, 1) == 7
    assert lrs_eval(Lrs((Fraction(1, 2),), (1,)), 4) == Fraction(1, 8)


def test_eval_rejects_index_zero(fib):
    with pytest.raises(ValueError):
        lrs_eval(fib, 0)


def test_scale_halving():
    y, n = scale_to_integer(Lrs((Fraction(1, 2),), (1,)))
    assert n == 2
    assert y.coeffs == (1,) and y.init == (4,)
    # x_3 = 1/4, so y_3 = 2**4 / 4
    assert lrs_eval(y, 3) == 4


def test_scale_integer_input_is_unchanged(fib):
    y, n = scale_to_integer(fib)
    assert n == 1 and y == fib


def test_scale_sixths():
    s = Lrs((Fraction(1, 3), Fraction(1, 6)), (Fraction(1, 2), 1))
    y, n = scale_to_integer(s)
    assert n == 6
    for k in range(1, 9):
        assert lrs_eval(y, k) == 6 ** (k + 1) * lrs_eval(s, k)


rationals = st.fractions(min_value=-9, max_value=9, max_denominator=9)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3).flatmap(lambda d: st.tuples(st.lists(rationals, min_size=d, max_size=d), st.lists(rationals, min_size=d, max_size=d))))
def test_scale_property(data):
    a, b = data
    s = Lrs(a, b)
    y, n = scale_to_integer(s)
    assert y.is_integral
    xs = recurrence(a, b, 12)
    assert [lrs_eval(y, k) for k in range(1, 13)] == [n ** (k + 1) * xs[k - 1] for k in range(1, 13)]


def test_companion_fibonacci(fib):
    phi, x0, h = companion_orbit(fib)
    assert phi == ((1, 1), (1, 0))
    assert x0 == (1, 1)
    # h(phi**k x0) = x_{k+d}
    assert h(la.mat_vec(phi, x0)) == 2 == lrs_eval(fib, 3)
    assert la.mat_vec(la.mat_pow(phi, 3), x0) == (5, 3)


def test_companion_scalar():
    phi, x0, h = companion_orbit(Lrs((5,), (2,)))
    assert phi == ((5,),) and x0 == (2,)
    assert [h(x) for x in la.orbit(phi, x0, 4)] == [2, 10, 50, 250]


def test_from_orbit_examples(fib):
    s = lrs_from_orbit(((2,),), (3,), Affine((1,)))
    assert s.coeffs == (2,) and s.init == (6,)
    z = lrs_from_orbit(((2,),), (3,), Affine((0,)))
    assert z.values(5) == [0] * 5
    phi, x0, h = companion_orbit(fib)
    back = lrs_from_orbit(phi, x0, h, start=0)
    assert back.values(12) == fib_values(14)[1:13]


def test_add_and_hadamard(fib):
    assert lrs_add(fib, fib).values(5) == [2, 2, 4, 6, 10]
    z = zero()
    assert lrs_add(z, fib).values(8) == fib.values(8)
    assert lrs_hadamard(z, fib).values(8) == [0] * 8
    assert lrs_eval(lrs_hadamard(fib, fib), 5) == 25


def test_shp_product(fib):
    sq = shp_product_lrs([[fib]])
    assert sq.values(10) == [v * v for v in fib_values(10)]
    assert shp_product_lrs([[zero()], [fib]]).values(10) == [0] * 10
    # first block vanishes exactly at n = 3
    s = Lrs((2, -1), (-2, -1))
    assert s.values(10) == [n - 3 for n in range(1, 11)]
    r = shp_product_lrs([[s], [constant(1)]])
    assert [n for n, v in enumerate(r.values(10), 1) if v == 0] == [3]


def test_interleave(fib):
    assert lrs_interleave([fib]) == fib
    assert lrs_interleave([constant(1), constant(2)]).values(6) == [1, 2, 1, 2, 1, 2]
    t = Lrs((2,), (1,))
    r = lrs_interleave([fib, t, constant(-1)])
    vals = r.values(36)
    for j, seq in enumerate([fib, t, constant(-1)]):
        assert vals[j::3] == seq.values(12)


def test_square_minus_one(fib):
    assert square_minus_one(constant(1)).values(6) == [0] * 6
    assert square_minus_one(fib).values(5) == [0, 0, 3, 8, 24]
    s = Lrs((2, -1), (-2, -1))
    assert lrs_eval(square_minus_one(s), 3) == -1


def test_lrs_rejects_bad_shapes():
    with pytest.raises(ValueError):
        Lrs((1, 2), (1,))
    with pytest.raises(ValueError):
        Lrs((), ())
