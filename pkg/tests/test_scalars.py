import pytest
from hypothesis import given, strategies as st

from kdongen.scalars import Rat, GaussRat, as_real, rat_from_str, rat_to_str

rats = st.builds(Rat, st.integers(-50, 50), st.integers(1, 30))


def test_rat_basic():
    assert Rat(2, 4) == Rat(1, 2)
    assert Rat(-6, -4) == Rat(3, 2)
    assert Rat(3) + Rat(1, 3) == Rat(10, 3)
    assert Rat(1, 2) * 4 == 2
    assert Rat(7, 2) - Rat(1, 2) == 3
    assert Rat(1, 3) / Rat(2, 9) == Rat(3, 2)
    assert -Rat(5, 7) == Rat(-5, 7)
    assert Rat(22, 11).num == 2 and Rat(22, 11).den == 1


def test_rat_zero_division():
    with pytest.raises(ZeroDivisionError):
        Rat(1, 0)
    with pytest.raises(ZeroDivisionError):
        Rat(1) / Rat(0)
    with pytest.raises(ZeroDivisionError):
        Rat(1) / 0


def test_rat_comparisons():
    assert Rat(1, 3) < Rat(1, 2) <= Rat(2, 4)
    assert Rat(5, 3) > 1
    assert sorted([Rat(1, 2), Rat(-3), Rat(0)]) == [Rat(-3), Rat(0), Rat(1, 2)]


def test_rat_str_round_trip():
    for r in (Rat(0), Rat(5), Rat(-3, 7), Rat(22, 4)):
        assert rat_from_str(rat_to_str(r)) == r
    assert rat_to_str(Rat(5)) == "5/1"
    assert rat_to_str(Rat(-1, 2)) == "-1/2"
    assert rat_from_str("6/4") == Rat(3, 2)


@given(rats, rats, rats)
def test_rat_field_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a - a == 0
    if b != 0:
        assert (a / b) * b == a


def test_gauss_basic():
    z = GaussRat(Rat(1, 2), Rat(3))
    assert z.re == Rat(1, 2) and z.im == Rat(3)
    assert z + z == GaussRat(1, 6)
    assert GaussRat(0, 1) * GaussRat(0, 1) == GaussRat(-1)
    assert GaussRat(2, 3) * GaussRat(2, -3) == GaussRat(13)
    assert GaussRat(1, 1) / GaussRat(1, -1) == GaussRat(0, 1)


def test_gauss_i_power():
    ii = GaussRat(0, 1)
    acc = GaussRat(1)
    for k in range(9):
        assert GaussRat.i_power(k) == acc
        acc = acc * ii
    assert GaussRat.i_power(-1) == GaussRat(0, -1)
    assert GaussRat.i_power(-2) == GaussRat(-1)


def test_as_real():
    assert as_real(GaussRat(Rat(7, 3))) == Rat(7, 3)
    with pytest.raises(ValueError):
        as_real(GaussRat(1, Rat(1, 5)))


def test_gauss_conjugate_abs2():
    z = GaussRat(Rat(3, 2), Rat(-1, 4))
    assert z.conjugate() == GaussRat(Rat(3, 2), Rat(1, 4))
    assert z.abs2() == Rat(9, 4) + Rat(1, 16)
    assert z * z.conjugate() == GaussRat(z.abs2())
    assert GaussRat(5).is_real() and not GaussRat(0, 1).is_real()


gauss = st.builds(GaussRat, rats, rats)


@given(gauss, gauss)
def test_gauss_ring_laws(a, b):
    assert a * b == b * a
    assert (a + b).conjugate() == a.conjugate() + b.conjugate()
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
    if b != GaussRat(0):
        assert (a / b) * b == a
