import pytest
from hypothesis import given, settings, strategies as st

from helpers import qagree
from kdongen.scalars import GaussRat, Rat
from kdongen.series import LambdaRational, LSeries, QLaurent, rational_reconstruct

small = st.integers(-9, 9)
coeff = st.builds(GaussRat, small, small)


def ql(lo, *cs, trunc=None):
    return QLaurent(lo, cs, trunc=trunc)


qlaurents = st.builds(
    QLaurent,
    st.integers(-4, 4),
    st.lists(coeff, max_size=5),
    st.one_of(st.none(), st.integers(6, 12)),
)


def test_qlaurent_basic():
    f = ql(-2, 1, 0, 3)
    assert f.lo == -2
    assert f.coeff(-2) == GaussRat(1)
    assert f.coeff(-1) == GaussRat(0)
    assert f.coeff(0) == GaussRat(3)
    assert f.coeff(100) == GaussRat(0)
    assert f.trunc is None
    assert (f - f).is_zero()


def test_qlaurent_normalization():
    assert ql(0, 0, 0, 1).lo == 2
    assert ql(5).is_zero()
    assert ql(3, 0, 0).is_zero()
    g = ql(0, 1, 2, trunc=1)
    assert g.coeff(0) == GaussRat(1)
    with pytest.raises(ValueError):
        g.coeff(1)


def test_qlaurent_mul_window():
    f = ql(1, 1, 1, trunc=5)
    g = ql(-2, 2, trunc=3)
    p = f * g
    assert p.lo == -1
    assert p.trunc == min(5 + (-2), 3 + 1)
    assert p.coeff(-1) == GaussRat(2)


def test_qlaurent_add_window():
    f = ql(0, 1, trunc=4)
    g = ql(0, 1, 1, 1, 1, 1, 1)
    s = f + g
    assert s.trunc == 4
    assert s.coeff(3) == GaussRat(1)


def test_qlaurent_invert():
    f = ql(2, 1, -1, trunc=8)
    g = f.invert()
    assert g.lo == -2
    assert (f * g).coeff(0) == GaussRat(1)
    p = f * g
    assert all(p.coeff(e) == GaussRat(0) for e in range(1, p.trunc))
    # exact monomial inverts exactly
    m = ql(3, GaussRat(Rat(2, 5)))
    assert m.invert() * m == ql(0, 1)


def test_qlaurent_invert_nothing_known():
    with pytest.raises(ValueError, match=r"O\(q\^4\)"):
        QLaurent(4, (), trunc=4).invert()
    with pytest.raises(ZeroDivisionError):
        QLaurent().invert()


def test_qlaurent_principal_part():
    f = ql(-3, 1, 0, 2, 5, 7, trunc=9)
    p = f.principal_part()
    assert p.coeff(-3) == GaussRat(1) and p.coeff(-1) == GaussRat(2)
    assert p.coeff(0) == GaussRat(5)
    assert p.trunc is None
    assert p.coeff(1) == GaussRat(0)


def test_qlaurent_shift_scale():
    f = ql(-1, 2, 4)
    assert f.shift(3).lo == 2
    assert (f * Rat(1, 2)).coeff(-1) == GaussRat(1)
    assert (f / 2).coeff(0) == GaussRat(2)
    assert (f / GaussRat(0, 1)).coeff(-1) == GaussRat(0, -2)


def test_qlaurent_json_round_trip():
    f = ql(-2, GaussRat(Rat(1, 3), Rat(-2, 7)), 0, 5, trunc=6)
    assert QLaurent.from_json(f.to_json()) == f
    g = ql(0, 1)
    assert QLaurent.from_json(g.to_json()).trunc is None


@given(qlaurents, qlaurents, qlaurents)
@settings(max_examples=60)
def test_qlaurent_ring_laws(f, g, h):
    assert f * g == g * f
    # windows may differ after cancellation; contents must agree
    assert qagree((f + g) * h, f * h + g * h)
    assert (f - f).is_zero()


qlaurents_windowed = st.builds(
    QLaurent,
    st.integers(-4, 4),
    st.lists(coeff, max_size=5),
    st.integers(6, 12),
)


@given(qlaurents_windowed)
@settings(max_examples=60)
def test_qlaurent_invert_round_trip(f):
    if f.is_zero():
        return
    g = f.invert()
    p = f * g
    assert p.coeff(0) == GaussRat(1)
    assert all(p.coeff(e) == GaussRat(0) for e in range(p.lo, p.trunc) if e != 0)


def lam(*slots, ltrunc=None, lo=0):
    return LSeries(lo, slots, ltrunc=ltrunc)


def test_lseries_basic():
    s = lam(ql(0, 1), ql(-1, 2), ltrunc=6)
    assert s.lo == 0
    assert s.coeff(1).coeff(-1) == GaussRat(2)
    assert s.coeff(4).is_zero()
    with pytest.raises(ValueError):
        s.coeff(6)


def test_lseries_mul_window():
    a = lam(ql(0, 1), ltrunc=5, lo=1)
    b = lam(ql(0, 1), ql(0, 1), ltrunc=7, lo=2)
    p = a * b
    assert p.lo == 3
    assert p.ltrunc == min(5 + 2, 7 + 1)


def test_lseries_invert_lambda_laurent():
    f = LSeries.from_lambda_coeffs({2: Rat(3), 4: Rat(1)}, ltrunc=10)
    s = f.invert()
    assert s.lo == -2
    assert s.coeff(-2) == ql(0, Rat(1, 3))
    p = f * s
    assert p.coeff(0) == ql(0, 1)
    assert all(p.coeff(e).is_zero() for e in range(1, p.ltrunc))


def test_lseries_invert_errors():
    with pytest.raises(ValueError, match="not invertible"):
        LSeries(0, (QLaurent(0, (), trunc=3),), ltrunc=4).invert()
    with pytest.raises(ValueError, match="below O"):
        LSeries(2, (), ltrunc=2).invert()
    with pytest.raises(ZeroDivisionError):
        LSeries().invert()
    with pytest.raises(ValueError, match="multi-term"):
        LSeries.from_lambda_coeffs({0: 1, 4: -1}).invert()


def test_lseries_exp():
    x = LSeries.from_lambda_coeffs({1: 1}, ltrunc=6)
    e = x.exp_series()
    assert e.coeff(0) == ql(0, 1)
    assert e.coeff(3) == ql(0, Rat(1, 6))
    assert e.coeff(5) == ql(0, Rat(1, 120))
    with pytest.raises(ValueError):
        LSeries.from_lambda_coeffs({0: 1}, ltrunc=4).exp_series()


def test_lseries_binom_sqrt():
    x = LSeries.from_lambda_coeffs({0: 1, 2: 2, 4: 1}, ltrunc=10)
    r = x.binom_sqrt()
    assert r == LSeries.from_lambda_coeffs({0: 1, 2: 1}, ltrunc=10)
    with pytest.raises(ValueError):
        LSeries.from_lambda_coeffs({0: 4}, ltrunc=6).binom_sqrt()


def test_lseries_truncations():
    s = lam(ql(-2, 1, 1, 1, 1, 1), ql(0, 1), ltrunc=8)
    t = s.truncate_q(1)
    assert t.coeff(0).trunc == 1
    assert t.coeff(0).coeff(0) == GaussRat(1)
    u = s.truncate_lambda(1)
    assert u.ltrunc == 1
    v = s.principal_part()
    assert v.coeff(0).trunc is None
    assert v.coeff(0).coeff(0) == GaussRat(1)


def test_lseries_coeff_q0():
    s = lam(ql(0, 3), ql(-1, 1), ql(0, 0), ltrunc=9)
    d = s.coeff_q0()
    assert d == {0: GaussRat(3)}


def test_lseries_json_round_trip():
    s = lam(ql(-1, GaussRat(1, 1), 2, trunc=4), ql(0, Rat(1, 2)), ltrunc=7, lo=2)
    assert LSeries.from_json(s.to_json()) == s


lseries_small = st.builds(
    LSeries,
    st.integers(0, 2),
    st.lists(qlaurents, max_size=3),
    st.one_of(st.none(), st.integers(4, 8)),
)


@given(lseries_small, lseries_small)
@settings(max_examples=40)
def test_lseries_commutativity(a, b):
    assert a * b == b * a
    assert a + b == b + a


def test_lambda_rational_canonical():
    r = LambdaRational({4: Rat(1), 8: Rat(2)}, lpow=2, dpow=0)
    assert r.lpow == -2
    assert r.numer == {0: Rat(1), 4: Rat(2)}
    # (1 - L^4) cancels against dpow
    c = LambdaRational({0: Rat(1), 4: Rat(-1)}, dpow=3)
    assert c.dpow == 2
    assert c.numer == {0: Rat(1)}
    z = LambdaRational({}, lpow=5, dpow=2)
    assert z.is_zero() and z.lpow == 0 and z.dpow == 0


def test_lambda_rational_expand():
    r = LambdaRational({0: Rat(1)}, dpow=1)
    s = r.expand(13)
    assert s.coeff_q0() == {0: GaussRat(1), 4: GaussRat(1), 8: GaussRat(1), 12: GaussRat(1)}
    t = LambdaRational({0: Rat(3), 2: Rat(-1)}, lpow=2, dpow=2).expand(9)
    # 3 - L^2 times (1 + 2 L^4 + ...) shifted down by 2
    assert t.coeff(-2) == ql(0, 3)
    assert t.coeff(0) == ql(0, -1)
    assert t.coeff(2) == ql(0, 6)
    assert t.coeff(4) == ql(0, -2)


def test_lambda_rational_palindromic():
    assert LambdaRational({0: Rat(1), 4: Rat(7), 8: Rat(1)}).is_palindromic()
    assert not LambdaRational({0: Rat(1), 4: Rat(7), 8: Rat(2)}).is_palindromic()
    assert LambdaRational({0: Rat(1), 3: Rat(1)}).is_palindromic()
    assert LambdaRational({}).is_palindromic()


def test_lambda_rational_numer_at_one():
    assert LambdaRational({0: Rat(1), 8: Rat(6), 12: Rat(1)}).numer_at_one() == 8


def test_lambda_rational_arithmetic():
    a = LambdaRational({0: Rat(1)}, dpow=1)
    b = LambdaRational({0: Rat(1)})
    diff = a - b
    # 1/(1-L^4) - 1 = L^4/(1-L^4)
    assert diff.lpow == -4 and diff.dpow == 1 and diff.numer == {0: Rat(1)}
    sq = a * a
    assert sq.dpow == 2
    assert (a * 2).numer == {0: Rat(2)}


def test_lambda_rational_json_round_trip():
    r = LambdaRational({0: Rat(1), 8: Rat(-3, 2)}, lpow=-1, dpow=5)
    assert LambdaRational.from_json_fields(r.to_json_fields()) == r


def test_rational_reconstruct_round_trip():
    r = LambdaRational({0: Rat(1), 8: Rat(6), 12: Rat(1)}, lpow=0, dpow=15)
    s = r.expand(80)
    got = rational_reconstruct(s, 0, 15)
    assert got == r
    # with a Lambda prefactor
    r2 = LambdaRational({0: Rat(1), 4: Rat(6)}, lpow=-3, dpow=2)
    assert rational_reconstruct(r2.expand(40), -3, 2) == r2


def test_rational_reconstruct_guard_failure():
    r = LambdaRational({0: Rat(1)}, dpow=3)
    s = r.expand(14)
    with pytest.raises(ValueError, match="not certified"):
        rational_reconstruct(s, 0, 2)
    with pytest.raises(ValueError, match="vanishing"):
        rational_reconstruct(r.expand(10), 0, 3, guard=20)


def test_rational_reconstruct_pole_rejected():
    s = LambdaRational({0: Rat(1)}, lpow=2).expand(30)
    with pytest.raises(ValueError, match="pole"):
        rational_reconstruct(s, 0, 0)
    assert rational_reconstruct(s, 2, 0).lpow == 2


def test_rational_reconstruct_rejects_q_dependence():
    s = LSeries(0, (ql(-1, 1, 1),), ltrunc=30)
    with pytest.raises(ValueError, match="q-dependence"):
        rational_reconstruct(s, 0, 0)


@given(
    st.dictionaries(st.integers(0, 3).map(lambda k: 4 * k), st.builds(Rat, small, st.integers(1, 9)), max_size=4),
    st.integers(0, 6),
)
@settings(max_examples=40)
def test_rational_reconstruct_random(numer, dpow):
    r = LambdaRational(dict(numer), dpow=dpow)
    if r.is_zero():
        return
    s = r.expand(4 * dpow + max(r.numer) + 40)
    assert rational_reconstruct(s, -r.lpow if r.lpow < 0 else 0, dpow) == r
