import pytest
from gmpy2 import mpq

from helpers import qcontent
from kdongen.scalars import GaussRat, Rat
from kdongen.series import QLaurent
from kdongen.theta import ThetaContext

CTX = ThetaContext(20, 20)


def test_theta_constants():
    t2 = CTX.theta_const(2)
    assert t2.coeff(1) == GaussRat(2)
    assert t2.coeff(9) == GaussRat(2)
    assert t2.coeff(2) == GaussRat(0)
    t3 = CTX.theta_const(3)
    assert t3.coeff(0) == GaussRat(1)
    assert t3.coeff(4) == GaussRat(2)
    t4 = CTX.theta_const(4)
    assert t4.coeff(0) == GaussRat(1)
    assert t4.coeff(4) == GaussRat(-2)
    assert t4.coeff(16) == GaussRat(2)


def test_theta1_constant_rejected():
    with pytest.raises(ValueError):
        CTX.theta_const(1)


def test_u_series_prefix():
    u = CTX.u_series()
    assert u.coeff(-2) == GaussRat(Rat(-1, 4))
    assert u.coeff(2) == GaussRat(-5)
    assert u.coeff(6) == GaussRat(Rat(31, 2))
    assert u.coeff(10) == GaussRat(-54)
    assert all(u.coeff(e) == GaussRat(0) for e in range(-2, u.trunc) if e % 4 != 2)


def test_jacobi_quartic():
    # theta_3^4 = theta_2^4 + theta_4^4
    t2 = CTX.theta_const(2)
    t3 = CTX.theta_const(3)
    t4 = CTX.theta_const(4)
    d = t3 * t3 * t3 * t3 - t2 * t2 * t2 * t2 - t4 * t4 * t4 * t4
    assert d.is_zero()
    assert d.trunc is not None


def _theta_terms(k, nmax, qmul=0):
    """Formal terms of theta_k with y -> y q^qmul, as {(qexp, yexp): coeff}."""
    out = {}
    for n in range(-nmax, nmax + 1):
        if k == 1:
            qe, ye, c = (2 * n + 1) ** 2, 2 * n + 1, GaussRat.i_power(2 * n - 1)
        elif k == 4:
            qe, ye, c = (2 * n) ** 2, 2 * n, GaussRat.i_power(2 * n)
        else:
            raise ValueError(k)
        out[(qe + qmul * ye, ye)] = c
    return out


@pytest.mark.parametrize("k", [1, 4])
def test_quasi_periodicity_under_translation(k):
    # theta(h) == -q^4 y^2 theta(h + 2 pi i tau) as formal (q, y) sums
    nmax = 6
    direct = _theta_terms(k, nmax)
    shifted = _theta_terms(k, nmax, qmul=4)
    moved = {(qe + 4, ye + 2): -c for (qe, ye), c in shifted.items()}
    window = {key: c for key, c in direct.items() if abs(key[1]) <= 2 * nmax - 2}
    for key, c in window.items():
        assert moved.get(key) == c, key


def test_h_structure():
    h = CTX.h_of_lambda()
    assert h.lo == 1
    for s in range(h.lo, h.ltrunc):
        slot = h.coeff(s)
        if s % 2 == 0:
            assert slot.is_zero()
            continue
        for e in range(slot.lo, slot.trunc):
            c = slot.coeff(e)
            if c != GaussRat(0):
                assert c.re == Rat(0), (s, e)
                assert (e + s) % 4 == 0, (s, e)
    s1 = h.coeff(1)
    assert s1.lo == -1 and s1.coeff(-1) == GaussRat(0, 1)
    assert s1.coeff(3) == GaussRat(0, -2)
    s3 = h.coeff(3)
    assert s3.coeff(-3) == GaussRat(0, Rat(1, 24))


def test_exp_group_laws():
    e1 = CTX._exp_lh(1)
    eh = CTX._exp_lh(mpq(1, 2))
    e32 = CTX._exp_lh(mpq(3, 2))
    assert (eh * eh - e1).is_zero()
    assert (e1 * eh - e32).is_zero()
    em = CTX._exp_lh(-1)
    one = type(e1).monomial(0, 0, e1.vtrunc, e1.wcap)
    assert (e1 * em - one).is_zero()


def test_hyperbolic_identities():
    c, s = CTX._cosh(1), CTX._sinh(1)
    one = type(c).monomial(0, 0, c.vtrunc, c.wcap)
    assert (c * c - s * s - one).is_zero()
    p = CTX._coth(1) * CTX._tanh(1)
    assert (p - one.restrict(vtrunc=p.vtrunc)).is_zero()
    # sinh(2h) = 2 sinh(h) cosh(h)
    d = CTX._sinh(2) - (s * c).scale(2)
    assert d.is_zero()
    # splitting used for the m = 2 boundary kernel: 1/sinh(2h) = (coth - tanh)/2
    d2 = CTX._inv_sinh(2) - (CTX._coth(1) - CTX._tanh(1)).scale(mpq(1, 2))
    assert d2.is_zero()


def test_singular_arguments_rejected():
    for fn in (CTX.coth_lh, CTX.inv_sinh_lh):
        with pytest.raises(ValueError):
            fn(0)
    with pytest.raises(ValueError):
        CTX.exp_lh(Rat(1, 3))


def test_theta4t_prefix():
    t = CTX.theta4t_h_pow(1)
    assert qcontent(t.coeff(0), {0: 1})
    assert t.coeff(2).coeff(2) == GaussRat(1)
    assert qcontent(CTX.theta4t_h_pow(0).coeff(0), {0: 1})
    # negative powers invert: e and -e multiply to 1
    p = CTX._theta4t_pow(3) * CTX._theta4t_pow(-3)
    one = type(p).monomial(0, 0, p.vtrunc, p.wcap)
    assert (p - one).is_zero()


def test_blowup_factor_identity_n2():
    # theta4t(2h) / theta4t(h)^4 == 1 - Lambda^4
    lhs = CTX._theta4t_n(2) * CTX._theta4t_pow(-4)
    VW = type(lhs)
    rhs = VW.monomial(0, 0, lhs.vtrunc, lhs.wcap) - VW.monomial(4, 1, lhs.vtrunc, lhs.wcap)
    assert (lhs - rhs).is_zero()


def test_M_two_routes_agree():
    assert (CTX._M() - CTX._M_quotient()).is_zero()


def test_M_series_prefix():
    M = CTX.M_series()
    assert qcontent(M.coeff(0), {0: 2})
    assert M.coeff(2).coeff(-2) == GaussRat(Rat(-1, 4))
    assert M.coeff(2).coeff(2) == GaussRat(-5)
    # principal part of M^2: 4 - q^-2 L^2 + 4 L^4
    m2 = (CTX._M() * CTX._M()).to_lseries().principal_part()
    assert m2.coeff(0) == QLaurent(0, (4,))
    assert m2.coeff(2) == QLaurent(-2, (-1,))
    assert m2.coeff(4) == QLaurent(0, (4,))
    assert all(m2.coeff(s).is_zero() for s in range(5, m2.ltrunc))


def test_lambda_round_trip():
    assert CTX.lambda_of_h_check()


def test_hstar_is_lambda_dh():
    h = CTX.h_of_lambda()
    hs = CTX.hstar_series()
    for s in range(1, min(h.ltrunc, hs.ltrunc)):
        assert hs.coeff(s) == h.coeff(s) * s


def test_uprime_series_prefix():
    up = CTX.uprime_series()
    assert up.coeff(-2) == GaussRat(Rat(1, 2))
    assert up.coeff(2) == GaussRat(-10)
    assert all(up.coeff(e) == GaussRat(0) for e in range(-2, up.trunc) if e % 4 != 2)


def test_memoization_returns_same_object():
    assert CTX._M() is CTX._M()
    assert CTX._h() is CTX._h()
    assert CTX._exp_lh(1) is CTX._exp_lh(mpq(2, 2))


def test_context_depth_agreement():
    shallow = ThetaContext(12, 12)
    deep = ThetaContext(16, 16)
    hs, hd = shallow.h_of_lambda(), deep.h_of_lambda()
    for s in range(1, hs.ltrunc):
        a, b = hs.coeff(s), hd.coeff(s)
        hi = min(a.trunc, b.trunc)
        for e in range(min(a.lo, b.lo), hi):
            assert a.coeff(e) == b.coeff(e), (s, e)
    us, ud = shallow.u_series(), deep.u_series()
    for e in range(us.lo, us.trunc):
        assert us.coeff(e) == ud.coeff(e)
