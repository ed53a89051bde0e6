"""Boundary-limit invariants: series, closed forms, and kernel principal parts."""

import pytest
from gmpy2 import mpq

from kdongen._grid import VW
from kdongen.boundary import (
    BoundarySpec,
    _expand,
    _rational_part,
    fplus_closed,
    fplus_series,
    principal_part_vector,
    _PP_EXTRA,
)
from kdongen.lattice import P1xP1, P2, hatP2, tildeP2
from kdongen.scalars import Rat
from kdongen.series import LambdaRational
from kdongen.theta import shared_context

Q = P1xP1()
H = hatP2()

ONE = LambdaRational({0: 1})


def lam(coeffs, dpow=0):
    return LambdaRational(coeffs, 0, dpow)


def test_series_example_geometric():
    # chi_F(F) = 1/(1-L^4)^2 - 1
    got = fplus_series(BoundarySpec(Q, "F", 1, 0, 0), 24)
    assert got == {4 * k: Rat(k + 1) for k in range(1, 7)}


def test_series_example_pure_polynomial():
    # chi_0(0, P^4) is already a polynomial: -64L^4 + 18L^8 + 2L^12
    got = fplus_series(BoundarySpec(Q, "0", 0, 0, 4), 16)
    assert got == {4: Rat(-64), 8: Rat(18), 12: Rat(2)}


def test_series_example_two_gee():
    # chi_F(3F+2G) on the one-point blowup: (3L^4 + L^12)/(1-L^4)^12
    closed = fplus_closed(BoundarySpec(H, "F", 3, 2, 0))
    assert closed == lam({4: 3, 12: 1}, dpow=12)
    got = fplus_series(BoundarySpec(H, "F", 3, 2, 0), 20)
    assert got == _expand(closed, 20)


def test_series_order_validation():
    with pytest.raises(ValueError, match="order must be"):
        fplus_series(BoundarySpec(Q, "F", 1, 0, 0), -1)


def test_series_m3_supported():
    # no closed form beyond m = 2, but the series itself is defined
    got = fplus_series(BoundarySpec(Q, "F", 0, 3, 1), 16)
    assert got and all(d % 4 == 0 for d in got)
    with pytest.raises(ValueError, match="m <= 2"):
        fplus_closed(BoundarySpec(Q, "F", 0, 3, 1))


def test_closed_m0():
    # chi_F(nF) = 1/(1-L^4)^{n+1} - 1, any integer n
    assert fplus_closed(BoundarySpec(Q, "F", 4, 0, 0)) == lam({0: 1}, dpow=5) - ONE
    assert fplus_closed(BoundarySpec(Q, "F", -2, 0, 0)) == lam({4: -1})
    # point powers give pure polynomials: h0_1(5) = 24L^4, hbar0_1(2) = -24L^4 + 59L^8
    assert fplus_closed(BoundarySpec(Q, "F", 5, 0, 2)) == lam({4: 24})
    assert fplus_closed(BoundarySpec(Q, "0", 2, 0, 2)) == lam({4: -24, 8: 59})


def test_closed_m1():
    # h1_0 = -1: chi_F(nF+G, P) = 1/(1-L^4)^{2n+1} - 1
    assert fplus_closed(BoundarySpec(Q, "F", 4, 1, 1)) == lam({0: 1}, dpow=9) - ONE
    assert fplus_closed(BoundarySpec(H, "F", Rat(7, 2), 1, 1)) == lam({0: 1}, dpow=8) - ONE
    # folding case: rational part 1/(1-L^4)^{2n+1-2r} with nonpositive exponent
    # chi_F(F+G, P^5) = (1-L^4) + h1_2(1) = 48L^4 - 31L^8
    assert fplus_closed(BoundarySpec(Q, "F", 1, 1, 5)) == lam({4: 48, 8: -31})
    # half-integer n on the blowup: chi_0(F/2+G, P^2) = 1/(1-L^4) + hbar1_1(1/2)
    got = fplus_closed(BoundarySpec(H, "0", Rat(1, 2), 1, 2))
    assert got == lam({0: 1}, dpow=1) + lam({0: -1, 4: -23, 8: Rat(103, 2)})


def test_closed_m2_point_powers():
    # chi_F(3F+2G, P^4) = 2(1+L^4)/(1-L^4)^8 + h2_2(3), h2_2(3) = -2 + 30L^4
    got = fplus_closed(BoundarySpec(Q, "F", 3, 2, 4))
    assert got - lam({0: 2, 4: 2}, dpow=8) == lam({0: -2, 4: 30})
    # chi_0(2F+2G, P^2) = (1+L^4)/(1-L^4)^7 + hbar2_1(2)
    got = fplus_closed(BoundarySpec(Q, "0", 2, 2, 2))
    assert got - lam({0: 1, 4: 1}, dpow=7) == lam({0: -1, 4: -40, 8: 247})
    assert fplus_closed(BoundarySpec(H, "F", 3, 2, 4)) == fplus_closed(BoundarySpec(Q, "F", 3, 2, 4))


def test_closed_m2_exceptional_term():
    # chi_0(nF+2G) carries the extra -1-(4n+9)L^4
    got = fplus_closed(BoundarySpec(Q, "0", 1, 2, 0))
    assert got == lam({0: 1}, dpow=6) - ONE - lam({4: 13})
    # the F-side has no residual at all
    assert fplus_closed(BoundarySpec(Q, "F", 2, 2, 0)) == lam({4: 2}, dpow=9)


def test_closed_m2_leaves_ring():
    for c1, n, r in (("F", 0, 2), ("0", 1, 4), ("F", -1, 0)):
        with pytest.raises(ArithmeticError, match="supported coefficient ring"):
            fplus_closed(BoundarySpec(Q, c1, n, 2, r))


def _valid_r(c1, m):
    want = (m if c1 == "F" else 0) % 2
    return [r for r in range(5) if r % 2 == want]


def test_closed_matches_series_at_forty():
    K = 40
    for X, nvals, ms in (
        (Q, range(-6, 7), (0, 1, 2)),
        (H, [Rat(k, 2) for k in range(-11, 12, 2)], (1,)),
        (H, (-6, -1, 0, 3, 6), (0, 2)),
    ):
        for c1 in ("F", "0"):
            for m in ms:
                for r in _valid_r(c1, m):
                    for n in nvals:
                        spec = BoundarySpec(X, c1, n, m, r)
                        if m == 2 and int(n) < r // 2:
                            with pytest.raises(ArithmeticError):
                                fplus_closed(spec)
                            continue
                        closed = fplus_closed(spec)
                        assert _expand(closed, K) == {
                            d: c for d, c in fplus_series(spec, K).items() if d <= K
                        }, spec


def test_spec_validation():
    with pytest.raises(ValueError, match="quadric or the one-point blowup"):
        BoundarySpec(P2(), "F", 1, 0, 0)
    with pytest.raises(ValueError, match="quadric or the one-point blowup"):
        BoundarySpec(tildeP2(), "F", 1, 0, 0)
    with pytest.raises(ValueError, match="c1 must be"):
        BoundarySpec(Q, "G", 1, 0, 0)
    with pytest.raises(ValueError, match="parity violation"):
        BoundarySpec(Q, "F", 1, 1, 2)
    with pytest.raises(ValueError, match="parity violation"):
        BoundarySpec(Q, "0", 1, 0, 1)
    # integrality of nF+mG: the blowup needs n integral for even m,
    # half-integral for m = 1; the quadric always needs n integral
    with pytest.raises(ValueError, match="not an integral class"):
        BoundarySpec(H, "F", Rat(1, 2), 0, 0)
    with pytest.raises(ValueError, match="not an integral class"):
        BoundarySpec(H, "F", 1, 1, 1)
    with pytest.raises(ValueError, match="not an integral class"):
        BoundarySpec(Q, "F", Rat(1, 2), 1, 1)
    with pytest.raises(ValueError, match="integer or half-integer"):
        BoundarySpec(Q, "F", Rat(1, 3), 0, 0)
    assert BoundarySpec(Q, 0, 1, 0, 0).c1 == "0"


G_EXPECTED = {
    (1, 1): {(1, 0): Rat(1), (0, 1): Rat(-4)},
    (2, 1): {(1, 0): Rat(-1), (2, 0): Rat(1, 2), (0, 1): Rat(-8), (1, 1): Rat(-1), (0, 2): Rat(-1)},
    (3, 1): {(1, 0): Rat(1), (0, 1): Rat(-5)},
    (3, 2): {(1, 0): Rat(4), (2, 0): Rat(-1), (0, 1): Rat(-20), (1, 1): Rat(9), (0, 2): Rat(-23)},
    (4, 1): {(1, 0): Rat(-1, 2), (2, 0): Rat(1, 2), (0, 1): Rat(-11), (0, 2): Rat(-1, 2)},
    # the (1, 2) entry is +1/2: certified below against the residual
    # recursion, which reproduces the tanh-free series at three distinct n
    (5, 1): {(2, 0): Rat(1, 2), (0, 1): Rat(-12), (1, 1): Rat(2), (0, 2): Rat(4), (1, 2): Rat(1, 2), (0, 3): Rat(5)},
}


def test_principal_part_values():
    for (i, r), want in G_EXPECTED.items():
        assert principal_part_vector(i, r) == want, (i, r)


def test_principal_part_boxes():
    for i in range(1, 6):
        for r in (1, 2, 3):
            v = principal_part_vector(i, r)
            assert v and max(a + b for a, b in v) <= r + _PP_EXTRA[i]


def test_principal_part_errors():
    with pytest.raises(ValueError, match="kernel index"):
        principal_part_vector(0, 1)
    with pytest.raises(ValueError, match="kernel index"):
        principal_part_vector(6, 1)
    with pytest.raises(ValueError, match="point index"):
        principal_part_vector(3, 0)


def test_third_kernel_collapses_to_lambda4():
    # P[(1/(2 sinh(3h/2))) M (thetatilde_4^3 (1-L^4) - 1) u' h* L^2] = L^4
    ctx = shared_context(1, 17)
    one = VW.monomial(0, 0, ctx.vtrunc, ctx.wcap)
    lam4 = VW.monomial(4, 1, ctx.vtrunc, ctx.wcap)
    comb = ctx._M_pow(1) * (ctx._theta4t_pow(3) * (one - lam4) - one)
    prod = ctx._lam2_uprime() * comb * ctx._hstar() * ctx._inv_sinh(mpq(3, 2)).scale(mpq(1, 2))
    found = {}
    for s in range(prod.vtrunc):
        for t in range(s // 4 + 1):
            c = prod.stored(s, t)
            if c:
                found[(s, t)] = c
    assert found == {(4, 1): Rat(1)}


def test_fifth_kernel_recursion_certificate():
    # -1/2 Coeff_q0[tanh th4t^{8(n+2)} M^2 u'h*L^2] evaluated two ways:
    # directly via 2 chi_F(nF+2G, P^2) + chi_0((2n+2)F, P^2), and through
    # the recursion s'_1(n) = (1-L^4)^2 s'_0(n) + s'_0(n-1)
    #                        + Coeff_q0[th4t^{8(n+1)} g_5^1]
    # with s'_0(n) = -1 - (4n+9)L^4.  Agreement at distinct n pins every
    # entry of g_5^1, including the sign of the (1, 2) coefficient.
    depth = 21
    g51 = principal_part_vector(5, 1)
    smax = max(2 * a + 4 * b for a, b in g51)
    ctx = shared_context(1, depth + smax + 1)
    rows: dict[int, list] = {}
    for (a, b), v in g51.items():
        s = 2 * a + 4 * b
        row = rows.setdefault(s, [mpq(0)] * (ctx.wcap + 1))
        vv = mpq(v.num, v.den)
        row[b] = row[b] + (vv if a % 2 == 0 else -vv)
    gv = VW.from_stored_rows(rows, ctx.vtrunc, ctx.wcap)
    for n in (1, 2, 3):
        direct: dict[int, Rat] = {}
        for d, c in fplus_series(BoundarySpec(Q, "F", n, 2, 2), depth).items():
            direct[d] = direct.get(d, Rat(0)) + 2 * c
        for d, c in fplus_series(BoundarySpec(Q, "0", 2 * n + 2, 0, 2), depth).items():
            direct[d] = direct.get(d, Rat(0)) + c
        direct = {d: c for d, c in direct.items() if c and d <= depth}
        s2 = (ctx._theta4t_pow(8 * (n + 1)) * gv).coeff_q0_lambda()
        pred = lam({0: 2}, dpow=3 * n + 1) * lam({e: c for e, c in _pm_pow_series_items(n - 1)})
        pred = pred + lam({0: -1, 4: -(4 * n + 9)}) * lam({0: 1, 4: -2, 8: 1})
        pred = pred + lam({0: -1, 4: -(4 * (n - 1) + 9)})
        pred = pred + lam({d: c for d, c in s2.items() if c})
        assert _expand(pred, depth) == direct, n


def _pm_pow_series_items(e):
    # (1+L^4)^e for e >= 0, as plain items
    out, c = {0: Rat(1)}, Rat(1)
    for k in range(1, e + 1):
        c = c * Rat(e - k + 1, k)
        out[4 * k] = c
    return out.items()


def test_rational_part_shapes():
    assert _rational_part(BoundarySpec(Q, "F", 3, 0, 2)) == LambdaRational({})
    assert _rational_part(BoundarySpec(Q, "0", 3, 0, 0)) == lam({0: 1}, dpow=4)
    assert _rational_part(BoundarySpec(Q, "F", 1, 1, 5)) == lam({0: 1, 4: -1})
    assert _rational_part(BoundarySpec(Q, "F", 2, 2, 0)) == lam({4: 2}, dpow=9)
    assert _rational_part(BoundarySpec(Q, "0", 3, 2, 4)) == lam({0: 2, 4: 2}, dpow=8)
