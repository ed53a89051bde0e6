"""Surface lattices, class arithmetic, and wall enumeration."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kdongen.lattice import (
    P2,
    P1xP1,
    Surface,
    SurfaceClass,
    blowup_P2,
    hatP2,
    is_wall_class,
    pair,
    square,
    tildeP2,
    walls_hatP2_F_to_H,
    walls_tildeP2_H_to_FG,
)
from kdongen.scalars import Rat

HALF = Rat(1, 2)
ONE = Rat(1)


def test_surface_invariants():
    assert P2().sigma == 1 and P2().rank == 1
    assert P1xP1().sigma == 0
    assert hatP2().sigma == 0 and tildeP2().sigma == -1
    assert blowup_P2(5).sigma == -4
    assert str(P2().K) == "-3H"
    assert str(tildeP2().K) == "-3H+E1+E2"
    assert str(P1xP1().K) == "-2F-2G"
    with pytest.raises(ValueError, match="symmetric"):
        Surface("bad", ((0, 1), (2, 0)), (0, 0), 0, ("A", "B"))
    with pytest.raises(ValueError, match="unimodular"):
        Surface("bad", ((2,),), (0,), 1, ("A",))
    with pytest.raises(ValueError, match="signature"):
        Surface("bad", ((-1,),), (1,), 1, ("A",))
    with pytest.raises(ValueError, match="characteristic"):
        Surface("bad", ((1, 0), (0, -1)), (0, 0), 0, ("A", "B"))


def test_pair_square_examples():
    h2 = hatP2()
    assert pair(h2.cls("F"), h2.cls("G")) == 1
    assert square(h2.cls("F")) == 0 and square(h2.cls("G")) == 0
    t2 = tildeP2()
    assert pair(t2.cls("H"), t2.cls("E1")) == 0
    assert square(t2.cls("E1")) == -1 and square(t2.cls("E2")) == -1
    assert square(t2.cls("2H-E1-E2")) == 2
    with pytest.raises(ValueError, match="different surfaces"):
        pair(h2.cls("H"), P2().cls("H"))


def test_class_parse_and_str():
    t2 = tildeP2()
    assert str(t2.cls("4H-2E1-2E2")) == "4H-2E1-2E2"
    assert str(P1xP1().cls("3F+2G")) == "3F+2G"
    # aliases resolve into the basis, halves and all
    h2 = hatP2()
    assert str(h2.cls("-F+G")) == "-1/2H+3/2E"
    assert h2.cls("2G-F") == h2.cls("2E")
    assert str(h2.cls("0")) == "0"
    assert h2.cls("F") - h2.cls("2G") == h2.cls("-2E")
    assert h2.cls("G") * 2 == h2.cls("H") + h2.cls("E")
    with pytest.raises(ValueError, match="unknown class label"):
        t2.cls("2H-3X")
    with pytest.raises(ValueError, match="cannot parse"):
        t2.cls("2H--E1")
    with pytest.raises(ValueError, match="half-integer"):
        h2.cls("1/3H")
    with pytest.raises(ValueError, match="half-integer"):
        h2.cls("H") * Rat(1, 4)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-9, 9), min_size=3, max_size=3))
def test_class_string_round_trip(doubled):
    t2 = tildeP2()
    c = SurfaceClass(t2, [Rat(x, 2) for x in doubled])
    assert t2.cls(str(c)) == c


def test_is_wall_class():
    q = P1xP1()
    h2 = hatP2()
    # the wall 2G-F of type F lives on the quadric; on the one-point blowup
    # (xi+c1)/2 = G is not integral, so the parity condition fails there
    assert is_wall_class(q.cls("2G-F"), q.cls("F"), 4)
    assert not is_wall_class(h2.cls("2G-F"), h2.cls("F"), 4)
    assert not is_wall_class(P2().cls("H"), P2().zero(), 100)
    assert is_wall_class(h2.cls("-2E"), h2.zero(), 4)
    assert not is_wall_class(h2.cls("-2E"), h2.zero(), 3)
    with pytest.raises(ValueError, match="integral"):
        is_wall_class(h2.cls("G"), h2.zero(), 4)
    with pytest.raises(ValueError, match="different surfaces"):
        is_wall_class(q.cls("F"), h2.cls("F"), 0)


def test_walls_ruled_examples():
    q = P1xP1()
    h2 = hatP2()
    w = walls_hatP2_F_to_H(q.cls("F"), q.cls("-F+G"), 1)
    assert w == [(q.cls("F-2G"), HALF)]
    w = walls_hatP2_F_to_H(h2.zero(), h2.cls("4H-3E"), 0)
    assert w == [(h2.cls("-4E"), HALF), (h2.cls("-2E"), HALF)]
    w = walls_hatP2_F_to_H(h2.zero(), h2.cls("4H-2E"), 0)
    assert w == [(h2.cls("-2E"), HALF)]


def test_walls_ruled_orientation_and_weights():
    q = P1xP1()
    omega = SurfaceClass(q, [HALF, ONE])
    for c1, L, r in [
        (q.zero(), q.cls("3F"), 4),
        (q.cls("F"), q.cls("2F+G"), 3),
        (q.zero(), q.cls("2F+2G"), 2),
    ]:
        for xi, w in walls_hatP2_F_to_H(c1, L, r):
            assert pair(xi, omega) >= 0 > pair(xi, q.cls("F"))
            assert w == (HALF if pair(xi, omega) == 0 else ONE)
            assert all((a + b) % 4 == 0 for a, b in zip(xi.d, c1.d))
            assert -square(xi) <= abs(pair(xi, L - q.K)) + r + 2
            # the opposite orientation is never returned
            assert not (pair(-xi, omega) >= 0 > pair(-xi, q.cls("F")))


def test_walls_ruled_errors():
    q = P1xP1()
    with pytest.raises(ValueError, match="unsupported L shape"):
        walls_hatP2_F_to_H(q.zero(), q.cls("3G"), 0)
    with pytest.raises(ValueError, match="not finite"):
        walls_hatP2_F_to_H(q.zero(), q.cls("2G"), 2)
    with pytest.raises(ValueError, match="c1 must be"):
        walls_hatP2_F_to_H(q.cls("G"), q.cls("2F"), 0)
    with pytest.raises(ValueError, match="quadric or the one-point blowup"):
        walls_hatP2_F_to_H(P2().zero(), P2().cls("H"), 0)


def _brute_tilde(c1, L, r, pad):
    """Independent scan: orientation, parity, and filter straight from the rules."""
    t2 = tildeP2()
    l0 = L.d[0] // 2
    d = l0 if L.d[1] == 0 else l0 - 1
    box = 4 * (abs(d + 3) + r + 4) + pad
    g0, g1, g2 = (L - t2.K).d
    found = []
    for a in range(-box, 1):
        for b1 in range(-box, box + 1):
            for b2 in range(-(box - abs(b1)), box - abs(b1) + 1):
                if a > 0 or 2 * a - b1 - b2 < 0 or (a == 0 and b1 + b2 == 0):
                    continue
                xi_d = (2 * a, -2 * b1, -2 * b2)
                if any((x + y) % 4 for x, y in zip(xi_d, c1.d)):
                    continue
                # -xi^2 <= |<xi, L-K>| + r + 2, scaled by 2 to stay integral
                if 2 * (b1 * b1 + b2 * b2 - a * a) > abs(a * g0 + b1 * g1 + b2 * g2) + 2 * r + 4:
                    continue
                w = HALF if 2 * a - b1 - b2 == 0 else ONE
                found.append((SurfaceClass._make(t2, xi_d), w))
    return sorted(found, key=lambda t: t[0].d)


def test_walls_tilde_matches_brute_force():
    t2 = tildeP2()
    got = walls_tildeP2_H_to_FG(t2.cls("E"), t2.cls("3H"), 2)
    assert got == _brute_tilde(t2.cls("E"), t2.cls("3H"), 2, pad=6)
    got = walls_tildeP2_H_to_FG(t2.cls("F"), t2.cls("2H"), 0)
    assert got == _brute_tilde(t2.cls("F"), t2.cls("2H"), 0, pad=6)
    assert got == [(t2.cls("-H+E1+2E2"), ONE)]
    got = walls_tildeP2_H_to_FG(t2.cls("H"), t2.cls("3H-E1-E2"), 1)
    assert got == _brute_tilde(t2.cls("H"), t2.cls("3H-E1-E2"), 1, pad=6)


def test_walls_tilde_symmetry_and_orientation():
    t2 = tildeP2()
    swap = lambda c: SurfaceClass._make(t2, (c.d[0], c.d[2], c.d[1]))
    for L in [t2.cls("2H"), t2.cls("3H-E1-E2")]:
        walls = walls_tildeP2_H_to_FG(t2.cls("E"), L, 1)
        assert {(swap(x), w) for x, w in walls} == set(walls)
        for xi, w in walls:
            assert pair(t2.cls("H"), xi) < 0 <= pair(t2.cls("2H-E1-E2"), xi)
            assert w == (HALF if pair(t2.cls("2H-E1-E2"), xi) == 0 else ONE)
            assert all((a + b) % 4 == 0 for a, b in zip(xi.d, t2.cls("E").d))


def test_walls_tilde_errors():
    t2 = tildeP2()
    with pytest.raises(ValueError, match="c1 must be"):
        walls_tildeP2_H_to_FG(t2.cls("G"), t2.cls("2H"), 0)
    with pytest.raises(ValueError, match="unsupported L shape"):
        walls_tildeP2_H_to_FG(t2.cls("E"), t2.cls("2H-E1"), 0)
    with pytest.raises(ValueError, match="two-point blowup"):
        walls_tildeP2_H_to_FG(hatP2().zero(), hatP2().cls("H"), 0)
