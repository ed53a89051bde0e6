"""Rational surface lattices and bounded enumeration of chamber walls."""

from __future__ import annotations

import re
from functools import lru_cache

from gmpy2 import mpq

from .scalars import Rat

__all__ = [
    "Surface",
    "SurfaceClass",
    "P2",
    "blowup_P2",
    "hatP2",
    "tildeP2",
    "P1xP1",
    "pair",
    "square",
    "is_wall_class",
    "walls_hatP2_F_to_H",
    "walls_tildeP2_H_to_FG",
]


def _ceil_q(x: mpq) -> int:
    return int(-((-x.numerator) // x.denominator))


def _sym_signature(gram):
    """Signature (pos, neg) of a symmetric rational matrix via congruence moves."""
    n = len(gram)
    m = [[mpq(x) for x in row] for row in gram]
    pos = neg = 0
    for k in range(n):
        if m[k][k] == 0:
            piv = next((j for j in range(k + 1, n) if m[j][j] != 0), None)
            if piv is not None:
                m[k], m[piv] = m[piv], m[k]
                for row in m:
                    row[k], row[piv] = row[piv], row[k]
            else:
                hit = next(
                    ((i, j) for i in range(k, n) for j in range(i + 1, n) if m[i][j] != 0),
                    None,
                )
                if hit is None:
                    break
                i, j = hit
                for c in range(n):
                    m[i][c] += m[j][c]
                for row in m:
                    row[i] += row[j]
                if i != k:
                    m[k], m[i] = m[i], m[k]
                    for row in m:
                        row[k], row[i] = row[i], row[k]
        d = m[k][k]
        if d > 0:
            pos += 1
        else:
            neg += 1
        for i in range(k + 1, n):
            f = m[i][k] / d
            if f != 0:
                for c in range(n):
                    m[i][c] -= f * m[k][c]
                for row in m:
                    row[i] -= f * row[k]
    return pos, neg


def _det(gram) -> int:
    n = len(gram)
    m = [[mpq(x) for x in row] for row in gram]
    det = mpq(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k] != 0), None)
        if piv is None:
            return 0
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            det = -det
        det *= m[k][k]
        for i in range(k + 1, n):
            f = m[i][k] / m[k][k]
            if f != 0:
                for c in range(k, n):
                    m[i][c] -= f * m[k][c]
    assert det.denominator == 1
    return int(det)


_TERM_RE = re.compile(r"([+-]?)(\d+(?:/\d+)?)?([A-Za-z][A-Za-z0-9]*)")


class Surface:
    """A smooth rational surface: basis labels, intersection form, K, signature."""

    __slots__ = ("name", "rank", "gram", "sigma", "labels", "K", "_alias")

    def __init__(self, name, gram, K_coords, sigma, labels, alias=None):
        gram = tuple(tuple(int(x) for x in row) for row in gram)
        rank = len(gram)
        if any(len(row) != rank for row in gram):
            raise ValueError("intersection form must be square")
        if any(gram[i][j] != gram[j][i] for i in range(rank) for j in range(rank)):
            raise ValueError("intersection form must be symmetric")
        if _det(gram) not in (1, -1):
            raise ValueError("intersection form must be unimodular")
        if _sym_signature(gram) != (1, rank - 1):
            raise ValueError("intersection form must have signature (1, rank-1)")
        if len(labels) != rank:
            raise ValueError("one basis label per basis vector")
        K_coords = tuple(int(x) for x in K_coords)
        if len(K_coords) != rank:
            raise ValueError("canonical class needs one coordinate per basis vector")
        for i in range(rank):
            kv = sum(K_coords[j] * gram[j][i] for j in range(rank))
            if (kv - gram[i][i]) % 2:
                raise ValueError("canonical class must be characteristic")
        if sigma != 2 - rank:
            raise ValueError("signature value inconsistent with the rank")
        self.name = name
        self.rank = rank
        self.gram = gram
        self.sigma = sigma
        self.labels = tuple(labels)
        self.K = SurfaceClass._make(self, tuple(2 * k for k in K_coords))
        # label -> doubled coordinates, for parsing non-basis classes like F, G
        amap = {}
        for i, lab in enumerate(self.labels):
            amap[lab] = tuple(2 if j == i else 0 for j in range(rank))
        for lab, doubled in (alias or {}).items():
            amap[lab] = tuple(int(x) for x in doubled)
        self._alias = amap

    def _key(self):
        return (self.name, self.gram, self.labels, self.K.d, self.sigma)

    def __eq__(self, other):
        if not isinstance(other, Surface):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"Surface({self.name!r})"

    def zero(self) -> "SurfaceClass":
        return SurfaceClass._make(self, (0,) * self.rank)

    def cls(self, spec) -> "SurfaceClass":
        """Build a class from a string like "4H-2E1-2E2" or a coefficient sequence."""
        if isinstance(spec, SurfaceClass):
            if spec.surface != self:
                raise ValueError("classes live on different surfaces")
            return spec
        if isinstance(spec, str):
            return self._parse(spec)
        return SurfaceClass(self, spec)

    def _parse(self, text: str) -> "SurfaceClass":
        s = text.replace(" ", "")
        if s in ("0", "+0", "-0"):
            return self.zero()
        acc = [mpq(0)] * self.rank
        pos = 0
        while pos < len(s):
            mt = _TERM_RE.match(s, pos)
            if mt is None or (pos > 0 and mt.group(1) == ""):
                raise ValueError(f"cannot parse class string {text!r}")
            sign, coef, label = mt.groups()
            if label not in self._alias:
                raise ValueError(f"unknown class label {label!r} on {self.name}")
            c = mpq(coef) if coef else mpq(1)
            if sign == "-":
                c = -c
            doubled = self._alias[label]
            for i in range(self.rank):
                acc[i] += c * doubled[i]
            pos = mt.end()
        if any(x.denominator != 1 for x in acc):
            raise ValueError(f"class {text!r} is outside half-integer coordinates")
        return SurfaceClass._make(self, tuple(int(x) for x in acc))


class SurfaceClass:
    """A cohomology class stored in doubled coordinates so halves stay exact."""

    __slots__ = ("surface", "d")

    def __init__(self, surface: Surface, coeffs):
        coeffs = list(coeffs)
        if len(coeffs) != surface.rank:
            raise ValueError("one coefficient per basis vector")
        doubled = [2 * _coerce_q(c) for c in coeffs]
        if any(x.denominator != 1 for x in doubled):
            raise ValueError("class coordinates must be half-integers")
        self.surface = surface
        self.d = tuple(int(x) for x in doubled)

    @classmethod
    def _make(cls, surface: Surface, doubled) -> "SurfaceClass":
        obj = object.__new__(cls)
        obj.surface = surface
        obj.d = tuple(doubled)
        return obj

    def is_integral(self) -> bool:
        return all(x % 2 == 0 for x in self.d)

    def _same(self, other: "SurfaceClass"):
        if not isinstance(other, SurfaceClass):
            raise TypeError("expected a surface class")
        if self.surface != other.surface:
            raise ValueError("classes live on different surfaces")

    def pair(self, other: "SurfaceClass") -> Rat:
        self._same(other)
        g = self.surface.gram
        n = self.surface.rank
        acc = 0
        for i in range(n):
            di = self.d[i]
            if di:
                row = g[i]
                acc += di * sum(row[j] * other.d[j] for j in range(n) if other.d[j])
        return Rat(acc, 4)

    def square(self) -> Rat:
        return self.pair(self)

    def __add__(self, other):
        self._same(other)
        return SurfaceClass._make(self.surface, tuple(a + b for a, b in zip(self.d, other.d)))

    def __sub__(self, other):
        self._same(other)
        return SurfaceClass._make(self.surface, tuple(a - b for a, b in zip(self.d, other.d)))

    def __neg__(self):
        return SurfaceClass._make(self.surface, tuple(-a for a in self.d))

    def __mul__(self, k):
        kq = _coerce_q(k)
        doubled = [x * kq for x in self.d]
        if any(v.denominator != 1 for v in doubled):
            raise ValueError("scaled class leaves half-integer coordinates")
        return SurfaceClass._make(self.surface, tuple(int(v) for v in doubled))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, SurfaceClass):
            return NotImplemented
        return self.surface == other.surface and self.d == other.d

    def __hash__(self):
        return hash((self.surface, self.d))

    def __str__(self):
        parts = []
        for lab, dv in zip(self.surface.labels, self.d):
            c = mpq(dv, 2)
            if c == 0:
                continue
            mag = abs(c)
            coef = "" if mag == 1 else str(mag)
            sign = "-" if c < 0 else ("+" if parts else "")
            parts.append(f"{sign}{coef}{lab}")
        return "".join(parts) if parts else "0"

    def __repr__(self):
        return f"<{self} on {self.surface.name}>"


def _coerce_q(x) -> mpq:
    if isinstance(x, Rat):
        return mpq(x.num, x.den)
    return mpq(x)


@lru_cache(maxsize=None)
def P2() -> Surface:
    """The projective plane with its hyperplane basis."""
    return Surface("P2", ((1,),), (-3,), 1, ("H",))


@lru_cache(maxsize=None)
def blowup_P2(n: int) -> Surface:
    """Blowup of the plane in n points, basis H, E1, ..., En."""
    if n < 1:
        raise ValueError("blowup needs at least one point")
    gram = tuple(
        tuple((1 if i == 0 else -1) if i == j else 0 for j in range(n + 1))
        for i in range(n + 1)
    )
    K = (-3,) + (1,) * n
    if n == 1:
        labels = ("H", "E")
        alias = {"F": (2, -2), "G": (1, 1)}
    else:
        labels = ("H",) + tuple(f"E{i}" for i in range(1, n + 1))
        alias = None
        if n == 2:
            alias = {
                "F": (2, -2, 0),
                "G": (2, 0, -2),
                "E": (2, -2, -2),
            }
    return Surface(f"blowup_P2_{n}", gram, K, 1 - n, labels, alias)


def hatP2() -> Surface:
    """One-point blowup of the plane; F = H-E and G = (H+E)/2 are ruling classes."""
    return blowup_P2(1)


def tildeP2() -> Surface:
    """Two-point blowup of the plane; F, G, E name the quadric identification."""
    return blowup_P2(2)


@lru_cache(maxsize=None)
def P1xP1() -> Surface:
    """The smooth quadric with its two ruling classes."""
    return Surface("P1xP1", ((0, 1), (1, 0)), (-2, -2), 0, ("F", "G"))


def pair(a: SurfaceClass, b: SurfaceClass) -> Rat:
    return a.pair(b)


def square(a: SurfaceClass) -> Rat:
    return a.pair(a)


def is_wall_class(xi: SurfaceClass, c1: SurfaceClass, d: int) -> bool:
    """Whether xi defines a wall for (c1, d): parity plus d + xi^2 >= 0."""
    xi._same(c1)
    if not (xi.is_integral() and c1.is_integral()):
        raise ValueError("wall classes must be integral")
    if any((a + b) % 4 for a, b in zip(xi.d, c1.d)):
        return False
    return int(d) + xi.square() >= 0


def _parity_matches(xi: SurfaceClass, c1: SurfaceClass) -> bool:
    return all((a + b) % 4 == 0 for a, b in zip(xi.d, c1.d))


def walls_hatP2_F_to_H(c1: SurfaceClass, L: SurfaceClass, r: int):
    """Walls crossed from the ruling chamber to the balanced polarization.

    Works on the quadric and on the one-point blowup of the plane; the target
    polarization is H on the blowup and its ruled analogue F/2 + G on the
    quadric.  Returns (xi, weight) pairs with xi normalized by
    <xi, H> >= 0 > <xi, F>; weight is 1/2 exactly on the boundary <xi, H> = 0.
    The coefficient box is enlarged by a safety margin of 4 and any wall found
    in the margin trips an assertion.
    """
    surf = L.surface
    if surf == P1xP1():
        fc = surf.cls("F")
        gc = surf.cls("G")
        omega = SurfaceClass._make(surf, (1, 2))
    elif surf == hatP2():
        fc = surf.cls("F")
        gc = surf.cls("G")
        omega = surf.cls("H")
    else:
        raise ValueError("enumeration needs the quadric or the one-point blowup")
    c1 = surf.cls(c1)
    if c1 != surf.zero() and c1 != fc:
        raise ValueError("c1 must be 0 or F")
    r = int(r)
    if r < 0:
        raise ValueError("point power must be nonnegative")
    n = L.pair(gc)
    m = L.pair(fc)
    if m not in (0, 1, 2):
        raise ValueError("unsupported L shape")
    m = int(m.num)
    if m == 2 and not (n >= 0 and Rat(r) <= 2 * n + 1):
        # beyond this range the passing family is infinite, so refuse
        raise ValueError("wall family is not finite for this input")
    nq = mpq(n.num, n.den)
    bound = abs(nq + 2) / 2 + mpq(r + 2, 4)
    if m < 2:
        bound = max(bound, (2 * abs(nq + 2) + r + 2) / (2 - m))
    a_cut = max(_ceil_q(bound), 0)
    lmk = L - surf.K
    out = []
    for a in range(1, a_cut + 4 + 1):
        # integral classes of either parity force b even; b <= 2a is <xi, H> >= 0
        for b in range(2, 2 * a + 1, 2):
            xi = SurfaceClass._make(
                surf, tuple(a * f - b * g for f, g in zip(fc.d, gc.d))
            )
            if not _parity_matches(xi, c1):
                continue
            if -xi.square() > abs(xi.pair(lmk)) + r + 2:
                continue
            assert a <= a_cut, "wall escaped the certified coefficient box"
            w = Rat(1, 2) if xi.pair(omega) == 0 else Rat(1)
            out.append((xi, w))
    out.sort(key=lambda t: t[0].d)
    return out


def walls_tildeP2_H_to_FG(c1: SurfaceClass, L: SurfaceClass, r: int):
    """Walls crossed from the plane polarization to the quadric one.

    On the two-point blowup, enumerates xi = aH - b1 E1 - b2 E2 with
    <H, xi> <= 0 <= <2H - E1 - E2, xi>, not both zero, correct parity against
    c1, and the nonvanishing filter -xi^2 <= |<xi, L-K>| + r + 2.  Boundary
    walls (<2H - E1 - E2, xi> = 0) carry weight 1/2.  The coordinate box is
    enlarged by a safety margin of 4 and any wall found there trips an
    assertion.
    """
    surf = tildeP2()
    if L.surface != surf:
        raise ValueError("enumeration is defined on the two-point blowup")
    c1 = surf.cls(c1)
    if c1 not in (surf.cls("E"), surf.cls("F"), surf.cls("H")):
        raise ValueError("c1 must be E, F, or F+G-E")
    r = int(r)
    if r < 0:
        raise ValueError("point power must be nonnegative")
    if not L.is_integral():
        raise ValueError("unsupported L shape")
    l0, l1, l2 = (x // 2 for x in L.d)
    if (l1, l2) == (0, 0):
        dpar = l0
    elif (l1, l2) == (-1, -1):
        dpar = l0 - 1
    else:
        raise ValueError("unsupported L shape")
    box = 4 * (abs(dpar + 3) + r + 4)
    wide = box + 4
    g0, g1, g2 = (L - surf.K).d
    c0d, c1d, c2d = c1.d
    thresh = 2 * r + 4
    out = []
    for b1 in range(-wide, wide + 1):
        rest = wide - abs(b1)
        if (2 * b1 - c1d) % 4:
            continue
        for b2 in range(-rest, rest + 1):
            if (2 * b2 - c2d) % 4:
                continue
            # orientation: a <= -1 and 2a >= b1 + b2; parity of c1 makes a odd
            lo = -((-(b1 + b2)) // 2)
            a = -1
            while a >= lo:
                s2 = a * g0 + b1 * g1 + b2 * g2
                if 2 * (b1 * b1 + b2 * b2 - a * a) <= abs(s2) + thresh:
                    assert (2 * a + c0d) % 4 == 0
                    assert abs(b1) + abs(b2) <= box, "wall escaped the certified box"
                    xi = SurfaceClass._make(surf, (2 * a, -2 * b1, -2 * b2))
                    w = Rat(1, 2) if 2 * a - b1 - b2 == 0 else Rat(1)
                    out.append((xi, w))
                a -= 2
    out.sort(key=lambda t: t[0].d)
    return out
