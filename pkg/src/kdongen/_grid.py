"""Bivariate series engine on the grid v = Lambda/q, w = q^4.

Every series the pipelines multiply lives in Q[v][[w]] after factoring one
power of i per v-row out of the coefficients: the stored table r[s][t] is
real and the actual coefficient of v^s w^t is i^s * r[s][t] / den.  Products
then need no complex arithmetic at all, and one packed 2D convolution does a
whole series product.  A v-row tracks Lambda order (row s <-> Lambda^s); a
row-s entry at column t sits at q-exponent 4t - s.

Validity: rows vlo..vtrunc-1 are known, each complete through w^wcap.
Completeness at a uniform wcap survives products because w-exponents are
nonnegative and add.
"""

from __future__ import annotations

import gmpy2
from gmpy2 import mpq, mpz

from ._kernel import conv, conv2d, content_gcd
from .scalars import GaussRat, Rat
from .series import LSeries, QLaurent

Z0 = mpz(0)
Z1 = mpz(1)
Q0 = mpq(0)
Q1 = mpq(1)


# -- w-series helpers (plain mpq lists, schoolbook sizes) -------------------


def wtrim(a: list) -> list:
    n = len(a)
    while n and not a[n - 1]:
        n -= 1
    return a[:n]


def wadd(a: list, b: list, sgn=1) -> list:
    out = list(a) + [Q0] * (len(b) - len(a))
    for k, x in enumerate(b):
        out[k] += sgn * x
    return wtrim(out)


def wscale(a: list, c) -> list:
    c = mpq(c)
    return wtrim([x * c for x in a])


def wmul(a: list, b: list, cap: int) -> list:
    if not a or not b:
        return []
    out = [Q0] * min(len(a) + len(b) - 1, cap + 1)
    for i, x in enumerate(a):
        if not x or i > cap:
            continue
        for j, y in enumerate(b):
            if i + j > cap:
                break
            if y:
                out[i + j] += x * y
    return wtrim(out)


def winv(a: list, cap: int) -> list:
    """Inverse of a w-series unit, to w^cap."""
    if not a or not a[0]:
        raise ValueError("w-series inverse needs a nonzero constant term")
    c0 = 1 / a[0]
    out = [c0]
    for n in range(1, cap + 1):
        s = Q0
        for k in range(1, min(n, len(a) - 1) + 1):
            if a[k]:
                s += a[k] * out[n - k]
        out.append(-c0 * s)
    return wtrim(out)


def wpow(a: list, n: int, cap: int) -> list:
    if n < 0:
        return wpow(winv(a, cap), -n, cap)
    out = [Q1]
    base = a
    while n:
        if n & 1:
            out = wmul(out, base, cap)
        n >>= 1
        if n:
            base = wmul(base, base, cap)
    return out


def _clear_dens(vec: list):
    """mpq list -> (den, mpz list)."""
    den = Z1
    for x in vec:
        den = gmpy2.lcm(den, x.denominator)
    return den, [mpz(x * den) for x in vec]


# -- row helpers: a row is (den: mpz, vec: list[mpz]) -----------------------


def _rreduce(d, v):
    n = len(v)
    while n and not v[n - 1]:
        n -= 1
    v = v[:n]
    if not v:
        return Z1, []
    g = content_gcd(d, [v])
    if g > 1:
        d = gmpy2.divexact(d, g)
        v = [gmpy2.divexact(x, g) for x in v]
    return d, v


def _rconv(da, va, db, vb, cap):
    if not va or not vb:
        return Z1, []
    out = conv(va, vb)
    return _rreduce(da * db, out[: cap + 1])


def _radd(da, va, db, vb, sgn=1):
    if not vb:
        return da, list(va)
    if not va:
        return db, [sgn * x for x in vb]
    d = gmpy2.lcm(da, db)
    fa, fb = gmpy2.divexact(d, da), sgn * gmpy2.divexact(d, db)
    out = [fa * x for x in va]
    out += [Z0] * (len(vb) - len(out))
    for k, x in enumerate(vb):
        out[k] += fb * x
    return _rreduce(d, out)


class VW:
    """Twisted-real bivariate series; treat instances as immutable."""

    __slots__ = ("vlo", "vtrunc", "wcap", "den", "rows")

    def __init__(self, vlo: int, vtrunc: int, wcap: int, den, rows):
        if vtrunc is None:
            raise ValueError("the grid engine always works at a finite Lambda order")
        rows = [list(r) for r in rows]
        if vlo + len(rows) > vtrunc:
            rows = rows[: max(vtrunc - vlo, 0)]
        for k, r in enumerate(rows):
            n = len(r)
            if n > wcap + 1:
                r = r[: wcap + 1]
                n = wcap + 1
            while n and not r[n - 1]:
                n -= 1
            rows[k] = r[:n]
        first = next((k for k, r in enumerate(rows) if r), None)
        if first is None:
            self.vlo, self.vtrunc, self.wcap = vtrunc, vtrunc, wcap
            self.den, self.rows = Z1, []
            return
        last = max(k for k, r in enumerate(rows) if r)
        rows = rows[first : last + 1]
        vlo += first
        den = mpz(den)
        assert den > 0
        g = content_gcd(den, rows)
        if g > 1:
            den = gmpy2.divexact(den, g)
            rows = [[gmpy2.divexact(x, g) for x in r] for r in rows]
        self.vlo, self.vtrunc, self.wcap = vlo, vtrunc, wcap
        self.den, self.rows = den, rows

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, vtrunc: int, wcap: int) -> "VW":
        return cls(vtrunc, vtrunc, wcap, Z1, [])

    @classmethod
    def from_stored_rows(cls, stored: dict, vtrunc: int, wcap: int) -> "VW":
        """Object sum_s (i v)^s * row_s(w) with rows given as mpq lists."""
        if not stored:
            return cls.zero(vtrunc, wcap)
        den = Z1
        for r in stored.values():
            for x in r:
                den = gmpy2.lcm(den, mpq(x).denominator)
        lo = min(stored)
        hi = max(stored)
        rows = []
        for s in range(lo, hi + 1):
            r = stored.get(s, ())
            rows.append([mpz(mpq(x) * den) for x in r])
        return cls(lo, vtrunc, wcap, den, rows)

    @classmethod
    def monomial(cls, s: int, t: int, vtrunc: int, wcap: int, coef=1) -> "VW":
        """coef * (i v)^s * w^t."""
        c = mpq(coef)
        return cls.from_stored_rows({s: [Q0] * t + [c]}, vtrunc, wcap)

    # -- inspection ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.rows

    def row(self, s: int) -> list:
        k = s - self.vlo
        if 0 <= k < len(self.rows):
            return self.rows[k]
        return []

    def stored(self, s: int, t: int) -> Rat:
        """Stored (twist-free) entry at v^s w^t."""
        if s >= self.vtrunc:
            raise ValueError(f"row {s} is beyond truncation O(Lambda^{self.vtrunc})")
        if t > self.wcap:
            raise ValueError(f"column {t} is beyond the stored w-depth {self.wcap}")
        if t < 0:
            return Rat(0)
        r = self.row(s)
        if t >= len(r):
            return Rat(0)
        return Rat(r[t], self.den)

    def coeff_q0_lambda(self) -> dict[int, Rat]:
        """Nonzero q^0 coefficients per Lambda order (rows s = 4t)."""
        out = {}
        start = self.vlo + (-self.vlo) % 4
        for s in range(start, self.vtrunc, 4):
            t = s // 4
            if 0 <= t <= self.wcap:
                r = self.row(s)
                if t < len(r) and r[t]:
                    out[s] = Rat(r[t], self.den)
        return out

    # -- arithmetic ---------------------------------------------------------

    def _binop(self, o: "VW", sgn: int) -> "VW":
        wcap = min(self.wcap, o.wcap)
        vtrunc = min(self.vtrunc, o.vtrunc)
        vlo = min(self.vlo, o.vlo) if (self.rows or o.rows) else vtrunc
        end = max(self.vlo + len(self.rows), o.vlo + len(o.rows))
        end = min(end, vtrunc)
        d = gmpy2.lcm(self.den, o.den)
        fa, fb = gmpy2.divexact(d, self.den), sgn * gmpy2.divexact(d, o.den)
        rows = []
        for s in range(vlo, end):
            ra, rb = self.row(s), o.row(s)
            out = [fa * x for x in ra]
            out += [Z0] * (len(rb) - len(out))
            for k, x in enumerate(rb):
                out[k] += fb * x
            rows.append(out)
        return VW(vlo, vtrunc, wcap, d, rows)

    def __add__(self, o):
        return self._binop(o, 1)

    def __sub__(self, o):
        return self._binop(o, -1)

    def __neg__(self):
        return VW(self.vlo, self.vtrunc, self.wcap, self.den, [[-x for x in r] for r in self.rows])

    def scale(self, c) -> "VW":
        c = mpq(c)
        if not c:
            return VW.zero(self.vtrunc, self.wcap)
        num, den = c.numerator, c.denominator
        return VW(self.vlo, self.vtrunc, self.wcap, self.den * den, [[x * num for x in r] for r in self.rows])

    def __mul__(self, o: "VW") -> "VW":
        vtrunc = min(self.vtrunc + o.vlo, o.vtrunc + self.vlo)
        wcap = min(self.wcap, o.wcap)
        if not self.rows or not o.rows:
            return VW(vtrunc, vtrunc, wcap, Z1, [])
        rows = conv2d(self.rows, o.rows, wcap=wcap)
        return VW(self.vlo + o.vlo, vtrunc, wcap, self.den * o.den, rows)

    def mul_wseries(self, wvec: list) -> "VW":
        """Multiply by a pure w-series (mpq list)."""
        wvec = wtrim([mpq(x) for x in wvec])
        if not wvec:
            return VW.zero(self.vtrunc, self.wcap)
        dw, vw = _clear_dens(wvec)
        rows = [conv(r, vw)[: self.wcap + 1] if r else [] for r in self.rows]
        return VW(self.vlo, self.vtrunc, self.wcap, self.den * dw, rows)

    def times_iv(self, k: int) -> "VW":
        """Multiply by (i v)^k; pure row shift."""
        return VW(self.vlo + k, self.vtrunc + k, self.wcap, self.den, self.rows)

    def times_w(self, j: int) -> "VW":
        """Multiply by w^j = q^{4j}."""
        if j >= 0:
            rows = [([Z0] * j + r if r else []) for r in self.rows]
            return VW(self.vlo, self.vtrunc, self.wcap + j, self.den, rows)
        rows = []
        for k, r in enumerate(self.rows):
            if any(r[: min(-j, len(r))]):
                raise ValueError(f"division by w^{-j} is not exact on row {self.vlo + k}")
            rows.append(r[-j:])
        return VW(self.vlo, self.vtrunc, self.wcap + j, self.den, rows)

    def restrict(self, vtrunc: int | None = None, wcap: int | None = None) -> "VW":
        nv = self.vtrunc if vtrunc is None else min(self.vtrunc, vtrunc)
        nw = self.wcap if wcap is None else min(self.wcap, wcap)
        return VW(self.vlo, nv, nw, self.den, self.rows)

    def even_rows(self) -> "VW":
        rows = [r if (self.vlo + k) % 2 == 0 else [] for k, r in enumerate(self.rows)]
        return VW(self.vlo, self.vtrunc, self.wcap, self.den, rows)

    def odd_rows(self) -> "VW":
        rows = [r if (self.vlo + k) % 2 == 1 else [] for k, r in enumerate(self.rows)]
        return VW(self.vlo, self.vtrunc, self.wcap, self.den, rows)

    # -- series functions along v ------------------------------------------

    def _row_pairs(self):
        return [(self.den, r) for r in self.rows]

    def invert_v(self) -> "VW":
        """Multiplicative inverse; leading v-row must be a w-unit."""
        if not self.rows:
            raise ValueError(f"cannot invert: no nonzero rows below O(Lambda^{self.vtrunc})")
        lead = self.rows[0]
        if not lead or not lead[0]:
            raise ValueError(
                f"leading row Lambda^{self.vlo} is not a w-unit (constant w-term vanishes); cannot invert"
            )
        width = self.vtrunc - self.vlo
        a = [(self.den, self.row(self.vlo + k)) for k in range(width)]
        b0q = winv([mpq(x, self.den) for x in lead], self.wcap)
        d0, v0 = _clear_dens(b0q)
        out = [(d0, v0)]
        for j in range(1, width):
            acc = (Z1, [])
            for k in range(1, j + 1):
                da, va = a[k]
                if not va:
                    continue
                db, vb = out[j - k]
                dp, vp = _rconv(da, va, db, vb, self.wcap)
                acc = _radd(acc[0], acc[1], dp, vp)
            dp, vp = _rconv(acc[0], acc[1], d0, v0, self.wcap)
            out.append(_rreduce(dp, [-x for x in vp]))
        return self._assemble(-self.vlo, self.vtrunc - 2 * self.vlo, out)

    def exp_v(self) -> "VW":
        """exp of an object with vlo >= 1."""
        if not self.rows:
            return VW.from_stored_rows({0: [Q1]}, self.vtrunc, self.wcap)
        if self.vlo < 1:
            raise ValueError(f"exp needs positive leading Lambda order, got Lambda^{self.vlo}")
        T = self.vtrunc
        out = [(Z1, [Z1])]
        for j in range(1, T):
            acc = (Z1, [])
            for k in range(self.vlo, j + 1):
                fk = self.row(k)
                if not fk:
                    continue
                db, vb = out[j - k]
                dp, vp = _rconv(self.den, fk, db, vb, self.wcap)
                acc = _radd(acc[0], acc[1], dp, [k * x for x in vp])
            acc = _rreduce(acc[0] * j, acc[1])
            out.append(acc)
        return self._assemble(0, T, out)

    def sqrt_unit(self) -> "VW":
        """Square root of 1 + (positive Lambda order)."""
        if self.vlo != 0 or not self.rows or self.rows[0] != [self.den]:
            raise ValueError("sqrt needs a series with constant term exactly 1")
        T = self.vtrunc
        out = [(Z1, [Z1])]
        for j in range(1, T):
            acc = (Z1, [])
            for k in range(1, j):
                da, va = out[k]
                db, vb = out[j - k]
                if not va or not vb:
                    continue
                dp, vp = _rconv(da, va, db, vb, self.wcap)
                acc = _radd(acc[0], acc[1], dp, vp)
            fj = self.row(j)
            d, v = _radd(self.den, fj, acc[0], acc[1], sgn=-1)
            out.append(_rreduce(d * 2, v))
        return self._assemble(0, T, out)

    def pow_int(self, n: int) -> "VW":
        if n < 0:
            return self.invert_v().pow_int(-n)
        out = VW.from_stored_rows({0: [Q1]}, self.vtrunc, self.wcap)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def _assemble(self, vlo: int, vtrunc: int, pairs) -> "VW":
        den = Z1
        for d, v in pairs:
            if v:
                den = gmpy2.lcm(den, d)
        rows = []
        for d, v in pairs:
            f = gmpy2.divexact(den, d)
            rows.append([f * x for x in v])
        return VW(vlo, vtrunc, self.wcap, den, rows)

    # -- export -------------------------------------------------------------

    def to_lseries(self) -> LSeries:
        """Public Lambda series with the per-row i^s twist applied."""
        slots = []
        for k, r in enumerate(self.rows):
            s = self.vlo + k
            qtrunc = 4 * (self.wcap + 1) - s
            if not r:
                slots.append(QLaurent.zero(qtrunc))
                continue
            zero = GaussRat(0)
            coeffs = [zero] * (4 * (len(r) - 1) + 1)
            m = s & 3
            for t, x in enumerate(r):
                val = Rat(x, self.den)
                if m == 0:
                    c = GaussRat(val)
                elif m == 1:
                    c = GaussRat(0, val)
                elif m == 2:
                    c = GaussRat(-val)
                else:
                    c = GaussRat(0, -val)
                coeffs[4 * t] = c
            slots.append(QLaurent(-s, coeffs, qtrunc))
        return LSeries(self.vlo, slots, self.vtrunc)

    def __repr__(self):
        return f"VW(vlo={self.vlo}, vtrunc={self.vtrunc}, wcap={self.wcap}, rows={len(self.rows)})"
