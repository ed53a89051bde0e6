"""Exact Laurent series in q, power series in Lambda, and closed rational forms.

Coefficients are Gaussian rationals stored as denominator-cleared gmpy2
integer vectors; series products run through the packed convolution kernel.
Every object tracks the window it is valid on: ``trunc`` is the first unknown
exponent, or None when the object is exact (all omitted coefficients are
known to vanish).  Arithmetic propagates truncation honestly, so a result
never claims more precision than its inputs support.
"""

from __future__ import annotations

from fractions import Fraction

import gmpy2
from gmpy2 import mpq, mpz

from ._kernel import conv, content_gcd
from .scalars import GaussRat, Rat, as_real, rat_from_str, rat_to_str

Z0 = mpz(0)
Z1 = mpz(1)

_SCALARS = (int, GaussRat, Rat, Fraction, type(Z0), type(mpq(0)))


def _tmin(*vals):
    """None-aware minimum; None means +infinity."""
    out = None
    for v in vals:
        if v is not None and (out is None or v < out):
            out = v
    return out


def _to_mpq_pair(x):
    if isinstance(x, GaussRat):
        return mpq(x.re.num, x.re.den), mpq(x.im.num, x.im.den)
    if isinstance(x, Rat):
        return mpq(x.num, x.den), mpq(0)
    if isinstance(x, (int, type(Z0), type(mpq(0)), Fraction)):
        return mpq(x), mpq(0)
    raise TypeError(f"cannot interpret {x!r} as a series coefficient")


def _vcomb(a, b, sgn):
    """a + sgn*b for optional (None = zero) integer vectors."""
    if b is None:
        return list(a) if a is not None else None
    if a is None:
        return [sgn * x for x in b]
    la, lb = len(a), len(b)
    out = list(a) + [Z0] * (lb - la) if lb > la else list(a)
    for k, x in enumerate(b):
        out[k] += sgn * x
    return out


class QLaurent:
    """Laurent series in q with a finite principal part.

    Coefficients live on the window [lo, trunc); exponents below lo are known
    zero, exponents at or above trunc are unknown.  trunc=None marks an exact
    polynomial.  Instances are normalized (support-trimmed, content-reduced)
    and treated as immutable.
    """

    __slots__ = ("_lo", "_trunc", "_den", "_re", "_im")

    def __init__(self, lo: int = 0, coeffs=(), trunc: int | None = None):
        pairs = [_to_mpq_pair(c) for c in coeffs]
        den = Z1
        for r, i in pairs:
            den = gmpy2.lcm(den, r.denominator)
            den = gmpy2.lcm(den, i.denominator)
        re = [mpz(r * den) for r, _ in pairs]
        im = [mpz(i * den) for _, i in pairs]
        self._assign(lo, trunc, den, re, im)

    @classmethod
    def _make(cls, lo, trunc, den, re, im) -> "QLaurent":
        self = object.__new__(cls)
        self._assign(lo, trunc, den, re, im)
        return self

    def _assign(self, lo, trunc, den, re, im):
        L = max(len(re) if re else 0, len(im) if im else 0)
        if re is not None and len(re) < L:
            re = list(re) + [Z0] * (L - len(re))
        if im is not None and len(im) < L:
            im = list(im) + [Z0] * (L - len(im))
        if trunc is not None and lo + L > trunc:
            L = max(trunc - lo, 0)
            re = re[:L] if re is not None else None
            im = im[:L] if im is not None else None

        def nz(k):
            return (re is not None and re[k]) or (im is not None and im[k])

        first = next((k for k in range(L) if nz(k)), None)
        if first is None:
            self._lo = 0 if trunc is None else trunc
            self._trunc = trunc
            self._den = Z1
            self._re = None
            self._im = None
            return
        last = max(k for k in range(L) if nz(k))
        lo += first
        re = re[first : last + 1] if re is not None else None
        im = im[first : last + 1] if im is not None else None
        if re is not None and not any(re):
            re = None
        if im is not None and not any(im):
            im = None
        den = mpz(den)
        assert den > 0
        g = content_gcd(den, [v for v in (re, im) if v is not None])
        if g > 1:
            den = gmpy2.divexact(den, g)
            if re is not None:
                re = [gmpy2.divexact(x, g) for x in re]
            if im is not None:
                im = [gmpy2.divexact(x, g) for x in im]
        self._lo = lo
        self._trunc = trunc
        self._den = den
        self._re = re
        self._im = im

    # -- inspection ---------------------------------------------------------

    @property
    def lo(self) -> int:
        return self._lo

    @property
    def trunc(self) -> int | None:
        return self._trunc

    def _width(self) -> int:
        v = self._re if self._re is not None else self._im
        return len(v) if v is not None else 0

    @property
    def coeffs(self) -> list[GaussRat]:
        """Stored coefficient window as Gaussian rationals."""
        return [self._coeff_at(k) for k in range(self._width())]

    def _coeff_at(self, k: int) -> GaussRat:
        r = Rat(self._re[k], self._den) if self._re is not None else Rat(0)
        i = Rat(self._im[k], self._den) if self._im is not None else Rat(0)
        return GaussRat(r, i)

    def coeff(self, e: int) -> GaussRat:
        if self._trunc is not None and e >= self._trunc:
            raise ValueError(f"coefficient of q^{e} is beyond truncation O(q^{self._trunc})")
        k = e - self._lo
        if k < 0 or k >= self._width():
            return GaussRat(0)
        return self._coeff_at(k)

    def is_zero(self) -> bool:
        """No known nonzero coefficients (the window may still be finite)."""
        return self._width() == 0

    def is_exact(self) -> bool:
        return self._trunc is None

    def is_constant(self) -> bool:
        """Support inside q^0 with the q^0 coefficient known."""
        w = self._width()
        if self._trunc is not None and self._trunc < 1:
            return False
        return w == 0 or (self._lo == 0 and w == 1)

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, trunc: int | None = None) -> "QLaurent":
        return cls._make(0 if trunc is None else trunc, trunc, Z1, None, None)

    @classmethod
    def one(cls) -> "QLaurent":
        return cls(0, [1])

    @classmethod
    def const(cls, x) -> "QLaurent":
        return cls(0, [x])

    # -- arithmetic ---------------------------------------------------------

    def _addsub(self, o: "QLaurent", sgn: int) -> "QLaurent":
        t_out = _tmin(self._trunc, o._trunc)
        lo_out = min(self._lo, o._lo)
        end_out = max(self._lo + self._width(), o._lo + o._width())
        if t_out is not None:
            end_out = min(end_out, t_out)
        span = max(end_out - lo_out, 0)
        d = gmpy2.lcm(self._den, o._den)
        fs, fo = gmpy2.divexact(d, self._den), gmpy2.divexact(d, o._den)
        re = [Z0] * span
        im = [Z0] * span
        for src, f, s in ((self, fs, 1), (o, fo, sgn)):
            off = src._lo - lo_out
            for vec, dst in ((src._re, re), (src._im, im)):
                if vec is None:
                    continue
                for k, x in enumerate(vec):
                    pos = off + k
                    if 0 <= pos < span:
                        dst[pos] += s * f * x
        return QLaurent._make(lo_out, t_out, d, re, im)

    def __add__(self, other):
        if isinstance(other, _SCALARS):
            other = QLaurent.const(other)
        if not isinstance(other, QLaurent):
            return NotImplemented
        return self._addsub(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, _SCALARS):
            other = QLaurent.const(other)
        if not isinstance(other, QLaurent):
            return NotImplemented
        return self._addsub(other, -1)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return QLaurent._make(
            self._lo,
            self._trunc,
            self._den,
            [-x for x in self._re] if self._re is not None else None,
            [-x for x in self._im] if self._im is not None else None,
        )

    def __mul__(self, other):
        if isinstance(other, _SCALARS):
            other = QLaurent.const(other)
        if not isinstance(other, QLaurent):
            return NotImplemented
        if (self.is_zero() and self.is_exact()) or (other.is_zero() and other.is_exact()):
            return QLaurent.zero()
        t1, t2 = self._trunc, other._trunc
        t_out = _tmin(
            t1 + other._lo if t1 is not None else None,
            t2 + self._lo if t2 is not None else None,
        )
        lo_out = self._lo + other._lo
        if self._width() == 0 or other._width() == 0:
            return QLaurent._make(lo_out, t_out, Z1, None, None)
        r1, i1, r2, i2 = self._re, self._im, other._re, other._im
        rr = conv(r1, r2) if r1 is not None and r2 is not None else None
        ii = conv(i1, i2) if i1 is not None and i2 is not None else None
        ri = conv(r1, i2) if r1 is not None and i2 is not None else None
        ir = conv(i1, r2) if i1 is not None and r2 is not None else None
        re = _vcomb(rr, ii, -1)
        im = _vcomb(ri, ir, 1)
        return QLaurent._make(lo_out, t_out, self._den * other._den, re, im)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, _SCALARS):
            re, im = _to_mpq_pair(other)
            if re == 0 and im == 0:
                raise ZeroDivisionError("division of series by zero")
            return self * (GaussRat(1) / GaussRat(Rat(re), Rat(im)))
        if isinstance(other, QLaurent):
            return self * other.invert()
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.invert() ** (-n)
        out = QLaurent.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def invert(self) -> "QLaurent":
        """Multiplicative inverse as a q-Laurent series."""
        w = self._width()
        if w == 0:
            if self._trunc is None:
                raise ZeroDivisionError("cannot invert the zero series")
            raise ValueError(f"cannot invert: no known coefficients below O(q^{self._trunc})")
        if self._trunc is None:
            if w == 1:
                c = self._coeff_at(0)
                return QLaurent(-self._lo, [GaussRat(1) / c])
            raise ValueError("cannot invert an exact multi-term polynomial; truncate to a finite q order first")
        width = self._trunc - self._lo
        a = [self.coeff(self._lo + k) for k in range(width)]
        nzidx = [k for k in range(1, width) if bool(a[k])]
        b0 = GaussRat(1) / a[0]
        b = [b0]
        for n in range(1, width):
            s = GaussRat(0)
            for k in nzidx:
                if k > n:
                    break
                s = s + a[k] * b[n - k]
            b.append(-(b0 * s))
        return QLaurent(-self._lo, b, trunc=-self._lo + width)

    # -- structure ----------------------------------------------------------

    def shift(self, k: int) -> "QLaurent":
        """Multiply by q^k."""
        return QLaurent._make(
            self._lo + k,
            self._trunc + k if self._trunc is not None else None,
            self._den,
            list(self._re) if self._re is not None else None,
            list(self._im) if self._im is not None else None,
        )

    def truncate(self, t: int) -> "QLaurent":
        """Forget coefficients at q^t and above."""
        return QLaurent._make(
            self._lo,
            _tmin(self._trunc, t),
            self._den,
            list(self._re) if self._re is not None else None,
            list(self._im) if self._im is not None else None,
        )

    def principal_part(self) -> "QLaurent":
        """Keep q-exponents <= 0; the result is exact."""
        if self._trunc is not None and self._trunc < 1:
            raise ValueError(f"principal part needs q^0 known, have only O(q^{self._trunc})")
        keep = max(min(self._width(), 1 - self._lo), 0)
        return QLaurent._make(
            self._lo,
            None,
            self._den,
            self._re[:keep] if self._re is not None else None,
            self._im[:keep] if self._im is not None else None,
        )

    def __eq__(self, other):
        if isinstance(other, _SCALARS):
            other = QLaurent.const(other)
        if not isinstance(other, QLaurent):
            return NotImplemented
        return (
            self._lo == other._lo
            and self._trunc == other._trunc
            and self._den == other._den
            and self._re == other._re
            and self._im == other._im
        )

    def __bool__(self):
        return self._width() != 0 or self._trunc is not None

    def __str__(self):
        parts = []
        for k in range(self._width()):
            c = self._coeff_at(k)
            if not c:
                continue
            e = self._lo + k
            if c.is_real() and c.re < Rat(0):
                op, c = " - ", -c
            else:
                op = " + "
            cs = str(c) if c.is_real() else f"({c})"
            if e == 0:
                term = cs
            elif cs == "1":
                term = f"q^{e}"
            else:
                term = f"{cs}*q^{e}"
            if not parts:
                term = ("-" + term) if op == " - " else term
                parts.append(term)
            else:
                parts.append(op + term)
        if self._trunc is not None:
            parts.append((" + " if parts else "") + f"O(q^{self._trunc})")
        return "".join(parts) if parts else "0"

    def __repr__(self):
        return f"QLaurent(lo={self._lo}, trunc={self._trunc}, {self})"

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "qlo": self._lo,
            "qtrunc": self._trunc,
            "c": [[rat_to_str(c.re), rat_to_str(c.im)] for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, d: dict) -> "QLaurent":
        coeffs = [GaussRat(rat_from_str(p[0]), rat_from_str(p[1])) for p in d["c"]]
        return cls(d["qlo"], coeffs, d["qtrunc"])


class LSeries:
    """Series in Lambda whose coefficients are q-Laurent series.

    Slots cover Lambda exponents [lo, ltrunc); each slot carries its own
    q-truncation, so q-precision varies per Lambda order exactly as products
    propagate it.  ltrunc=None marks a series exact in Lambda.
    """

    __slots__ = ("_lo", "_ltrunc", "_slots")

    def __init__(self, lo: int = 0, coeffs=(), ltrunc: int | None = None):
        slots = [c if isinstance(c, QLaurent) else QLaurent.const(c) for c in coeffs]
        self._assign(lo, ltrunc, slots)

    @classmethod
    def _make(cls, lo, ltrunc, slots) -> "LSeries":
        self = object.__new__(cls)
        self._assign(lo, ltrunc, slots)
        return self

    def _assign(self, lo, ltrunc, slots):
        if ltrunc is not None and lo + len(slots) > ltrunc:
            slots = slots[: max(ltrunc - lo, 0)]
        def keep(s):
            # window-zero slots carry q-truncation knowledge; only drop exact zeros
            return not (s.is_zero() and s.is_exact())

        first = next((k for k, s in enumerate(slots) if keep(s)), None)
        if first is None:
            self._lo = 0 if ltrunc is None else ltrunc
            self._ltrunc = ltrunc
            self._slots = []
            return
        last = max(k for k, s in enumerate(slots) if keep(s))
        self._lo = lo + first
        self._ltrunc = ltrunc
        self._slots = list(slots[first : last + 1])

    # -- inspection ---------------------------------------------------------

    @property
    def lo(self) -> int:
        return self._lo

    @property
    def ltrunc(self) -> int | None:
        return self._ltrunc

    @property
    def coeffs(self) -> list[QLaurent]:
        return list(self._slots)

    def coeff(self, s: int) -> QLaurent:
        if self._ltrunc is not None and s >= self._ltrunc:
            raise ValueError(f"coefficient of Lambda^{s} is beyond truncation O(Lambda^{self._ltrunc})")
        k = s - self._lo
        if k < 0 or k >= len(self._slots):
            return QLaurent.zero()
        return self._slots[k]

    def is_zero(self) -> bool:
        """No known nonzero coefficients in any slot."""
        return all(s.is_zero() for s in self._slots)

    def is_exact(self) -> bool:
        return self._ltrunc is None and all(s.is_exact() for s in self._slots)

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, ltrunc: int | None = None) -> "LSeries":
        return cls._make(0 if ltrunc is None else ltrunc, ltrunc, [])

    @classmethod
    def one(cls) -> "LSeries":
        return cls(0, [QLaurent.one()])

    @classmethod
    def const(cls, x) -> "LSeries":
        return cls(0, [QLaurent.const(x)])

    @classmethod
    def from_lambda_coeffs(cls, coeffs, ltrunc: int | None = None) -> "LSeries":
        """Build a pure Lambda series from {exponent: rational} data."""
        items = sorted(coeffs.items()) if isinstance(coeffs, dict) else sorted(coeffs)
        if not items:
            return cls.zero(ltrunc)
        lo = items[0][0]
        hi = items[-1][0]
        slots = [QLaurent.zero() for _ in range(hi - lo + 1)]
        for e, c in items:
            if not isinstance(e, int):
                raise ValueError(f"Lambda exponent must be an integer, got {e!r}")
            slots[e - lo] = QLaurent.const(c)
        return cls._make(lo, ltrunc, slots)

    # -- arithmetic ---------------------------------------------------------

    def _addsub(self, o: "LSeries", sgn: int) -> "LSeries":
        t_out = _tmin(self._ltrunc, o._ltrunc)
        lo_out = min(self._lo, o._lo)
        end_out = max(self._lo + len(self._slots), o._lo + len(o._slots))
        if t_out is not None:
            end_out = min(end_out, t_out)
        span = max(end_out - lo_out, 0)
        slots = []
        for k in range(span):
            s = lo_out + k
            a = self.coeff(s)
            b = o.coeff(s)
            slots.append(a._addsub(b, sgn))
        return LSeries._make(lo_out, t_out, slots)

    def __add__(self, other):
        if isinstance(other, _SCALARS):
            other = LSeries.const(other)
        if not isinstance(other, LSeries):
            return NotImplemented
        return self._addsub(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, _SCALARS):
            other = LSeries.const(other)
        if not isinstance(other, LSeries):
            return NotImplemented
        return self._addsub(other, -1)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return LSeries._make(self._lo, self._ltrunc, [-s for s in self._slots])

    def __mul__(self, other):
        if isinstance(other, _SCALARS):
            other = LSeries.const(other)
        if not isinstance(other, LSeries):
            return NotImplemented
        if (self.is_zero() and self.is_exact()) or (other.is_zero() and other.is_exact()):
            return LSeries.zero()
        t1, t2 = self._ltrunc, other._ltrunc
        t_out = _tmin(
            t1 + other._lo if t1 is not None else None,
            t2 + self._lo if t2 is not None else None,
        )
        lo_out = self._lo + other._lo
        if not self._slots or not other._slots:
            return LSeries._make(lo_out, t_out, [])
        span = len(self._slots) + len(other._slots) - 1
        if t_out is not None:
            span = min(span, t_out - lo_out)
        if span <= 0:
            return LSeries._make(lo_out, t_out, [])
        acc: list[QLaurent | None] = [None] * span
        for k1, s1 in enumerate(self._slots):
            if s1.is_zero() and s1.is_exact():
                continue
            for k2, s2 in enumerate(other._slots):
                pos = k1 + k2
                if pos >= span:
                    break
                if s2.is_zero() and s2.is_exact():
                    continue
                p = s1 * s2
                acc[pos] = p if acc[pos] is None else acc[pos] + p
        slots = [a if a is not None else QLaurent.zero() for a in acc]
        return LSeries._make(lo_out, t_out, slots)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, _SCALARS):
            re, im = _to_mpq_pair(other)
            if re == 0 and im == 0:
                raise ZeroDivisionError("division of series by zero")
            return self * (GaussRat(1) / GaussRat(Rat(re), Rat(im)))
        if isinstance(other, LSeries):
            return self * other.invert()
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.invert() ** (-n)
        out = LSeries.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def invert(self) -> "LSeries":
        """Multiplicative inverse as a Lambda-Laurent series."""
        if not self._slots:
            if self._ltrunc is None:
                raise ZeroDivisionError("cannot invert the zero series")
            raise ValueError(f"cannot invert: no known coefficients below O(Lambda^{self._ltrunc})")
        lead = self._slots[0]
        if self._ltrunc is None:
            if len(self._slots) == 1:
                return LSeries._make(-self._lo, None, [lead.invert()])
            raise ValueError("cannot invert an exact multi-term Lambda polynomial; truncate to a finite Lambda order first")
        width = self._ltrunc - self._lo
        try:
            b0 = lead.invert()
        except ValueError as e:
            raise ValueError(f"leading Lambda^{self._lo} coefficient is not invertible: {e}") from None
        out = [b0]
        for j in range(1, width):
            s: QLaurent | None = None
            for k in range(1, j + 1):
                a = self.coeff(self._lo + k)
                if a.is_zero() and a.is_exact():
                    continue
                p = a * out[j - k]
                s = p if s is None else s + p
            out.append(QLaurent.zero() if s is None else -(b0 * s))
        return LSeries._make(-self._lo, self._ltrunc - 2 * self._lo, out)

    def exp_series(self) -> "LSeries":
        """exp of a series with positive Lambda order."""
        if self.is_zero() and self.is_exact():
            return LSeries.one()
        if self._lo < 1:
            raise ValueError(f"exp_series requires positive Lambda order, got leading Lambda^{self._lo}")
        if self._ltrunc is None:
            raise ValueError("exp_series needs a finite Lambda truncation")
        T = self._ltrunc
        g = [QLaurent.one()]
        for j in range(1, T):
            acc: QLaurent | None = None
            for k in range(max(self._lo, 1), j + 1):
                f_k = self.coeff(k)
                if f_k.is_zero() and f_k.is_exact():
                    continue
                p = (f_k * g[j - k]) * k
                acc = p if acc is None else acc + p
            g.append(QLaurent.zero() if acc is None else acc * Rat(1, j))
        return LSeries._make(0, T, g)

    def binom_sqrt(self) -> "LSeries":
        """Square root of a series of the form 1 + (positive Lambda order)."""
        if self._lo < 0:
            raise ValueError("binom_sqrt requires a series supported in Lambda^0 and above")
        c0 = self.coeff(0)
        if c0 != QLaurent.one():
            raise ValueError(f"binom_sqrt requires constant Lambda term exactly 1, got {c0}")
        if self._ltrunc is None:
            if len(self._slots) == 1:
                return LSeries.one()
            raise ValueError("binom_sqrt needs a finite Lambda truncation")
        T = self._ltrunc
        g = [QLaurent.one()]
        half = Rat(1, 2)
        for j in range(1, T):
            s: QLaurent | None = None
            for k in range(1, j):
                p = g[k] * g[j - k]
                s = p if s is None else s + p
            f_j = self.coeff(j)
            val = f_j if s is None else f_j - s
            g.append(val * half)
        return LSeries._make(0, T, g)

    # -- structure ----------------------------------------------------------

    def shift_lambda(self, k: int) -> "LSeries":
        """Multiply by Lambda^k."""
        return LSeries._make(
            self._lo + k,
            self._ltrunc + k if self._ltrunc is not None else None,
            list(self._slots),
        )

    def truncate_lambda(self, t: int) -> "LSeries":
        return LSeries._make(self._lo, _tmin(self._ltrunc, t), list(self._slots))

    def truncate_q(self, t: int) -> "LSeries":
        """Forget q^t and above in every slot."""
        return LSeries._make(self._lo, self._ltrunc, [s.truncate(t) for s in self._slots])

    def principal_part(self) -> "LSeries":
        """Per-slot q-exponents <= 0."""
        slots = []
        for k, s in enumerate(self._slots):
            try:
                slots.append(s.principal_part())
            except ValueError as e:
                raise ValueError(f"Lambda^{self._lo + k} slot: {e}") from None
        return LSeries._make(self._lo, self._ltrunc, slots)

    def coeff_q0(self) -> dict[int, GaussRat]:
        """Nonzero q^0 coefficients per Lambda exponent."""
        out: dict[int, GaussRat] = {}
        for k, s in enumerate(self._slots):
            try:
                v = s.coeff(0)
            except ValueError as e:
                raise ValueError(f"Lambda^{self._lo + k} slot: {e}") from None
            if v:
                out[self._lo + k] = v
        return out

    def __eq__(self, other):
        if isinstance(other, _SCALARS):
            other = LSeries.const(other)
        if not isinstance(other, LSeries):
            return NotImplemented
        return self._lo == other._lo and self._ltrunc == other._ltrunc and self._slots == other._slots

    def __bool__(self):
        return bool(self._slots) or self._ltrunc is not None

    def __str__(self):
        parts = []
        for k, s in enumerate(self._slots):
            if s.is_zero():
                continue
            e = self._lo + k
            body = str(s)
            if e == 0:
                parts.append(body if len(parts) == 0 else f"({body})")
            else:
                parts.append(f"({body})*L^{e}")
        if self._ltrunc is not None:
            parts.append(f"O(L^{self._ltrunc})")
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"LSeries(lo={self._lo}, ltrunc={self._ltrunc}, slots={len(self._slots)})"

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "lo": self._lo,
            "ltrunc": self._ltrunc,
            "coeffs": [s.to_json() for s in self._slots],
        }

    @classmethod
    def from_json(cls, d: dict) -> "LSeries":
        slots = [QLaurent.from_json(c) for c in d["coeffs"]]
        return cls._make(d["lo"], d["ltrunc"], slots)


# -- Lambda polynomials as plain dicts -------------------------------------


def _padd(p: dict, q: dict, sgn=1) -> dict:
    out = dict(p)
    for e, c in q.items():
        v = out.get(e, Rat(0)) + sgn * c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _pmul(p: dict, q: dict) -> dict:
    out: dict = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = e1 + e2
            v = out.get(e, Rat(0)) + c1 * c2
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


def _pshift(p: dict, k: int) -> dict:
    return {e + k: c for e, c in p.items()}


_D = {0: Rat(1), 4: Rat(-1)}  # 1 - Lambda^4


def _dpow_poly(b: int) -> dict:
    out = {0: Rat(1)}
    for _ in range(b):
        out = _pmul(out, _D)
    return out


class LambdaRational:
    """Closed form N(Lambda) / (Lambda^lpow * (1-Lambda^4)^dpow).

    The numerator is a Lambda-polynomial with rational coefficients,
    canonicalized so that N(0) != 0 and, while dpow > 0, (1-Lambda^4) does
    not divide N.  lpow may be negative, which puts a net Lambda power in
    the numerator.
    """

    __slots__ = ("_numer", "_lpow", "_dpow")

    def __init__(self, numer, lpow: int = 0, dpow: int = 0):
        if dpow < 0:
            raise ValueError("dpow must be nonnegative")
        items = numer.items() if isinstance(numer, dict) else numer
        N: dict[int, Rat] = {}
        for e, c in items:
            if not isinstance(e, int):
                raise ValueError(f"Lambda exponent must be an integer, got {e!r}")
            v = as_real(c) if not isinstance(c, Rat) else c
            if v:
                N[e] = N.get(e, Rat(0)) + v
                if not N[e]:
                    del N[e]
        if not N:
            self._numer, self._lpow, self._dpow = {}, 0, 0
            return
        e0 = min(N)
        if e0:
            N = _pshift(N, -e0)
            lpow -= e0
        while dpow > 0:
            q = self._try_div_d(N)
            if q is None:
                break
            N = q
            dpow -= 1
        self._numer = N
        self._lpow = lpow
        self._dpow = dpow

    @staticmethod
    def _try_div_d(N: dict) -> dict | None:
        """Exact quotient N / (1 - Lambda^4), or None."""
        q: dict[int, Rat] = {}
        for e in range(0, max(N) + 1):
            v = N.get(e, Rat(0)) + q.get(e - 4, Rat(0))
            if v:
                q[e] = v
        return q if _pmul(q, _D) == N else None

    # -- inspection ---------------------------------------------------------

    @property
    def numer(self) -> dict[int, Rat]:
        return dict(self._numer)

    @property
    def lpow(self) -> int:
        return self._lpow

    @property
    def dpow(self) -> int:
        return self._dpow

    def is_zero(self) -> bool:
        return not self._numer

    def numer_at_one(self) -> Rat:
        """Numerator evaluated at Lambda = 1."""
        out = Rat(0)
        for c in self._numer.values():
            out = out + c
        return out

    def numer_items(self) -> list[tuple[int, Rat]]:
        return sorted(self._numer.items())

    def is_palindromic(self) -> bool:
        """Numerator coefficients read the same from both ends."""
        if not self._numer:
            return True
        d = max(self._numer)
        return all(self._numer.get(e) == self._numer.get(d - e) for e in self._numer)

    # -- arithmetic ---------------------------------------------------------

    def _coerced(self, other) -> "LambdaRational | None":
        if isinstance(other, LambdaRational):
            return other
        if isinstance(other, _SCALARS):
            return LambdaRational({0: as_real(other)})
        return None

    def __add__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        a = max(self._lpow, o._lpow)
        b = max(self._dpow, o._dpow)
        n1 = _pmul(_pshift(self._numer, a - self._lpow), _dpow_poly(b - self._dpow))
        n2 = _pmul(_pshift(o._numer, a - o._lpow), _dpow_poly(b - o._dpow))
        return LambdaRational(_padd(n1, n2), a, b)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        out = object.__new__(LambdaRational)
        out._numer = {e: -c for e, c in self._numer.items()}
        out._lpow = self._lpow
        out._dpow = self._dpow
        return out

    def __mul__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return LambdaRational(_pmul(self._numer, o._numer), self._lpow + o._lpow, self._dpow + o._dpow)

    __rmul__ = __mul__

    def __eq__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return self._numer == o._numer and self._lpow == o._lpow and self._dpow == o._dpow

    # -- expansion ----------------------------------------------------------

    def expand(self, ltrunc: int) -> LSeries:
        """Lambda series of the value, valid below Lambda^ltrunc."""
        if not self._numer:
            return LSeries.zero(ltrunc)
        num = LSeries.from_lambda_coeffs({e: c for e, c in self._numer.items()}).shift_lambda(-self._lpow)
        if self._dpow == 0:
            return num.truncate_lambda(ltrunc)
        depth = max(ltrunc + abs(self._lpow) + 8, 4)
        terms = {}
        binom = Rat(1)
        for k in range(0, depth // 4 + 1):
            terms[4 * k] = binom
            binom = binom * Rat(self._dpow + k, k + 1)
        geom = LSeries.from_lambda_coeffs(terms, ltrunc=depth)
        return (num * geom).truncate_lambda(ltrunc)

    def __str__(self):
        if not self._numer:
            return "0"
        shift = -self._lpow if self._lpow < 0 else 0
        terms = []
        for e, c in sorted(self._numer.items()):
            ee = e + shift
            cs = str(c)
            neg = cs.startswith("-")
            mag = cs[1:] if neg else cs
            if ee == 0:
                body = mag
            elif mag == "1":
                body = f"L^{ee}" if ee != 1 else "L"
            else:
                body = f"{mag}*L^{ee}" if ee != 1 else f"{mag}*L"
            if not terms:
                terms.append(("-" if neg else "") + body)
            else:
                terms.append((" - " if neg else " + ") + body)
        num = "".join(terms)
        dens = []
        if self._lpow > 0:
            dens.append("L" if self._lpow == 1 else f"L^{self._lpow}")
        if self._dpow > 0:
            dens.append("(1-L^4)" if self._dpow == 1 else f"(1-L^4)^{self._dpow}")
        if not dens:
            return num
        return f"({num})/" + ("*".join(dens) if len(dens) == 1 else "(" + "*".join(dens) + ")")

    def __repr__(self):
        return f"LambdaRational({self})"

    # -- serialization ------------------------------------------------------

    def to_json_fields(self) -> dict:
        return {
            "numerator": [[e, rat_to_str(c)] for e, c in self.numer_items()],
            "lambda_pow": self._lpow,
            "one_minus_l4_pow": self._dpow,
        }

    @classmethod
    def from_json_fields(cls, d: dict) -> "LambdaRational":
        numer = [(int(e), rat_from_str(c)) for e, c in d["numerator"]]
        return cls(numer, d["lambda_pow"], d["one_minus_l4_pow"])


def rational_reconstruct(s: LSeries, a: int, b: int, guard: int = 8) -> LambdaRational:
    """Certify a Lambda series as N / (Lambda^a (1-Lambda^4)^b).

    s must be a pure Lambda series (q^0 slots only).  The series is cleared
    of the stated denominator; the result is accepted only when the cleared
    series is a polynomial with at least `guard` known vanishing coefficients
    past its degree.  Failure to certify raises ValueError.
    """
    if b < 0:
        raise ValueError("denominator power b must be nonnegative")
    coeffs: dict[int, Rat] = {}
    for k, slot in enumerate(s.coeffs):
        e = s.lo + k
        if not slot.is_constant():
            raise ValueError(f"expected a pure Lambda series; Lambda^{e} slot has q-dependence: {slot}")
        v = slot.coeff(0)
        coeffs[e] = as_real(v)
    t = _pmul(_pshift(coeffs, a), _dpow_poly(b))
    valid = None if s.ltrunc is None else s.ltrunc + a
    t = {e: c for e, c in t.items() if c and (valid is None or e < valid)}
    negs = sorted(e for e in t if e < 0)
    if negs:
        raise ValueError(
            f"rational reconstruction not certified: cleared series has a pole term Lambda^{negs[0]} "
            f"outside the shape N/(Lambda^{a}*(1-Lambda^4)^{b})"
        )
    if valid is not None:
        m = max(t) if t else -1
        spare = valid - 1 - m
        if spare < guard:
            raise ValueError(
                f"rational reconstruction not certified: only {max(spare, 0)} vanishing coefficients "
                f"known beyond Lambda^{m}, need {guard}"
            )
    return LambdaRational(t, a, b)
