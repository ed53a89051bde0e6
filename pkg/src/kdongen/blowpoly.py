"""Blowup polynomials, their identities, and blowdown Bezout certificates.

The two families R_n, S_n are integer polynomials in lambda^4 and x up to one
overall factor of lambda on the S side.  They are generated by quadratic
recursions with exact divisions, realize normalized theta quotients when
evaluated at (Lambda, M), and power the blowdown step through certificates
writing a power of (1 - lambda^4) as a combination of two coprime-index
members.
"""

from __future__ import annotations

import math

from gmpy2 import mpq

from ._grid import VW
from .scalars import Rat, rat_from_str, rat_to_str
from .theta import ThetaContext

Q0 = mpq(0)
Q1 = mpq(1)


# -- polynomials in t over Q ------------------------------------------------


def _tp_trim(a):
    n = len(a)
    while n and not a[n - 1]:
        n -= 1
    return a[:n]


def _tp_add(a, b, sgn=1):
    out = list(a) + [Q0] * (len(b) - len(a)) if len(b) > len(a) else list(a)
    for k, x in enumerate(b):
        out[k] += sgn * x
    return _tp_trim(out)


def _tp_mul(a, b):
    if not a or not b:
        return []
    out = [Q0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _tp_trim(out)


def _tp_scale(a, c):
    return _tp_trim([x * c for x in a]) if c else []


def _tp_divmod(a, b):
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    a = list(a)
    q = [Q0] * max(len(a) - len(b) + 1, 0)
    inv = 1 / b[-1]
    for k in range(len(a) - len(b), -1, -1):
        c = a[k + len(b) - 1] * inv
        if c:
            q[k] = c
            for j, y in enumerate(b):
                a[k + j] -= c * y
    return _tp_trim(q), _tp_trim(a)


def _tp_gcd(a, b):
    a, b = _tp_trim(list(a)), _tp_trim(list(b))
    while b:
        a, b = b, _tp_divmod(a, b)[1]
    if a:
        inv = 1 / a[-1]
        a = [x * inv for x in a]
    return a


class _TF:
    """Rational function in t, denominator monic and coprime to numerator."""

    __slots__ = ("n", "d")

    def __init__(self, n, d=None):
        n = _tp_trim(list(n))
        d = [Q1] if d is None else _tp_trim(list(d))
        if not d:
            raise ZeroDivisionError("rational function with zero denominator")
        if not n:
            self.n, self.d = [], [Q1]
            return
        g = _tp_gcd(n, d)
        if len(g) > 1:
            n = _tp_divmod(n, g)[0]
            d = _tp_divmod(d, g)[0]
        lead = d[-1]
        if lead != 1:
            inv = 1 / lead
            n = [x * inv for x in n]
            d = [x * inv for x in d]
        self.n, self.d = n, d

    def is_zero(self):
        return not self.n

    def is_poly(self):
        return len(self.d) == 1

    def __add__(self, o):
        return _TF(_tp_add(_tp_mul(self.n, o.d), _tp_mul(o.n, self.d)), _tp_mul(self.d, o.d))

    def __sub__(self, o):
        return _TF(_tp_add(_tp_mul(self.n, o.d), _tp_mul(o.n, self.d), -1), _tp_mul(self.d, o.d))

    def __mul__(self, o):
        return _TF(_tp_mul(self.n, o.n), _tp_mul(self.d, o.d))

    def __truediv__(self, o):
        if not o.n:
            raise ZeroDivisionError("division by zero rational function")
        return _TF(_tp_mul(self.n, o.d), _tp_mul(self.d, o.n))

    def __neg__(self):
        return _TF([-x for x in self.n], self.d)

    def __eq__(self, o):
        return self.n == o.n and self.d == o.d


_TF0 = _TF([])
_TF1 = _TF([Q1])


class _XP:
    """Polynomial in x with _TF coefficients."""

    __slots__ = ("c",)

    def __init__(self, c=()):
        c = list(c)
        while c and c[-1].is_zero():
            c.pop()
        self.c = c

    def deg(self):
        return len(self.c) - 1

    def is_zero(self):
        return not self.c

    def __sub__(self, o):
        n = max(len(self.c), len(o.c))
        return _XP([
            (self.c[k] if k < len(self.c) else _TF0) - (o.c[k] if k < len(o.c) else _TF0)
            for k in range(n)
        ])

    def __mul__(self, o):
        if self.is_zero() or o.is_zero():
            return _XP()
        out = [_TF0] * (len(self.c) + len(o.c) - 1)
        for i, x in enumerate(self.c):
            if x.is_zero():
                continue
            for j, y in enumerate(o.c):
                out[i + j] = out[i + j] + x * y
        return _XP(out)

    def scale(self, f: _TF):
        return _XP([x * f for x in self.c])

    def divmod(self, o: "_XP"):
        if o.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        r = list(self.c)
        q = [_TF0] * max(len(r) - len(o.c) + 1, 0)
        lead = o.c[-1]
        for k in range(len(r) - len(o.c), -1, -1):
            f = r[k + len(o.c) - 1] / lead
            if not f.is_zero():
                q[k] = f
                for j, y in enumerate(o.c):
                    r[k + j] = r[k + j] - f * y
        return _XP(q), _XP(r)


def _tp_pow(a, n):
    out = [Q1]
    for _ in range(n):
        out = _tp_mul(out, a)
    return out


# fraction-free layer: polynomials in x stored as lists of t-coefficient lists


def _xz_trim(p):
    while p and not p[-1]:
        p.pop()
    return p


def _xz_scale(p, c):
    return _xz_trim([_tp_mul(row, c) for row in p])


def _xz_sub(a, b):
    n = max(len(a), len(b))
    out = []
    for k in range(n):
        ra = a[k] if k < len(a) else []
        rb = b[k] if k < len(b) else []
        out.append(_tp_add(ra, rb, -1))
    return _xz_trim(out)


def _xz_mul(a, b):
    if not a or not b:
        return []
    out = [[] for _ in range(len(a) + len(b) - 1)]
    for i, ra in enumerate(a):
        if not ra:
            continue
        for j, rb in enumerate(b):
            if rb:
                out[i + j] = _tp_add(out[i + j], _tp_mul(ra, rb))
    return _xz_trim(out)


def _xz_pseudo(a, b):
    """q, r, f with f*a = q*b + r, f = lc(b)^(deg a - deg b + 1), deg r < deg b."""
    d = len(b) - 1
    lc = b[-1]
    dd = len(a) - 1 - d
    assert dd >= 0
    q = [[] for _ in range(dd + 1)]
    r = [list(row) for row in a]
    f = [Q1]
    for k in range(dd, -1, -1):
        c = r[d + k]
        q = [_tp_mul(row, lc) for row in q]
        r = [_tp_mul(row, lc) for row in r]
        f = _tp_mul(f, lc)
        q[k] = c
        if c:
            for j in range(d):
                r[k + j] = _tp_add(r[k + j], _tp_mul(c, b[j]), -1)
        # the top coefficient cancels by construction
        r = r[: d + k]
    return _xz_trim(q), _xz_trim(r), f


def _rows_divexact(rows, beta):
    """Divide every t-coefficient in every row by beta, or report failure."""
    if len(beta) == 1:
        inv = 1 / beta[0]
        return [[_tp_scale(c, inv) for c in p] for p in rows], True
    out = []
    for p in rows:
        op = []
        for c in p:
            if not c:
                op.append([])
                continue
            qt, rm = _tp_divmod(c, beta)
            if rm:
                return rows, False
            op.append(qt)
        out.append(op)
    return out, True


def _ext_euclid_ff(a, b):
    """g, u, v with u*a + v*b = g and g a nonzero t-polynomial.

    Fraction-free subresultant remainder sequence with cofactor rows; the
    beta divisions are verified exactly and skipped when a cofactor resists.
    """
    r0, u0, v0 = a, [[Q1]], []
    r1, u1, v1 = b, [], [[Q1]]
    if len(r0) < len(r1):
        r0, u0, v0, r1, u1, v1 = r1, u1, v1, r0, u0, v0
    g, h = [Q1], [Q1]
    while len(r1) - 1 > 0:
        dd = len(r0) - len(r1)
        q, r2, f = _xz_pseudo(r0, r1)
        u2 = _xz_sub(_xz_scale(u0, f), _xz_mul(q, u1))
        v2 = _xz_sub(_xz_scale(v0, f), _xz_mul(q, v1))
        beta = _tp_mul(g, _tp_pow(h, dd))
        (r2, u2, v2), ok = _rows_divexact((r2, u2, v2), beta)
        if ok:
            gn = r1[-1]
            if dd:
                hp, rm = _tp_divmod(_tp_pow(gn, dd), _tp_pow(h, dd - 1))
                h = hp if not rm else _tp_pow(gn, dd)
            g = gn
        if not r2:
            raise ValueError("inputs share a common factor in x; no certificate exists")
        r0, u0, v0 = r1, u1, v1
        r1, u1, v1 = r2, u2, v2
    return r1[0], u1, v1


_ONEMT = [Q1, mpq(-1)]


def _tp_val_onemt(a):
    """(1 - t)-adic valuation of a nonzero t-polynomial."""
    v = 0
    while True:
        q, r = _tp_divmod(a, _ONEMT)
        if r:
            return v
        a, v = q, v + 1


def _reduced_rows(z, g, mod):
    """Coefficient rows n_j and exponent e with (z/g mod 'mod')_j = n_j/(1-t)^e.

    The factor of the denominator coprime to 1 - t must cancel into every
    coefficient; anything left over disqualifies the certificate.
    """
    f = [Q1]
    if len(z) >= len(mod):
        _, z, f = _xz_pseudo(z, mod)
    den = _tp_mul(g, f)
    e = 0
    while True:
        q, r = _tp_divmod(den, _ONEMT)
        if r:
            break
        den, e = q, e + 1
    out = []
    for c in z:
        if not c:
            out.append([])
            continue
        q, r = _tp_divmod(c, den)
        if r:
            raise ArithmeticError("certificate denominator has a factor other than 1 - t")
        out.append(q)
    return out, e


def _rows_to_bipoly(rows, shift) -> BiPoly:
    """Rows scaled by (1-t)^shift as a BiPoly; negative shifts divide exactly."""
    out = {}
    for j, c in enumerate(rows):
        if not c:
            continue
        if shift >= 0:
            c = _tp_mul(c, _tp_pow(_ONEMT, shift))
        else:
            c, r = _tp_divmod(c, _tp_pow(_ONEMT, -shift))
            if r:
                raise ArithmeticError("certificate normalization failed")
        for i, vc in enumerate(c):
            if vc:
                out[(i, j)] = Rat(vc)
    return BiPoly(out)


def _to_xz(p: BiPoly):
    if p.is_zero():
        return []
    rows = [[] for _ in range(p.xdeg() + 1)]
    for (i, j), v in p.coeffs.items():
        row = rows[j]
        if len(row) <= i:
            row.extend([Q0] * (i + 1 - len(row)))
        row[i] = mpq(v.num, v.den)
    return _xz_trim([_tp_trim(r) for r in rows])


# -- public bivariate polynomials -------------------------------------------


class BiPoly:
    """Polynomial sum c[i,j] t^i x^j with t = lambda^4, times lambda if odd.

    The odd_lambda flag records one overall factor of lambda, so the full
    lambda-degree of a term is 4i + odd_lambda.  Instances are normalized
    (zero coefficients dropped) and treated as immutable.
    """

    __slots__ = ("_c", "_odd")

    def __init__(self, coeffs=(), odd_lambda: bool = False):
        items = coeffs.items() if isinstance(coeffs, dict) else coeffs
        c = {}
        for (i, j), v in items:
            if not (isinstance(i, int) and isinstance(j, int)) or i < 0 or j < 0:
                raise ValueError(f"exponents must be nonnegative integers, got ({i}, {j})")
            v = v if isinstance(v, Rat) else Rat(v)
            if v:
                c[(i, j)] = c.get((i, j), Rat(0)) + v
                if not c[(i, j)]:
                    del c[(i, j)]
        self._c = c
        self._odd = bool(odd_lambda) and bool(c)

    @classmethod
    def const(cls, v) -> "BiPoly":
        return cls({(0, 0): v})

    @classmethod
    def one_minus_t_pow(cls, n: int) -> "BiPoly":
        out = {}
        for k in range(n + 1):
            out[(k, 0)] = Rat((-1) ** k) * math.comb(n, k)
        return cls(out)

    @property
    def coeffs(self) -> dict:
        return dict(self._c)

    @property
    def odd_lambda(self) -> bool:
        return self._odd

    def is_zero(self) -> bool:
        return not self._c

    def coeff(self, i: int, j: int) -> Rat:
        return self._c.get((i, j), Rat(0))

    def xdeg(self) -> int:
        return max((j for _, j in self._c), default=-1)

    def tdeg(self) -> int:
        return max((i for i, _ in self._c), default=-1)

    def is_integral(self) -> bool:
        return all(v.den == 1 for v in self._c.values())

    def __add__(self, o):
        o = self._coerced(o)
        if self._c and o._c and self._odd != o._odd:
            raise ValueError("cannot add polynomials of different lambda parity")
        out = dict(self._c)
        for k, v in o._c.items():
            w = out.get(k, Rat(0)) + v
            if w:
                out[k] = w
            else:
                out.pop(k, None)
        return BiPoly(out, self._odd or o._odd)

    def __sub__(self, o):
        return self + (-self._coerced(o))

    def __neg__(self):
        return BiPoly({k: -v for k, v in self._c.items()}, self._odd)

    def __mul__(self, o):
        o = self._coerced(o)
        if self._odd and o._odd:
            raise ValueError("product of two odd-lambda polynomials leaves the representable ring")
        out = {}
        for (i1, j1), v1 in self._c.items():
            for (i2, j2), v2 in o._c.items():
                k = (i1 + i2, j1 + j2)
                w = out.get(k, Rat(0)) + v1 * v2
                if w:
                    out[k] = w
                else:
                    out.pop(k, None)
        return BiPoly(out, self._odd or o._odd)

    __rmul__ = __mul__

    def _coerced(self, o) -> "BiPoly":
        if isinstance(o, BiPoly):
            return o
        return BiPoly.const(o)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not polynomials")
        if n and self._odd:
            if n > 1:
                raise ValueError("higher powers of an odd-lambda polynomial leave the representable ring")
        out = BiPoly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, o):
        if not isinstance(o, BiPoly):
            return NotImplemented
        return self._c == o._c and self._odd == o._odd

    def __hash__(self):
        return hash((self._odd, tuple(sorted((k, v.num, v.den) for k, v in self._c.items()))))

    def stored_part(self) -> "BiPoly":
        """The same coefficients with the overall lambda factor dropped."""
        return BiPoly(self._c)

    def with_odd_lambda(self) -> "BiPoly":
        return BiPoly(self._c, odd_lambda=True)

    def subs_x_squared(self) -> "BiPoly":
        """Substitute x -> x^2 (all x-exponents doubled)."""
        return BiPoly({(i, 2 * j): v for (i, j), v in self._c.items()}, self._odd)

    def div_exact(self, o: "BiPoly") -> "BiPoly":
        """Exact quotient self / o; aborts when the division leaves a remainder."""
        o = self._coerced(o)
        if o.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if o._odd:
            raise ValueError("cannot divide by an odd-lambda polynomial")
        q, r = _to_xp(self).divmod(_to_xp(o))
        if not r.is_zero() or not all(f.is_poly() for f in q.c):
            raise ArithmeticError("inexact polynomial division in the blowup recursion")
        return _from_xp(q, self._odd)

    def eval_xnum(self, x: Rat) -> "list":
        """Partial evaluation at a rational x; returns t-coefficients."""
        out: dict[int, Rat] = {}
        for (i, j), v in self._c.items():
            out[i] = out.get(i, Rat(0)) + v * x**j
        n = max(out, default=-1) + 1
        return [out.get(k, Rat(0)) for k in range(n)]

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for (i, j), v in sorted(self._c.items()):
            monos = ([f"t^{i}"] if i else []) + ([f"x^{j}"] if j else [])
            parts.append("*".join([str(v)] + monos))
        body = " + ".join(parts)
        return f"lam*({body})" if self._odd else body

    def __repr__(self):
        return f"BiPoly({len(self._c)} terms, odd_lambda={self._odd})"

    def to_json(self) -> list:
        out = [[i, j, rat_to_str(v)] for (i, j), v in sorted(self._c.items())]
        return out

    @classmethod
    def from_json(cls, data, odd_lambda: bool = False) -> "BiPoly":
        return cls({(int(i), int(j)): rat_from_str(s) for i, j, s in data}, odd_lambda)


def _to_xp(p: BiPoly) -> _XP:
    cols: dict[int, list] = {}
    for (i, j), v in p._c.items():
        cols.setdefault(j, []).append((i, v))
    deg = max(cols, default=-1)
    out = []
    for j in range(deg + 1):
        tv = [Q0] * (max((i for i, _ in cols.get(j, [])), default=-1) + 1)
        for i, v in cols.get(j, ()):
            tv[i] = mpq(v.num, v.den)
        out.append(_TF(tv))
    return _XP(out)


def _from_xp(p: _XP, odd: bool = False) -> BiPoly:
    out = {}
    for j, f in enumerate(p.c):
        if not f.is_poly():
            raise ArithmeticError("coefficient is not polynomial in t")
        for i, v in enumerate(f.n):
            if v:
                out[(i, j)] = Rat(v)
    return BiPoly(out, odd)


# -- the two recursive families ---------------------------------------------

_R_MEMO: dict[int, BiPoly] = {}
_S_MEMO: dict[int, BiPoly] = {}
_T = BiPoly({(1, 0): 1})


def _r(n: int) -> BiPoly:
    """R_n; even in lambda."""
    if n < 0:
        return _r(-n)
    hit = _R_MEMO.get(n)
    if hit is None:
        if n <= 1:
            hit = BiPoly.const(1)
        else:
            a, b = _r(n - 1), _s(n - 1)
            # lambda^2 S^2 = t * (stored S)^2
            hit = (a * a - _T * b * b).div_exact(_r(n - 2))
        _R_MEMO[n] = hit
    return hit


def _s(n: int) -> BiPoly:
    """Stored part of S_n, the polynomial left after removing one lambda."""
    if n < 0:
        return -_s(-n)
    hit = _S_MEMO.get(n)
    if hit is None:
        if n == 0:
            hit = BiPoly()
        elif n == 1:
            hit = BiPoly.const(1)
        elif n == 2:
            hit = BiPoly({(0, 1): 1})
        else:
            a, b = _s(n - 1), _r(n - 1)
            hit = (a * a - b * b).div_exact(_s(n - 2))
        _S_MEMO[n] = hit
    return hit


def R(n: int) -> BiPoly:
    """Blowup polynomial R_n in Z[lambda^4, x^2]."""
    p = _r(n)
    assert p.is_integral()
    return p


def S(n: int) -> BiPoly:
    """Blowup polynomial S_n; carries one overall factor of lambda."""
    p = _s(n)
    assert p.is_integral()
    return p.with_odd_lambda()


def verify_doubling(n: int) -> bool:
    """Index-doubling identities for R_{2n} and S_{2n}."""
    rn, sn = _r(n), _s(n)
    # S_n^4 = lambda^4 (stored S_n)^4 = t * stored^4
    lhs_r = _r(2 * n)
    rhs_r = rn * rn * rn * rn - _T * sn * sn * sn * sn
    lhs_s = _s(2 * n)
    rhs_s = rn * sn * (_s(n + 1) * _r(n - 1) - _r(n + 1) * _s(n - 1))
    return lhs_r == rhs_r and lhs_s == rhs_s


def _inv_terms(p: BiPoly, negate_x: bool = False):
    """Terms of p(1/lambda, x/lambda^2) as {(lambda_exp, x_exp): value}."""
    out = {}
    delta = 1 if p.odd_lambda else 0
    for (i, j), v in p.coeffs.items():
        if negate_x and j % 2:
            v = -v
        out[(-delta - 4 * i - 2 * j, j)] = v
    return out


def _shift_terms(p: BiPoly, shift: int, sign: int):
    out = {}
    delta = 1 if p.odd_lambda else 0
    for (i, j), v in p.coeffs.items():
        out[(delta + 4 * i + shift, j)] = sign * v
    return out


def verify_inversion_symmetry(n: int) -> bool:
    """Behaviour of R_n, S_n under lambda -> 1/lambda, x -> x/lambda^2."""
    if n < 0:
        n = -n
    rn, sn = R(n), S(n)
    if n % 2 == 0:
        eps = (-1) ** (n // 2)
        ok_r = _inv_terms(rn) == _shift_terms(rn, -n * n, eps)
        ok_s = _inv_terms(sn) == _shift_terms(sn, -n * n, -eps)
    else:
        eps = (-1) ** ((n - 1) // 2)
        ok_r = _inv_terms(rn) == _shift_terms(sn, -n * n, eps)
        ok_s = _inv_terms(sn) == _shift_terms(rn, -n * n, eps)
    return ok_r and ok_s


# -- Bezout certificates -----------------------------------------------------


class BezoutCert:
    """h * A_n + l * A_m = (1 - t)^power on the lambda-stripped members.

    kind "R" combines R_n and R_m; kind "S" combines the stored parts of
    S_n and S_m, so the full identity there reads
    lambda (1 - lambda^4)^power = h S_n + l S_m.
    """

    __slots__ = ("n", "m", "kind", "h", "l", "power")

    def __init__(self, n, m, kind, h, l, power):
        self.n, self.m, self.kind = n, m, kind
        self.h, self.l = h, l
        self.power = power

    def __repr__(self):
        return f"BezoutCert(kind={self.kind}, n={self.n}, m={self.m}, power={self.power})"


_BEZOUT_MEMO: dict[tuple, BezoutCert] = {}
_ONE_MINUS_T = BiPoly({(0, 0): 1, (1, 0): -1})


def _divides(p: BiPoly, d: BiPoly) -> bool:
    try:
        p.div_exact(d)
        return True
    except ArithmeticError:
        return False


def _bezout_degenerate(n: int, m: int, kind: str, A: BiPoly, B: BiPoly) -> BezoutCert:
    """Certificate when one member has no x-dependence.

    Such a member must be c (1 - t)^a; the minimal certificate rides on it
    alone, with zero cofactor on the other side (the degree-reduced pair).
    """
    best = None
    for C, slot in ((A, 0), (B, 1)):
        if any(j for _, j in C.coeffs):
            continue
        tv = [Q0] * (C.tdeg() + 1)
        for (i, _), v in C.coeffs.items():
            tv[i] = mpq(v.num, v.den)
        a = 0
        while len(tv) > 1:
            q, r = _tp_divmod(tv, [Q1, mpq(-1)])
            if r:
                break
            tv, a = q, a + 1
        if len(tv) > 1:
            raise ArithmeticError("constant member is not a power of 1 - t")
        if best is None or a < best[0]:
            best = (a, tv[0], slot)
    a, c, slot = best
    if a > 0:
        other = B if slot == 0 else A
        at_one = {}
        for (i, j), v in other.coeffs.items():
            at_one[j] = at_one.get(j, Rat(0)) + v
        if not any(v for j, v in at_one.items() if j > 0):
            if at_one.get(0, Rat(0)):
                raise ArithmeticError("degenerate pair admits a smaller power; unsupported shape")
            # both members vanish on t = 1; only a single power is argued minimal
            assert a <= 1
    h = BiPoly.const(Rat(1 / c))
    zero = BiPoly()
    hA, lB = (h, zero) if slot == 0 else (zero, h)
    if hA * A + lB * B != BiPoly.one_minus_t_pow(a):
        raise ArithmeticError("certificate failed verification")
    return BezoutCert(n, m, kind, hA, lB, a)


def bezout_cert(n: int, m: int, kind: str) -> BezoutCert:
    """Minimal-power certificate for coprime indices n, m."""
    if kind not in ("R", "S"):
        raise ValueError(f"kind must be 'R' or 'S', got {kind!r}")
    if math.gcd(n, m) != 1:
        raise ValueError(f"indices must be coprime, got ({n}, {m})")
    key = (n, m, kind)
    hit = _BEZOUT_MEMO.get(key)
    if hit is not None:
        return hit
    A = _r(n) if kind == "R" else _s(n)
    B = _r(m) if kind == "R" else _s(m)
    if A.is_zero() or B.is_zero():
        raise ValueError("member with index 0 on the S side has no certificate")
    if min(A.xdeg(), B.xdeg()) == 0:
        cert = _bezout_degenerate(n, m, kind, A, B)
        _BEZOUT_MEMO[key] = cert
        return cert
    az, bz = _to_xz(A), _to_xz(B)
    g, uz, vz = _ext_euclid_ff(az, bz)
    ru, eu = _reduced_rows(uz, g, bz)
    rv, ev = _reduced_rows(vz, g, az)
    power = 0
    for rows, e in ((ru, eu), (rv, ev)):
        for c in rows:
            if c:
                power = max(power, e - _tp_val_onemt(c))
    h = _rows_to_bipoly(ru, power - eu)
    l = _rows_to_bipoly(rv, power - ev)
    target = BiPoly.one_minus_t_pow(power)
    if h * A + l * B != target:
        raise ArithmeticError("certificate failed verification")
    if power > 0 and _divides(h, _ONE_MINUS_T) and _divides(l, _ONE_MINUS_T):
        # the reduced pair for one power less would be (h, l)/(1 - t)
        raise ArithmeticError("certificate power is not minimal")
    if kind == "R":
        assert all(j % 2 == 0 for _, j in h.coeffs), "R certificate must be even in x"
        assert all(j % 2 == 0 for _, j in l.coeffs), "R certificate must be even in x"
    cert = BezoutCert(n, m, kind, h, l, power)
    _BEZOUT_MEMO[key] = cert
    return cert


# -- evaluation on the series grid ------------------------------------------


def eval_poly_at_PM(poly: BiPoly, ctx: ThetaContext) -> VW:
    """Evaluate at t = Lambda^4, x = M as a grid object.

    Only even-lambda polynomials land on the grid; for an odd one evaluate
    its stored part and apply the leftover Lambda shift on the final series.
    """
    if poly.odd_lambda:
        raise ValueError("odd-lambda polynomial: evaluate stored_part() and shift the result by Lambda")
    acc = VW.zero(ctx.vtrunc, ctx.wcap)
    cols: dict[int, dict] = {}
    for (i, j), v in poly.coeffs.items():
        cols.setdefault(j, {})[4 * i] = [Q0] * i + [mpq(v.num, v.den)]
    for j, rows in sorted(cols.items()):
        base = VW.from_stored_rows(rows, ctx.vtrunc, ctx.wcap)
        acc = acc + base * ctx._M_pow(j)
    return acc
