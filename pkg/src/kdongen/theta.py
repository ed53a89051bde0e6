"""Theta-function ingredients for the wallcrossing and boundary formulas.

The nome convention is the eighth-root one: series track powers of
q = e^{pi i tau / 4}, and y = e^{h/2}.  The four theta functions are

    theta_1(h) = sum_n i^{2n-1} q^{(2n+1)^2} y^{2n+1}
    theta_2(h) = sum_n q^{(2n+1)^2} y^{2n+1}
    theta_3(h) = sum_n q^{(2n)^2}   y^{2n}
    theta_4(h) = sum_n i^{2n} q^{(2n)^2} y^{2n}

with constants theta_k := theta_k(0) for k in {2,3,4}.  Everything downstream
(u, M, h*, u', normalized quotients) is assembled here on the internal
(v, w) = (Lambda/q, q^4) grid; public accessors convert to LSeries/QLaurent.

A ThetaContext fixes the working orders: Lambda-slots below lorder are
computed, with every slot complete through q-exponents below qorder.  All
ingredients are memoized per context.
"""

from __future__ import annotations

import math
from fractions import Fraction

from gmpy2 import mpq

from ._grid import VW, winv, wmul, wpow, wtrim
from .scalars import Rat
from .series import LSeries, QLaurent

Q0 = mpq(0)
Q1 = mpq(1)


def _half(l) -> "mpq":
    """Coerce to an integer or half-integer mpq."""
    if isinstance(l, Rat):
        v = mpq(l.num, l.den)
    elif isinstance(l, (int, Fraction, type(Q0))):
        v = mpq(l)
    else:
        raise TypeError(f"expected an integer or half-integer, got {l!r}")
    if v.denominator not in (1, 2):
        raise ValueError(f"expected an integer or half-integer, got {l}")
    return v


def _spread4(lo: int, wvec, trunc: int) -> QLaurent:
    """QLaurent with coefficients wvec[t] at exponents lo + 4t."""
    coeffs = []
    for t, x in enumerate(wvec):
        coeffs.append(Rat(mpq(x)))
        if t < len(wvec) - 1:
            coeffs.extend([Rat(0)] * 3)
    return QLaurent(lo, coeffs, trunc)


class ThetaContext:
    """Shared, memoized theta-series workspace at fixed (qorder, lorder)."""

    def __init__(self, qorder: int, lorder: int):
        if not (isinstance(qorder, int) and isinstance(lorder, int)):
            raise TypeError("orders must be integers")
        if qorder < 1 or lorder < 1:
            raise ValueError("orders must be at least 1")
        self.qorder = qorder
        self.lorder = lorder
        self.vtrunc = lorder
        self.wcap = max((qorder - 1 + lorder - 1) // 4, 0)
        self._memo: dict = {}

    def _cached(self, name, param, builder):
        key = (name, param, self.qorder, self.lorder)
        hit = self._memo.get(key)
        if hit is None:
            hit = builder()
            self._memo[key] = hit
        return hit

    # -- theta constants as w-series ----------------------------------------

    def _w_theta3(self):
        def build():
            out = [Q0] * (self.wcap + 1)
            out[0] = Q1
            n = 1
            while n * n <= self.wcap:
                out[n * n] = mpq(2)
                n += 1
            return wtrim(out)

        return self._cached("w_theta3", None, build)

    def _w_theta4(self):
        def build():
            out = [Q0] * (self.wcap + 1)
            out[0] = Q1
            n = 1
            while n * n <= self.wcap:
                out[n * n] = mpq(2) if n % 2 == 0 else mpq(-2)
                n += 1
            return wtrim(out)

        return self._cached("w_theta4", None, build)

    def _w_theta2q(self):
        # theta_2 / q: exponents (2n+1)^2 - 1 = 4n(n+1), i.e. w^{n(n+1)}
        def build():
            out = [Q0] * (self.wcap + 1)
            n = 0
            while n * (n + 1) <= self.wcap:
                out[n * (n + 1)] += mpq(2)
                n += 1
            return wtrim(out)

        return self._cached("w_theta2q", None, build)

    def _w_B(self):
        # B = theta_2 theta_3 / q, a w-unit with B(0) = 2
        return self._cached("w_B", None, lambda: wmul(self._w_theta2q(), self._w_theta3(), self.wcap))

    def _w_Binv(self):
        return self._cached("w_Binv", None, lambda: winv(self._w_B(), self.wcap))

    def _w_U(self):
        # U = u q^2 = -w t2q^2/t3^2 - t3^2/t2q^2, with U(0) = -1/4
        def build():
            t2q2 = wmul(self._w_theta2q(), self._w_theta2q(), self.wcap)
            t32 = wmul(self._w_theta3(), self._w_theta3(), self.wcap)
            a = wmul(t2q2, winv(t32, self.wcap), self.wcap)
            b = wmul(t32, winv(t2q2, self.wcap), self.wcap)
            out = [Q0] + [-x for x in a[: self.wcap]]
            for k, x in enumerate(b):
                if k < len(out):
                    out[k] -= x
                else:
                    out.append(-x)
            return wtrim(out)

        return self._cached("w_U", None, build)

    def _w_Upow(self, k: int):
        if k == 0:
            return [Q1]
        prev = self._w_Upow(k - 1)
        return self._cached("w_Upow", k, lambda: wmul(prev, self._w_U(), self.wcap))

    def _w_t4pow(self, e: int):
        return self._cached("w_t4pow", e, lambda: wpow(self._w_theta4(), e, self.wcap))

    # -- public q-series ----------------------------------------------------

    def theta_const(self, k: int) -> QLaurent:
        """theta_k as a q-series, k in {2, 3, 4}."""
        if k == 1:
            raise ValueError("theta_1 vanishes at h = 0; only k in {2, 3, 4} have constants")
        if k == 2:
            return _spread4(1, self._w_theta2q(), 4 * (self.wcap + 1) + 1)
        if k == 3:
            return _spread4(0, self._w_theta3(), 4 * (self.wcap + 1))
        if k == 4:
            return _spread4(0, self._w_theta4(), 4 * (self.wcap + 1))
        raise ValueError(f"no theta constant with index {k}")

    def u_series(self) -> QLaurent:
        """u = -theta_2^2/theta_3^2 - theta_3^2/theta_2^2; exponents are 2 mod 4."""
        return _spread4(-2, self._w_U(), 4 * (self.wcap + 1) - 2)

    def uprime_series(self) -> QLaurent:
        """du/dh at h=0 direction: u' = 2 theta_4^8 / (theta_2 theta_3)^2."""
        def build():
            up = wmul(self._w_t4pow(8), wmul(self._w_Binv(), self._w_Binv(), self.wcap), self.wcap)
            return [2 * x for x in up]

        return _spread4(-2, self._cached("w_uprime", None, build), 4 * (self.wcap + 1) - 2)

    # -- h and exponentials on the grid -------------------------------------

    def _h(self) -> VW:
        """h as a function of Lambda: odd Lambda-rows, stored twist-free."""

        def build():
            binomhalf = [Q1]
            nmax = max((self.vtrunc - 2) // 2, 0)
            for n in range(1, nmax + 1):
                binomhalf.append(binomhalf[-1] * mpq(-(2 * n - 1), 2 * n))
            binv = self._w_Binv()
            rows: dict[int, list] = {}
            for s in range(1, self.vtrunc, 2):
                k0 = ((s - 1) // 2) % 2
                acc = [Q0] * (self.wcap + 1)
                any_term = False
                for k in range(k0, (s - 1) // 2 + 1, 2):
                    n = (s - 1 + 2 * k) // 4
                    assert 4 * n == s - 1 + 2 * k and 0 <= k <= n
                    c = binomhalf[n] * math.comb(n, k) * (2 if k % 2 == 0 else -2)
                    shift = n - k
                    if shift > self.wcap:
                        continue
                    for t, x in enumerate(self._w_Upow(k)):
                        if shift + t > self.wcap:
                            break
                        if x:
                            acc[shift + t] += c * x
                            any_term = True
                if not any_term:
                    continue
                row = wmul(acc, binv, self.wcap)
                rows[s] = [x / s for x in row]
            return VW.from_stored_rows(rows, self.vtrunc, self.wcap)

        return self._cached("h", None, build)

    def _exp_lh(self, l) -> VW:
        l = _half(l)
        return self._cached("exp_lh", l, lambda: self._h().scale(l).exp_v())

    def _sinh(self, l) -> VW:
        return self._cached("sinh", _half(l), lambda: self._exp_lh(l).odd_rows())

    def _cosh(self, l) -> VW:
        return self._cached("cosh", _half(l), lambda: self._exp_lh(l).even_rows())

    def _inv_sinh(self, l) -> VW:
        lh = _half(l)
        if not lh:
            raise ValueError("1/sinh(l h) is singular at l = 0")
        return self._cached("inv_sinh", lh, lambda: self._sinh(l).invert_v())

    def _coth(self, l) -> VW:
        lh = _half(l)
        if not lh:
            raise ValueError("coth(l h) is singular at l = 0")
        return self._cached("coth", lh, lambda: self._cosh(l) * self._inv_sinh(l))

    def _tanh(self, l) -> VW:
        return self._cached("tanh", _half(l), lambda: self._sinh(l) * self._cosh(l).invert_v())

    # -- theta quotients with argument a multiple of h ----------------------

    def _theta4h_n(self, n: int) -> VW:
        """theta_4(n h) on the grid."""

        def build():
            acc = VW.monomial(0, 0, self.vtrunc, self.wcap)
            if n:
                en = self._exp_lh(n)
                pw = None
                k = 1
                while k * k <= self.wcap:
                    pw = en if pw is None else pw * en
                    term = pw.even_rows().times_w(k * k).scale(-2 if k % 2 else 2)
                    acc = acc + term.restrict(vtrunc=self.vtrunc, wcap=self.wcap)
                    k += 1
            else:
                # theta_4(0)/1 handled via constants; n = 0 gives the constant row
                return VW.from_stored_rows({0: self._w_theta4()}, self.vtrunc, self.wcap)
            return acc

        return self._cached("theta4h_n", n, build)

    def _theta4t_n(self, n: int) -> VW:
        """Normalized theta_4(n h)/theta_4."""
        return self._cached(
            "theta4t_n", n, lambda: self._theta4h_n(n).mul_wseries(winv(self._w_theta4(), self.wcap))
        )

    def _theta4t(self) -> VW:
        return self._theta4t_n(1)

    def _theta4t_pow(self, e: int) -> VW:
        return self._cached("theta4t_pow", e, lambda: self._theta4t().pow_int(e))

    def _theta2t_h(self) -> VW:
        """Normalized theta_2(h)/theta_2."""

        def build():
            acc = VW.zero(self.vtrunc, self.wcap)
            eh = self._exp_lh(mpq(1, 2))
            eh2 = eh * eh
            pw = eh
            k = 0
            while k * (k + 1) <= self.wcap:
                term = pw.even_rows().times_w(k * (k + 1)).scale(2)
                acc = acc + term.restrict(vtrunc=self.vtrunc, wcap=self.wcap)
                pw = pw * eh2
                k += 1
            return acc.mul_wseries(winv(self._w_theta2q(), self.wcap))

        return self._cached("theta2t_h", None, build)

    def _theta3t_h(self) -> VW:
        """Normalized theta_3(h)/theta_3."""

        def build():
            acc = VW.monomial(0, 0, self.vtrunc, self.wcap)
            en = self._exp_lh(1)
            pw = None
            k = 1
            while k * k <= self.wcap:
                pw = en if pw is None else pw * en
                term = pw.even_rows().times_w(k * k).scale(2)
                acc = acc + term.restrict(vtrunc=self.vtrunc, wcap=self.wcap)
                k += 1
            return acc.mul_wseries(winv(self._w_theta3(), self.wcap))

        return self._cached("theta3t_h", None, build)

    def _theta1q_n(self, n: int) -> VW:
        """theta_1(n h) / (q v); rows are stored twist-free and real."""

        def build():
            acc = VW.zero(self.vtrunc, self.wcap)
            eh = self._exp_lh(mpq(n, 2))
            eh2 = eh * eh
            pw = eh
            k = 0
            while k * (k + 1) <= self.wcap:
                term = pw.odd_rows().times_iv(-1).times_w(k * (k + 1)).scale(-2 if k % 2 else 2)
                acc = acc + term.restrict(vtrunc=self.vtrunc, wcap=self.wcap)
                pw = pw * eh2
                k += 1
            return acc

        return self._cached("theta1q_n", n, build)

    # -- M, h*, u' Lambda^2 --------------------------------------------------

    def _M_inner(self) -> VW:
        """1 + u Lambda^2 + Lambda^4, the radicand of M/2."""

        def build():
            inner = VW.from_stored_rows(
                {0: [Q1], 2: [-x for x in self._w_U()]}, self.vtrunc, self.wcap
            )
            return inner + VW.monomial(4, 1, self.vtrunc, self.wcap)

        return self._cached("M_inner", None, build)

    def _M(self) -> VW:
        return self._cached("M", None, lambda: self._M_inner().sqrt_unit().scale(2))

    def _M_pow(self, r: int) -> VW:
        return self._cached("M_pow", r, lambda: self._M().pow_int(r))

    def _M_quotient(self) -> VW:
        """Cross-check route: M = 2 theta2t(h) theta3t(h) / theta4t(h)^2."""

        def build():
            num = self._theta2t_h() * self._theta3t_h()
            return (num * self._theta4t_pow(-2)).scale(2)

        return self._cached("M_quotient", None, build)

    def _hstar(self) -> VW:
        """h* = 4 i Lambda / (theta_2 theta_3 M)."""

        def build():
            base = self._M_pow(-1).mul_wseries([4 * x for x in self._w_Binv()])
            return base.times_iv(1)

        return self._cached("hstar", None, build)

    def _lam2_uprime(self) -> VW:
        """Lambda^2 u' as a grid object (u' alone sits off-grid)."""

        def build():
            up = wmul(self._w_t4pow(8), wmul(self._w_Binv(), self._w_Binv(), self.wcap), self.wcap)
            return VW.from_stored_rows({2: [-2 * x for x in up]}, self.vtrunc, self.wcap)

        return self._cached("lam2_uprime", None, build)

    # -- public LSeries accessors -------------------------------------------

    def h_of_lambda(self) -> LSeries:
        """h as a Lambda series with q-Laurent coefficients."""
        return self._h().to_lseries()

    def exp_lh(self, l) -> LSeries:
        """exp(l h) for integer or half-integer l."""
        return self._exp_lh(l).to_lseries()

    def sinh_lh(self, l) -> LSeries:
        return self._sinh(l).to_lseries()

    def cosh_lh(self, l) -> LSeries:
        return self._cosh(l).to_lseries()

    def coth_lh(self, l) -> LSeries:
        return self._coth(l).to_lseries()

    def tanh_lh(self, l) -> LSeries:
        return self._tanh(l).to_lseries()

    def inv_sinh_lh(self, l) -> LSeries:
        return self._inv_sinh(l).to_lseries()

    def theta4t_h_pow(self, e: int) -> LSeries:
        """Normalized theta_4(h)/theta_4 raised to an integer power."""
        return self._theta4t_pow(e).to_lseries()

    def M_series(self) -> LSeries:
        """M = 2 sqrt(1 + u Lambda^2 + Lambda^4)."""
        return self._M().to_lseries()

    def M_quotient_series(self) -> LSeries:
        return self._M_quotient().to_lseries()

    def hstar_series(self) -> LSeries:
        return self._hstar().to_lseries()

    def lambda_of_h_check(self) -> bool:
        """Round trip: theta_1(h)/theta_4(h) recovers Lambda exactly."""
        lhs = self._theta1q_n(1)
        rhs = self._theta4h_n(1)
        return (lhs - rhs).is_zero()

    def __repr__(self):
        return f"ThetaContext(qorder={self.qorder}, lorder={self.lorder})"


_SHARED: dict = {}


def shared_context(qorder: int, lorder: int) -> ThetaContext:
    """Process-wide context memo keyed by the working orders."""
    key = (qorder, lorder)
    ctx = _SHARED.get(key)
    if ctx is None:
        ctx = _SHARED[key] = ThetaContext(qorder, lorder)
    return ctx
