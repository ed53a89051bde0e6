"""Chamber-limit invariants at the fiber class on the quadric and the one-point blowup.

For a line bundle L = nF + mG the limit series along polarizations
approaching the fiber class F is

    chi_F(L, P^r) = Coeff_{q^0}[ (1/(2 sinh((m/2+1)h))) Lambda^2
                                  thetatilde_4(h)^{2(n+2)(m+2)} u' h* M^r ]
    chi_0(L, P^r) = Coeff_{q^0}[ -(1/2) coth((m/2+1)h) * (same product) ]

For m <= 2 these series are rational in Lambda: a known rational part plus
a polynomial residual with a degree bound coming from the principal parts
of the hyperbolic kernels.  fplus_closed extracts the residual from a
truncated series evaluation, with two guard blocks beyond the bound, and
returns the exact closed form.  principal_part_vector computes the finite
principal parts (all q-exponents <= 0) of the five kernels themselves.
"""

from __future__ import annotations

from gmpy2 import mpq

from ._grid import VW
from .lattice import Surface
from .scalars import Rat
from .series import LambdaRational
from .theta import shared_context

_ONE_MINUS = {0: Rat(1), 4: Rat(-1)}


class BoundarySpec:
    """Input datum: surface, c1 in {0, F}, L = nF + mG, and the point power r."""

    __slots__ = ("surface", "c1", "n", "m", "r", "L")

    def __init__(self, surface: Surface, c1, n, m: int, r: int):
        if not isinstance(surface, Surface) or surface.name not in ("P1xP1", "blowup_P2_1"):
            raise ValueError("boundary invariants live on the quadric or the one-point blowup")
        if c1 == 0:
            c1 = "0"
        if c1 not in ("0", "F"):
            raise ValueError(f"c1 must be '0' or 'F', got {c1!r}")
        if not isinstance(m, int) or m < 0:
            raise ValueError(f"m must be a nonnegative integer, got {m!r}")
        if not isinstance(r, int) or r < 0:
            raise ValueError(f"point power must be a nonnegative integer, got {r!r}")
        n = n if isinstance(n, Rat) else Rat(n)
        if not (n * 2).is_integer():
            raise ValueError(f"n must be an integer or half-integer, got {n}")
        L = surface.cls("F") * n + surface.cls("G") * m
        if not L.is_integral():
            raise ValueError(f"{n}F+{m}G is not an integral class on {surface.name}")
        if (m if c1 == "F" else 0) % 2 != r % 2:
            raise ValueError(f"parity violation: <c1, L> = {m if c1 == 'F' else 0} and point power {r} must agree mod 2")
        self.surface = surface
        self.c1 = c1
        self.n = n
        self.m = m
        self.r = r
        self.L = L

    def __repr__(self):
        return f"BoundarySpec({self.surface.name}, c1={self.c1}, L={self.n}F+{self.m}G, r={self.r})"


def fplus_series(spec: BoundarySpec, K: int) -> dict[int, Rat]:
    """Lambda-coefficients of the boundary series through order K."""
    if not isinstance(K, int) or K < 0:
        raise ValueError(f"order must be a nonnegative integer, got {K!r}")
    e = (spec.n + 2) * (spec.m + 2) * 2
    if not e.is_integer():
        raise ValueError(f"exponent 2(n+2)(m+2) = {e} must be integral")
    ctx = shared_context(K + 1, K + 1)
    prod = ctx._lam2_uprime() * ctx._theta4t_pow(int(e.num)) * ctx._hstar()
    if spec.r:
        prod = prod * ctx._M_pow(spec.r)
    l = mpq(spec.m + 2, 2)
    if spec.c1 == "F":
        prod = prod * ctx._inv_sinh(l).scale(mpq(1, 2))
    else:
        prod = prod * ctx._coth(l).scale(mpq(-1, 2))
    return {d: c for d, c in prod.coeff_q0_lambda().items() if c}


# -- closed-form extraction -------------------------------------------------


def _dmul(p: dict, q: dict, trunc: int) -> dict:
    out: dict = {}
    for a, ca in p.items():
        for b, cb in q.items():
            s = a + b
            if s > trunc:
                continue
            v = out.get(s, Rat(0)) + ca * cb
            if v:
                out[s] = v
            else:
                out.pop(s, None)
    return out


def _pm_pow_series(sign: int, e: int, trunc: int) -> dict:
    """(1 + sign*Lambda^4)^e through Lambda-order trunc, any integer e."""
    out = {0: Rat(1)}
    c = Rat(1)
    for k in range(1, trunc // 4 + 1):
        c = c * Rat(e - k + 1, k) * sign
        if not c:
            break
        out[4 * k] = c
    return out


def _half_binomials(nn: int, even: bool) -> dict:
    """Half sum (1/2)((1+x)^n + (1-x)^n) keeps even k, half difference odd k; x = Lambda^4."""
    assert nn >= 0
    out = {}
    c = Rat(1)
    for k in range(nn + 1):
        if k:
            c = c * Rat(nn - k + 1, k)
        if (k % 2 == 0) == even:
            out[4 * k] = c
    return out


def _lr(numer: dict, dpow: int = 0) -> LambdaRational:
    """numer / (1-Lambda^4)^dpow, folding a negative power into the numerator."""
    if dpow >= 0:
        return LambdaRational(numer, 0, dpow)
    out = LambdaRational(numer)
    for _ in range(-dpow):
        out = out * LambdaRational(_ONE_MINUS)
    return out


def _expand(lr: LambdaRational, trunc: int) -> dict:
    """Coefficient dict of a closed form through Lambda-order trunc."""
    base = {e - lr.lpow: c for e, c in lr.numer_items()}
    if lr.dpow and base:
        ser = _pm_pow_series(-1, -lr.dpow, trunc - min(base))
        base = _dmul(base, ser, trunc)
    return {e: c for e, c in base.items() if e <= trunc and c}


def _rational_part(spec: BoundarySpec) -> LambdaRational:
    """The known rational summand of the closed form; the rest is polynomial."""
    n, m, rs = spec.n, spec.m, spec.r // 2
    if m == 0:
        if spec.r:
            return LambdaRational({})
        return _lr({0: Rat(1)}, int(n.num) + 1)
    if m == 1:
        shift = 1 if spec.c1 == "F" else 2
        return _lr({0: Rat(1)}, int((n * 2).num) + shift - 2 * rs)
    nn = int(n.num)
    if spec.r == 0:
        return _lr(_half_binomials(nn, spec.c1 == "0"), 3 * nn + 3)
    scale = Rat(2 ** (rs - 1))
    numer = {e: c * scale for e, c in _pm_pow_series(1, nn - rs, 4 * (nn - rs)).items()}
    return _lr(numer, 3 * nn + 3 - 2 * rs)


def fplus_closed(spec: BoundarySpec) -> LambdaRational:
    """Exact closed form of the boundary series for m <= 2."""
    if spec.m > 2:
        raise ValueError(f"closed forms cover m <= 2 only, got m = {spec.m}")
    rs = spec.r // 2
    if spec.m == 2 and int(spec.n.num) < rs:
        # the closed form has a (1+Lambda^4)^{n-r} factor with negative
        # exponent, outside the supported coefficient ring
        raise ArithmeticError(f"closed form for n = {spec.n} < {rs} leaves the supported coefficient ring")
    bound = 4 * rs + 4 if spec.m <= 1 else 8 * rs + 8
    K = bound + 8
    series = fplus_series(spec, K)
    rat = _rational_part(spec)
    resid = dict(series)
    for d, c in _expand(rat, K).items():
        v = resid.get(d, Rat(0)) - c
        if v:
            resid[d] = v
        else:
            resid.pop(d, None)
    for d in resid:
        if d % 4 or not 0 <= d <= bound:
            raise ArithmeticError(f"residual term at Lambda^{d} escapes the degree bound {bound}")
    return rat + LambdaRational(resid)


# -- principal parts of the hyperbolic kernels ------------------------------

_PP_EXTRA = {1: 0, 2: 1, 3: 0, 4: 1, 5: 2}


def principal_part_vector(i: int, r: int) -> dict:
    """Principal part of hyperbolic kernel i at point index r, as {(a, b): coeff}.

    Monomial (a, b) stands for (q^{-2} Lambda^2)^a (Lambda^4)^b; the result
    is asserted to lie in the degree box a + b <= r plus the kernel's extra.
    """
    if i not in (1, 2, 3, 4, 5):
        raise ValueError(f"kernel index must be 1..5, got {i!r}")
    if not isinstance(r, int) or r < 1:
        raise ValueError(f"point index must be a positive integer, got {r!r}")
    D = r + _PP_EXTRA[i]
    lorder = 4 * (D + 2) + 1
    ctx = shared_context(1, lorder)
    one = VW.monomial(0, 0, ctx.vtrunc, ctx.wcap)
    lam4 = VW.monomial(4, 1, ctx.vtrunc, ctx.wcap)
    if i in (1, 2):
        extra = ctx._M_pow(2 * r)
    elif i in (3, 4):
        mp = 2 * r - 1 if i == 3 else 2 * r - 2
        extra = ctx._M_pow(mp) * (ctx._M_pow(2) * ctx._theta4t_pow(3) - one + lam4)
    else:
        sq = one - lam4
        extra = ctx._M_pow(2 * r - 2) * (ctx._theta4t_pow(8) * (ctx._M_pow(2) - sq * sq) - one)
    if i == 1:
        kern = ctx._inv_sinh(1).scale(mpq(1, 2))
    elif i == 2:
        kern = ctx._coth(1).scale(mpq(-1, 2))
    elif i == 3:
        kern = ctx._inv_sinh(mpq(3, 2)).scale(mpq(1, 2))
    elif i == 4:
        kern = ctx._coth(mpq(3, 2)).scale(mpq(-1, 2))
    else:
        kern = ctx._tanh(1).scale(mpq(-1, 2))
    prod = ctx._lam2_uprime() * extra * ctx._hstar() * kern
    out = {}
    for s in range(lorder):
        for t in range(s // 4 + 1):
            c = prod.stored(s, t)
            if not c:
                continue
            if s % 2:
                raise ArithmeticError("imaginary entry in a principal part")
            a, b = (s - 4 * t) // 2, t
            if a + b > D:
                raise ArithmeticError(f"principal part escapes its degree box at ({a}, {b})")
            out[(a, b)] = c if s % 4 == 0 else -c
    return out
