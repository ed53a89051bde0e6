"""Wallcrossing terms delta_xi(L, P^r) and weighted wall sums.

A wall class xi with xi^2 < 0 contributes the q^0 coefficient of

    2 i^{<xi,K>} Lambda^2 q^{-xi^2} y^{<xi,L-K>} thetatilde_4(h)^{(L-K)^2}
        theta_4^{sigma} u' h* M^r

read as a Laurent polynomial in Lambda.  Nonzero coefficients only sit at
exponents d with -xi^2 <= d <= A and d = -xi^2 (mod 4), where

    A = xi^2 + 2|<xi,L-K>| + 2r + 4,

so each wall is evaluated in its own workspace at orders (q^{A+1},
Lambda^{A+1}).  Workspaces and computed terms are memoized at module level;
all arithmetic is exact.
"""

from __future__ import annotations

import json

from gmpy2 import mpq

from .blowpoly import BiPoly
from .lattice import Surface, SurfaceClass
from .scalars import Rat
from .series import LambdaRational
from .theta import ThetaContext, shared_context

_TERMS: dict = {}


def _context(order: int) -> ThetaContext:
    return shared_context(order, order)


def _as_int(q: Rat, what: str) -> int:
    if not q.is_integer():
        raise ValueError(f"{what} must be integral, got {q}")
    return int(q.num)


class WallTerm:
    """One wallcrossing term: the Laurent polynomial in Lambda plus its data."""

    __slots__ = ("xi", "L", "r", "value", "order_bound")

    def __init__(self, xi: SurfaceClass, L: SurfaceClass, r: int, value: LambdaRational, order_bound: int):
        if value.dpow != 0:
            raise ValueError("wall term value must be a Laurent polynomial")
        sq = _as_int(xi.square(), "xi^2")
        for e, _ in value.numer_items():
            d = e - value.lpow
            # support window from the vanishing bound, parity from the q-shift
            if not (-sq <= d <= order_bound) or (d + sq) % 4:
                raise ValueError(f"wall term coefficient at Lambda^{d} violates the support window")
        self.xi = xi
        self.L = L
        self.r = r
        self.value = value
        self.order_bound = order_bound

    def coeffs(self) -> dict[int, Rat]:
        return {e - self.value.lpow: c for e, c in self.value.numer_items()}

    def __repr__(self):
        return f"WallTerm(xi={self.xi}, L={self.L}, r={self.r}, value={self.value})"


def _wall_data(X: Surface, xi: SurfaceClass, L: SurfaceClass, r: int):
    """Validate preconditions and return (sq, n, lk2, kxi, A)."""
    xi = X.cls(xi)
    L = X.cls(L)
    if not isinstance(r, int) or r < 0:
        raise ValueError(f"point power must be a nonnegative integer, got {r!r}")
    if not xi.is_integral():
        raise ValueError(f"wall class must be integral, got {xi}")
    sq = _as_int(xi.square(), "xi^2")
    if sq >= 0:
        raise ValueError(f"wall class must have negative square, got xi^2 = {sq}")
    # the crossing formula assumes polarizations pairing negatively with K;
    # every surface built here has K negative on the whole nef cone, checked
    # on the first basis ray
    assert X.cls(X.labels[0]).pair(X.K) < 0, "surface has no polarization with <omega, K> < 0"
    lmk = L - X.K
    n = _as_int(xi.pair(lmk), "<xi, L-K>")
    lk2 = _as_int(lmk.square(), "(L-K)^2")
    kxi = _as_int(xi.pair(X.K), "<xi, K>")
    if (n + kxi - r) % 2:
        raise ValueError(f"parity violation: <xi, L> = {n + kxi} and point power {r} must agree mod 2")
    return xi, L, sq, n, lk2, kxi, sq + 2 * abs(n) + 2 * r + 4


def _crossing_coeffs(X: Surface, sq: int, n: int, lk2: int, r: int, kxi: int, A: int) -> dict[int, Rat]:
    """q^0 coefficients of the crossing product at orders (q^{A+1}, Lambda^{A+1})."""
    ctx = _context(A + 1)
    prod = ctx._lam2_uprime() * ctx._exp_lh(mpq(n, 2)) * ctx._theta4t_pow(lk2)
    if r:
        prod = prod * ctx._M_pow(r)
    prod = prod * ctx._hstar()
    if X.sigma:
        prod = prod.mul_wseries(ctx._w_t4pow(X.sigma))
    out: dict[int, Rat] = {}
    for d in range(-sq, A + 1, 4):
        c = prod.stored(d, (d + sq) // 4)
        if not c:
            continue
        k = (kxi + d) % 4
        if k % 2:
            raise ArithmeticError(f"imaginary residue at Lambda^{d} in a wallcrossing term")
        out[d] = (Rat(2) if k == 0 else Rat(-2)) * c
    return out


def delta(X: Surface, xi, L, r: int) -> WallTerm:
    """Wallcrossing term delta_xi(L, P^r) on X as a WallTerm."""
    xi, L, sq, n, lk2, kxi, A = _wall_data(X, xi, L, r)
    key = (X, xi.d, L.d, r)
    hit = _TERMS.get(key)
    if hit is not None:
        return hit
    coeffs = _crossing_coeffs(X, sq, n, lk2, r, kxi, A) if A >= -sq else {}
    term = WallTerm(xi, L, r, LambdaRational(coeffs), A)
    _TERMS[key] = term
    return term


def delta_symmetrized(X: Surface, xi, L, r: int) -> WallTerm:
    """Cross-check route: (delta_xi - delta_{-xi}) / 2, assembled independently."""
    xi, L, sq, n, lk2, kxi, A = _wall_data(X, xi, L, r)
    if A < -sq:
        return WallTerm(xi, L, r, LambdaRational({}), A)
    plus = _crossing_coeffs(X, sq, n, lk2, r, kxi, A)
    minus = _crossing_coeffs(X, sq, -n, lk2, r, -kxi, A)
    half = Rat(1, 2)
    coeffs = {d: half * (plus.get(d, Rat(0)) - minus.get(d, Rat(0))) for d in set(plus) | set(minus)}
    return WallTerm(xi, L, r, LambdaRational(coeffs), A)


def p_monomial(j: int, lam_exp: int = 0, coeff=1) -> dict:
    """The point-polynomial monomial coeff * Lambda^lam_exp * P^j."""
    if not isinstance(j, int) or j < 0:
        raise ValueError(f"P exponent must be a nonnegative integer, got {j!r}")
    return {(lam_exp, j): Rat(coeff) if not isinstance(coeff, Rat) else coeff}


def _as_rpoly(rpoly) -> dict:
    """Normalize a point polynomial to {(lambda_exp, p_exp): Rat}."""
    if isinstance(rpoly, BiPoly):
        odd = 1 if rpoly.odd_lambda else 0
        return {(4 * i + odd, j): c for (i, j), c in rpoly.coeffs.items()}
    if isinstance(rpoly, dict):
        out = {}
        for key, c in rpoly.items():
            i, j = key
            if not (isinstance(i, int) and isinstance(j, int)) or j < 0:
                raise ValueError(f"point-polynomial exponents must be integers with P power >= 0, got {key!r}")
            v = c if isinstance(c, Rat) else Rat(c)
            if v:
                out[(i, j)] = v
        return out
    if isinstance(rpoly, (int, Rat)):
        v = rpoly if isinstance(rpoly, Rat) else Rat(rpoly)
        return {(0, 0): v} if v else {}
    raise ValueError(f"cannot read {rpoly!r} as a polynomial in P")


def _emit_trace(trace, record: dict):
    if callable(trace):
        trace(record)
    else:
        trace.write(json.dumps(record) + "\n")


def wall_sum(X: Surface, walls, L, rpoly, trace=None) -> LambdaRational:
    """Weighted sum of wallcrossing terms, extended linearly over rpoly.

    walls is an iterable of (xi, weight) pairs as produced by the wall
    enumerators; rpoly is a polynomial in P with Laurent coefficients in
    Lambda, given as a BiPoly, a {(lambda_exp, p_exp): coeff} dict, or a
    scalar.  An optional trace callable or file receives one JSON record
    per wall with the class, the truncation order, and its contribution.
    """
    L = X.cls(L)
    rp = _as_rpoly(rpoly)
    monomials = sorted(rp.items(), key=lambda kv: (kv[0][1], kv[0][0]))
    total = LambdaRational({})
    for entry in walls:
        xi, weight = entry if isinstance(entry, tuple) else (entry, Rat(1))
        contrib = LambdaRational({})
        bound = None
        for (i, j), c in monomials:
            term = delta(X, xi, L, j)
            contrib = contrib + term.value * LambdaRational({i: c * weight})
            bound = term.order_bound if bound is None else max(bound, term.order_bound)
        total = total + contrib
        if trace is not None:
            poly = {str(e - contrib.lpow): str(c) for e, c in sorted(contrib.numer_items())}
            _emit_trace(trace, {"xi": str(X.cls(xi)), "A": bound, "poly": poly})
    return total
