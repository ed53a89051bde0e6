"""Packed big-integer convolution kernel.

Products of integer coefficient vectors go through balanced Kronecker
substitution: coefficients are biased into nonnegative fields, packed into a
single gmpy2 integer, multiplied once inside GMP, and unpacked with the bias
removed.  Both the q-Laurent layer and the bivariate grid engine call into
this module for every multiplication.
"""

from __future__ import annotations

import gmpy2
from gmpy2 import mpz

Z0 = mpz(0)
Z1 = mpz(1)


def vec_bits(v) -> int:
    """Largest coefficient bit length in a vector (0 if all zero)."""
    b = 0
    for x in v:
        n = x.bit_length()
        if n > b:
            b = n
    return b


def _bias_block(count: int, width: int, bias) -> "mpz":
    # bias * (1 + 2^width + ... + 2^{width*(count-1)})
    return bias * (((Z1 << (width * count)) - 1) // ((Z1 << width) - 1))


def _pack(vec, width: int, bias):
    return gmpy2.pack([x + bias for x in vec], width) - _bias_block(len(vec), width, bias)


def _unpack(x, width: int, count: int, bias):
    digits = gmpy2.unpack(x + _bias_block(count, width, bias), width)
    assert len(digits) == count, "packed product wider than its bound"
    return [d - bias for d in digits]


def conv(a, b):
    """Linear convolution of two signed integer vectors."""
    la, lb = len(a), len(b)
    if la == 0 or lb == 0:
        return []
    ba, bb = vec_bits(a), vec_bits(b)
    lc = la + lb - 1
    if ba == 0 or bb == 0:
        return [Z0] * lc
    width = ba + bb + min(la, lb).bit_length() + 2
    bias = Z1 << (width - 1)
    prod = _pack(a, width, bias) * _pack(b, width, bias)
    return _unpack(prod, width, lc, bias)


def conv2d(rows_a, rows_b, wcap: int | None = None):
    """Convolution of two row-major 2D coefficient arrays.

    Rows are ragged w-vectors; the result has len(a)+len(b)-1 rows, each
    trimmed to wcap+1 entries when wcap is given.  A single padded Kronecker
    pack keeps row products from bleeding into their neighbours.
    """
    la, lb = len(rows_a), len(rows_b)
    if la == 0 or lb == 0:
        return []
    wa = max((len(r) for r in rows_a), default=0)
    wb = max((len(r) for r in rows_b), default=0)
    lc = la + lb - 1
    if wa == 0 or wb == 0:
        return [[] for _ in range(lc)]
    ba = max(vec_bits(r) for r in rows_a)
    bb = max(vec_bits(r) for r in rows_b)
    if ba == 0 or bb == 0:
        return [[] for _ in range(lc)]
    stride = wa + wb - 1
    width = ba + bb + (min(la, lb) * min(wa, wb)).bit_length() + 2
    bias = Z1 << (width - 1)

    def flatten(rows, wlen):
        flat = []
        for r in rows:
            flat.extend(r)
            flat.extend(Z0 for _ in range(stride - len(r)))
        return flat

    fa = flatten(rows_a, wa)
    fb = flatten(rows_b, wb)
    prod = _pack(fa, width, bias) * _pack(fb, width, bias)
    flat = _unpack(prod, width, lc * stride, bias)
    keep = stride if wcap is None else min(stride, wcap + 1)
    return [flat[s * stride : s * stride + keep] for s in range(lc)]


def content_gcd(den, rows) -> "mpz":
    """gcd of a denominator and every entry of a list of vectors."""
    g = mpz(den)
    for r in rows:
        for x in r:
            if x:
                g = gmpy2.gcd(g, x)
                if g == 1:
                    return Z1
    return g


def divexact_rows(rows, g):
    if g == 1:
        return rows
    return [[gmpy2.divexact(x, g) if x else Z0 for x in r] for r in rows]
