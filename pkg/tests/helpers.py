"""Shared comparison helpers for window-aware series equality."""

from kdongen.scalars import GaussRat


def qagree(a, b, cap=128):
    """Coefficients agree everywhere both windows are known."""
    ta = a.trunc if a.trunc is not None else cap
    tb = b.trunc if b.trunc is not None else cap
    hi = min(ta, tb)
    lo = min(a.lo, b.lo, hi)
    return all(a.coeff(e) == b.coeff(e) for e in range(lo, hi))


def qcontent(a, want: dict):
    """Known content of a equals the given {exponent: value} polynomial."""
    want = {e: GaussRat(v) for e, v in want.items() if GaussRat(v)}
    hi = a.trunc if a.trunc is not None else max(list(want) + [a.lo]) + 1
    for e in range(min([a.lo] + list(want)), hi):
        if a.coeff(e) != want.get(e, GaussRat(0)):
            return False
    return all(e < hi for e in want)
