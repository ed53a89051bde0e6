"""Exact generating functions of rank-2 K-theoretic Donaldson invariants.

The package computes, by exact rational arithmetic, the generating functions
chi^{X,w}_{c1}(L, P^r) on the plane, its blowups and the quadric, as closed
rational functions N(L)/(L^a (1-L^4)^b) in the variable Lambda.  The route is
theta-function series, wallcrossing terms, blowup polynomials and two exact
blowdown pipelines; see README.md for the module map.
"""

__version__ = "0.1.0"

from .scalars import GaussRat, Rat, as_real
from .series import LambdaRational, LSeries, QLaurent

__all__ = [
    "Rat",
    "GaussRat",
    "as_real",
    "QLaurent",
    "LSeries",
    "LambdaRational",
    "__version__",
]
