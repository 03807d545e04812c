"""Rising factorials and binomial coefficients with rational top argument."""
from __future__ import annotations

from fractions import Fraction
from math import factorial

from .symbols import ScalarLike, scalar


def pochhammer(a: ScalarLike, r: int) -> Fraction:
    """(a)_r = a (a+1) ... (a+r-1); (a)_0 = 1."""
    if r < 0:
        raise ValueError("r must be nonnegative")
    a = scalar(a)
    out = Fraction(1)
    for i in range(r):
        out *= a + i
    return out


def binomial(a: ScalarLike, k: int) -> Fraction:
    """a (a-1) ... (a-k+1) / k! for rational ``a``."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    a = scalar(a)
    out = Fraction(1)
    for i in range(k):
        out *= a - i
    return out / factorial(k)


def multinomial(*parts: int) -> int:
    out = factorial(sum(parts))
    for p in parts:
        out //= factorial(p)
    return out
