"""Rational arithmetic for the inner loops.

gmpy2's mpq is an order of magnitude faster than Fraction; results are
converted back to Fraction before they reach the public API.
"""
from fractions import Fraction

try:
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover
    Q = Fraction


def addto(out: dict, key, value) -> None:
    s = out.get(key, 0) + value
    if s:
        out[key] = s
    else:
        out.pop(key, None)


def to_fraction_dict(d: dict) -> dict:
    return {k: Fraction(int(v.numerator), int(v.denominator)) for k, v in d.items() if v}
