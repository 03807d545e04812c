"""Normal-ordered symbol calculus and the projectively equivariant quantization.

A differential operator on lambda-densities is identified with its total
symbol: ``nu^p f(x) xi^b`` stands for ``nu^p f(x) (nu d/dx)^b``.  Composition
of total symbols is

    (A o B) = sum_m nu^|m| / m! * d_xi^m A * d_x^m B.

Every map here is linear (or bilinear), so results on monomials are cached
and general inputs are assembled term by term.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterable, Sequence

from ._fast import Q, addto, to_fraction_dict
from .combinatorics import pochhammer
from .geometry import GeneratorFamily, VectorField, density_lie, lift_lie, moment
from .symbols import DimensionError, Key, ScalarLike, SymbolPoly, scalar

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class DiffOpSymbol:
    """Total symbol of a differential operator acting on lambda-densities."""

    base: SymbolPoly
    lam: Fraction

    @property
    def n(self) -> int:
        return self.base.n

    def __matmul__(self, other: "DiffOpSymbol") -> "DiffOpSymbol":
        return compose(self, other)

    def __add__(self, other: "DiffOpSymbol") -> "DiffOpSymbol":
        _check_compatible(self, other)
        return DiffOpSymbol(self.base + other.base, self.lam)

    def __sub__(self, other: "DiffOpSymbol") -> "DiffOpSymbol":
        _check_compatible(self, other)
        return DiffOpSymbol(self.base - other.base, self.lam)

    def operator_form(self) -> str:
        """Render with explicit derivatives, e.g. ``h^2*x1*dx1^2 + h^2*dx1``."""
        from .parsing import term_order_key

        if not self.base:
            return "0"
        pieces = []
        for key in sorted((k for k, _ in self.base.items()), key=term_order_key, reverse=True):
            a, b, p = key
            c = self.base.coefficient(a, b, p)
            factors = []
            hp = p + sum(b)
            if hp:
                factors.append("h" if hp == 1 else f"h^{hp}")
            for i, e in enumerate(a):
                if e:
                    factors.append(f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}")
            for i, e in enumerate(b):
                if e:
                    factors.append(f"dx{i + 1}" if e == 1 else f"dx{i + 1}^{e}")
            mag = abs(c)
            body = "*".join(factors) if factors and mag == 1 else "*".join([str(mag)] + factors)
            sign = "-" if c < 0 else "+"
            pieces.append(("-" if c < 0 else "") + body if not pieces else f"{sign} {body}")
        return " ".join(pieces)


def _check_compatible(A: DiffOpSymbol, B: DiffOpSymbol) -> None:
    if A.n != B.n:
        raise DimensionError(f"dimension mismatch: {A.n} != {B.n}")
    if A.lam != B.lam:
        raise ValueError(f"density weights differ: {A.lam} != {B.lam}")


# -- composition ---------------------------------------------------------------
# Kernels work on plain {key: mpq} dicts and are cached per monomial.


def _falling(e: int, m: int) -> int:
    out = 1
    for j in range(m):
        out *= e - j
    return out


@lru_cache(maxsize=None)
def _compose_monomials(k1: Key, k2: Key) -> tuple:
    (a1, b1, p1), (a2, b2, p2) = k1, k2
    n = len(a1)
    per_axis = []
    for i in range(n):
        # b!/(b-m)! * a!/(a-m)! / m! is an integer
        per_axis.append([
            (m, _falling(b1[i], m) * _falling(a2[i], m) // factorial(m))
            for m in range(min(b1[i], a2[i]) + 1)
        ])
    out = []
    for combo in itertools.product(*per_axis):
        ms = tuple(m for m, _ in combo)
        coeff = 1
        for _, c in combo:
            coeff *= c
        a = tuple(x + y - m for x, y, m in zip(a1, a2, ms))
        b = tuple(x + y - m for x, y, m in zip(b1, b2, ms))
        out.append(((a, b, p1 + p2 + sum(ms)), coeff))
    return tuple(out)


def _compose_dicts(A: dict, B: dict) -> dict:
    out: dict = {}
    for k1, v1 in A.items():
        for k2, v2 in B.items():
            v = v1 * v2
            for key, c in _compose_monomials(k1, k2):
                addto(out, key, v * c)
    return out


def _as_q(F: SymbolPoly) -> dict:
    return {k: Q(v.numerator, v.denominator) for k, v in F.items()}


def _poly(n: int, d: dict) -> SymbolPoly:
    return SymbolPoly._raw(n, to_fraction_dict(d))


def compose_symbols(A: SymbolPoly, B: SymbolPoly) -> SymbolPoly:
    """Normal-ordered composition of two total symbols."""
    if A.n != B.n:
        raise DimensionError(f"dimension mismatch: {A.n} != {B.n}")
    return _poly(A.n, _compose_dicts(_as_q(A), _as_q(B)))


def compose(A: DiffOpSymbol, B: DiffOpSymbol) -> DiffOpSymbol:
    _check_compatible(A, B)
    return DiffOpSymbol(compose_symbols(A.base, B.base), A.lam)


# -- the quantization map -------------------------------------------------------


def q_coefficient(r: int, e: int, lam: ScalarLike, n: int) -> Fraction:
    """C_r at E-eigenvalue e: (e + (n+1) lam)_r / (r! (2e + n + r)_r)."""
    lam = scalar(lam)
    return pochhammer(e + (n + 1) * lam, r) / (factorial(r) * pochhammer(2 * e + n + r, r))


@lru_cache(maxsize=None)
def _q_coeff(r: int, e: int, lam: Fraction, n: int):
    c = q_coefficient(r, e, lam, n)
    return Q(c.numerator, c.denominator)


def _D_dict(F: dict) -> dict:
    out: dict = {}
    for (a, b, p), v in F.items():
        for i in range(len(a)):
            if a[i] and b[i]:
                a2 = a[:i] + (a[i] - 1,) + a[i + 1:]
                b2 = b[:i] + (b[i] - 1,) + b[i + 1:]
                addto(out, (a2, b2, p), v * a[i] * b[i])
    return out


@lru_cache(maxsize=None)
def _quantize_monomial(key: Key, lam: Fraction) -> dict:
    n = len(key[0])
    out = {key: Q(1)}
    cur = {key: Q(1)}
    r = 0
    while True:
        r += 1
        cur = _D_dict(cur)
        if not cur:
            break
        for (a, b, p), v in cur.items():
            addto(out, (a, b, p + r), _q_coeff(r, sum(b), lam, n) * v)
    return out


def _linear_extend(F: dict, on_monomial) -> dict:
    out: dict = {}
    for key, v in F.items():
        for k, c in on_monomial(key).items():
            addto(out, k, v * c)
    return out


def quantize(F: SymbolPoly, lam: ScalarLike, n: int | None = None) -> DiffOpSymbol:
    """Total symbol of Q_lambda(F) = sum_r C_r(E) (nu D)^r F."""
    lam = scalar(lam)
    if n is not None and n != F.n:
        raise DimensionError(f"symbol has n={F.n}, expected {n}")
    d = _linear_extend(_as_q(F), lambda k: _quantize_monomial(k, lam))
    return DiffOpSymbol(_poly(F.n, d), lam)


@lru_cache(maxsize=None)
def _dequantize_monomial(key: Key, lam: Fraction) -> dict:
    # Q = Id + (terms of strictly lower xi-degree), so invert by recursion
    tail = dict(_quantize_monomial(key, lam))
    del tail[key]
    out = {key: Q(1)}
    for k, c in _linear_extend(tail, lambda k: _dequantize_monomial(k, lam)).items():
        addto(out, k, -c)
    return out


def dequantize(A: DiffOpSymbol | SymbolPoly, lam: ScalarLike | None = None, n: int | None = None) -> SymbolPoly:
    """Inverse of :func:`quantize`."""
    if isinstance(A, DiffOpSymbol):
        base, lam = A.base, A.lam if lam is None else scalar(lam)
    else:
        if lam is None:
            raise ValueError("lam is required when dequantizing a bare symbol")
        base, lam = A, scalar(lam)
    if n is not None and n != base.n:
        raise DimensionError(f"symbol has n={base.n}, expected {n}")
    return _poly(base.n, _linear_extend(_as_q(base), lambda k: _dequantize_monomial(k, lam)))


@lru_cache(maxsize=None)
def _star_quant_monomials(k1: Key, k2: Key, lam: Fraction) -> dict:
    product = _compose_dicts(_quantize_monomial(k1, lam), _quantize_monomial(k2, lam))
    return _linear_extend(product, lambda k: _dequantize_monomial(k, lam))


def star_quant(F: SymbolPoly, G: SymbolPoly, lam: ScalarLike = HALF, n: int | None = None) -> SymbolPoly:
    """F *_lam G = Q^{-1}(Q(F) o Q(G)); the canonical star-product at lam = 1/2."""
    if F.n != G.n:
        raise DimensionError(f"dimension mismatch: {F.n} != {G.n}")
    if n is not None and n != F.n:
        raise DimensionError(f"symbols have n={F.n}, expected {n}")
    lam = scalar(lam)
    out: dict = {}
    for k1, v1 in _as_q(F).items():
        for k2, v2 in _as_q(G).items():
            v = v1 * v2
            for k, c in _star_quant_monomials(k1, k2, lam).items():
                addto(out, k, v * c)
    return _poly(F.n, out)


def adjoint(A: DiffOpSymbol) -> DiffOpSymbol:
    """Formal (hermitian) adjoint on compactly supported half-densities.

    ``nu^p f (nu d)^b`` goes to ``(-nu)^p (nu d)^b o f``: integration by parts
    gives ``(-1)^|b|`` and conjugating ``nu^|b|`` gives another ``(-1)^|b|``.
    """
    if A.lam != HALF:
        raise ValueError("the adjoint is defined here for half-densities only")
    n = A.n
    out = SymbolPoly.zero(n)
    for (a, b, p), v in A.base.items():
        left = SymbolPoly._raw(n, {((0,) * n, b, 0): Fraction(1)})
        right = SymbolPoly._raw(n, {(a, (0,) * n, p): -v if p % 2 else v})
        out = out + compose_symbols(left, right)
    return DiffOpSymbol(out, A.lam)


# -- equivariance ------------------------------------------------------------------


def density_operator(X: VectorField, lam: ScalarLike) -> DiffOpSymbol:
    """Total symbol of nu * L_X^lam (the Lie derivative of lambda-densities)."""
    lam = scalar(lam)
    return DiffOpSymbol(moment(X) + X.divergence().scale(lam).times_nu(), lam)


@dataclass
class EquivarianceReport:
    checked: int
    failures: list

    @property
    def passed(self) -> bool:
        return not self.failures

    def __bool__(self) -> bool:
        return self.passed


def check_equivariance(
    lam: ScalarLike, family: GeneratorFamily, samples: Iterable[SymbolPoly]
) -> EquivarianceReport:
    """[L_X^lam, Q(F)] = Q(L_X F) for every generator and sample, exactly."""
    lam = scalar(lam)
    samples = list(samples)
    failures, checked = [], 0
    for label, X in family.labelled():
        L = density_operator(X, lam)
        for F in samples:
            QF = quantize(F, lam)
            lhs = (L @ QF - QF @ L).base
            rhs = quantize(lift_lie(X, F), lam).base.times_nu()
            checked += 1
            if lhs != rhs:
                failures.append((label, F))
    return EquivarianceReport(checked, failures)


def check_moment_condition(lam: ScalarLike, family: GeneratorFamily) -> EquivarianceReport:
    """Q_lam(J_X) = nu * L_X^lam for every generator."""
    lam = scalar(lam)
    failures = []
    for label, X in family.labelled():
        if quantize(moment(X), lam).base != density_operator(X, lam).base:
            failures.append((label, moment(X)))
    return EquivarianceReport(len(family), failures)


def apply_operator(A: DiffOpSymbol, f: SymbolPoly) -> SymbolPoly:
    """Act with the operator on a function of x (nu-dependence allowed)."""
    if f.xi_degree() > 0:
        raise ValueError("operators act on xi-independent functions only")
    n = A.n
    out = SymbolPoly.zero(n)
    for (a, b, p), v in A.base.items():
        g = f
        for i, e in enumerate(b):
            g = g.diff_x(i, e)
        coeff = SymbolPoly._raw(n, {(a, (0,) * n, p + sum(b)): v})
        out = out + coeff * g
    return out


__all__ = [
    "DiffOpSymbol",
    "adjoint",
    "apply_operator",
    "check_equivariance",
    "check_moment_condition",
    "compose",
    "compose_symbols",
    "density_lie",
    "density_operator",
    "dequantize",
    "q_coefficient",
    "quantize",
    "star_quant",
]
