"""The invariant star-product written out with explicit coefficients.

On the doubled space with coordinates (x, xi) for the first factor and
(y, eta) for the second, the four contractions

    Dxy_xi = d_xi . d_y     Detax = d_x . d_eta
    Dxix   = d_xi . d_x     Detay = d_eta . d_y

are combined as

    F * G = sum_r nu^r sum_{a+b+c+d=r} B^{k,l}_{abcd} Dxy_xi^a Detax^b Dxix^c Detay^d (F (x) G)

and restricted to eta = xi, y = x.  The coefficients B come from a closed
form in three stages (c = d = 0, then d = 0, then general d).  The residual
helpers and the recursion solver are independent checks on that closed form.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Callable, Iterator

from ._fast import Q, addto, to_fraction_dict
from .combinatorics import binomial, multinomial, pochhammer
from .symbols import DimensionError, SymbolPoly

TAGS = ("Dxy_xi", "Detax", "Dxix", "Detay")

# (which factor loses a xi, which factor loses an x) for each contraction
_TAG_SLOTS = {
    "Dxy_xi": ("F", "G"),
    "Detax": ("G", "F"),
    "Dxix": ("F", "F"),
    "Detay": ("G", "G"),
}


# -- symbols on the doubled space ---------------------------------------------------


@dataclass(frozen=True)
class PairSymbol:
    """Sum of terms c nu^p x^a xi^b y^a2 eta^b2, i.e. an element of S (x) S."""

    n: int
    terms: tuple  # sorted ((a, b, a2, b2, p), coeff)

    @classmethod
    def from_dict(cls, n: int, d: dict) -> "PairSymbol":
        return cls(n, tuple(sorted((k, v) for k, v in d.items() if v)))

    @classmethod
    def tensor(cls, F: SymbolPoly, G: SymbolPoly) -> "PairSymbol":
        if F.n != G.n:
            raise DimensionError(f"dimension mismatch: {F.n} != {G.n}")
        out = {}
        for (a1, b1, p1), v1 in F.items():
            for (a2, b2, p2), v2 in G.items():
                key = (a1, b1, a2, b2, p1 + p2)
                out[key] = out.get(key, 0) + v1 * v2
        return cls.from_dict(F.n, out)

    def as_dict(self) -> dict:
        return dict(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def restrict(self) -> SymbolPoly:
        """Set eta = xi and y = x."""
        out = {}
        for (a1, b1, a2, b2, p), v in self.terms:
            key = (_vadd(a1, a2), _vadd(b1, b2), p)
            out[key] = out.get(key, 0) + v
        return SymbolPoly(self.n, out)


def _vadd(u, v):
    return tuple(x + y for x, y in zip(u, v))


def _falling(e: int, m: int) -> int:
    out = 1
    for j in range(m):
        out *= e - j
    return out


def bidiff(tag: str, P: PairSymbol) -> PairSymbol:
    """Apply one contraction (summed over i) to a doubled-space symbol."""
    if tag not in _TAG_SLOTS:
        raise ValueError(f"unknown contraction {tag!r}; expected one of {TAGS}")
    xi_slot, x_slot = _TAG_SLOTS[tag]
    out = {}
    for (a1, b1, a2, b2, p), v in P.terms:
        for i in range(P.n):
            ex = {"F": [list(a1), list(b1)], "G": [list(a2), list(b2)]}
            c = v
            c *= ex[xi_slot][1][i]
            ex[xi_slot][1][i] -= 1
            c *= ex[x_slot][0][i]
            ex[x_slot][0][i] -= 1
            if not c:
                continue
            key = (tuple(ex["F"][0]), tuple(ex["F"][1]), tuple(ex["G"][0]), tuple(ex["G"][1]), p)
            out[key] = out.get(key, 0) + c
    return PairSymbol.from_dict(P.n, out)


# -- closed-form coefficients ---------------------------------------------------------


@lru_cache(maxsize=None)
def coeff_stage1(n: int, K: int, alpha: int, beta: int) -> Fraction:
    """B_{ab00}; depends on (k, l) only through K = k + l."""
    h = Fraction(n - 1, 2) + K
    num = binomial(h - beta, alpha) * binomial(h - alpha, beta)
    den = factorial(alpha + beta) * binomial(n + 2 * K - alpha - beta, alpha + beta)
    return (-1) ** beta * num / den


def in_range(k: int, l: int, alpha: int, beta: int, gamma: int, delta: int) -> bool:
    return min(alpha, beta, gamma, delta) >= 0 and alpha + gamma <= k and beta + delta <= l


@lru_cache(maxsize=None)
def coeff_B(n: int, k: int, l: int, alpha: int, beta: int, gamma: int, delta: int) -> Fraction:
    """Closed-form B^{k,l}_{alpha beta gamma delta}; zero outside alpha+gamma <= k, beta+delta <= l."""
    if not in_range(k, l, alpha, beta, gamma, delta):
        return Fraction(0)
    if gamma == 0 and delta == 0:
        return coeff_stage1(n, k + l, alpha, beta)
    if delta == 0:
        s = Fraction(0)
        for r in range(gamma + 1):
            t = gamma - r
            w = (
                binomial(gamma, r)
                * pochhammer(alpha + 1, r)
                * pochhammer(beta + 1, t)
                * pochhammer(alpha - l, r)
                * pochhammer(beta - l, t)
            )
            if w:
                s += w * coeff_B(n, k, l, alpha + r, beta + t, 0, 0)
        return s / (factorial(gamma) * pochhammer(n + 2 * k - gamma, gamma))
    s = Fraction(0)
    for r in range(delta + 1):
        for m in range(delta - r + 1):
            t = delta - r - m
            w = (
                (-1) ** m
                * multinomial(r, m, t)
                * pochhammer(alpha + 1, r + m)
                * pochhammer(beta + 1, m + t)
                * pochhammer(alpha + gamma - k, r)
                * pochhammer(beta + gamma - k, t)
            )
            if w:
                s += w * coeff_B(n, k, l, alpha + r + m, beta + m + t, gamma - m, 0)
    return s / (factorial(delta) * pochhammer(n + 2 * l - delta, delta))


def index_tuples(r: int) -> Iterator[tuple[int, int, int, int]]:
    """All (alpha, beta, gamma, delta) >= 0 with sum r, lexicographic."""
    for a in range(r + 1):
        for b in range(r - a + 1):
            for c in range(r - a - b + 1):
                yield (a, b, c, r - a - b - c)


def coeff_table(n: int, k: int, l: int, r_max: int | None = None) -> dict:
    """{(alpha, beta, gamma, delta): B} for every in-range index with sum <= r_max."""
    top = k + l if r_max is None else min(r_max, k + l)
    return {
        idx: coeff_B(n, k, l, *idx)
        for r in range(top + 1)
        for idx in index_tuples(r)
        if in_range(k, l, *idx)
    }


# -- residuals ------------------------------------------------------------------


Table = Callable[[int, int, int, int], Fraction]


def table_lookup(n: int, k: int, l: int, overrides: dict | None = None) -> Table:
    """Closed-form table as a callable, optionally with some entries replaced."""
    overrides = overrides or {}

    def B(a, b, c, d):
        if (a, b, c, d) in overrides:
            return Fraction(overrides[(a, b, c, d)])
        return coeff_B(n, k, l, a, b, c, d)

    return B


def admissible(which: int, k: int, l: int, idx) -> bool:
    """Index tuples where the inversion equation is a genuine constraint."""
    a, b, c, d = idx
    if min(idx) < 0:
        return False
    if which == 1:
        return a + c + 1 <= k and b + d <= l
    if which == 2:
        return a + c <= k and b + d + 1 <= l
    raise ValueError("which must be 1 or 2")


def residual_inversion(which: int, n: int, k: int, l: int, idx, table: Table | None = None) -> Fraction:
    """Left minus right side of the inversion-invariance equation ``which``."""
    B = table or table_lookup(n, k, l)
    a, b, c, d = idx
    if which == 1:
        lhs = (a + 1) * (a + d - l) * B(a + 1, b, c, d) + (b + 1) * (b + d - l) * B(a, b + 1, c, d)
        rhs = (c + 1) * (n + 2 * k - c - 1) * B(a, b, c + 1, d)
        if d:
            rhs += (a + 1) * (b + 1) * B(a + 1, b + 1, c, d - 1)
        return Fraction(lhs - rhs)
    if which == 2:
        lhs = (b + 1) * (b + c - k) * B(a, b + 1, c, d) + (a + 1) * (a + c - k) * B(a + 1, b, c, d)
        rhs = (d + 1) * (n + 2 * l - d - 1) * B(a, b, c, d + 1)
        if c:
            rhs += (a + 1) * (b + 1) * B(a + 1, b + 1, c - 1, d)
        return Fraction(lhs - rhs)
    raise ValueError("which must be 1 or 2")


# Associativity lives on the tripled space.  Slots 0, 1, 2 are (x, xi), (y, eta),
# (z, zeta); generator (u, v) is d_{fiber u} . d_{base v}.
GENERATORS = tuple((u, v) for u in range(3) for v in range(3))
_GEN_INDEX = {g: i for i, g in enumerate(GENERATORS)}
_GEN_NAMES = {0: ("xi", "x"), 1: ("eta", "y"), 2: ("zeta", "z")}


def generator_name(g) -> str:
    u, v = g
    return f"D[{_GEN_NAMES[u][0]},{_GEN_NAMES[v][1]}]"


def _pmul(P: dict, Q: dict) -> dict:
    out = {}
    for e1, c1 in P.items():
        for e2, c2 in Q.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def _linear(*gens) -> dict:
    out = {}
    for g in gens:
        e = [0] * 9
        e[_GEN_INDEX[g]] = 1
        out[tuple(e)] = Fraction(1)
    return out


def _ppow(P: dict, m: int) -> dict:
    out = {(0,) * 9: Fraction(1)}
    for _ in range(m):
        out = _pmul(out, P)
    return out


def _star_operator(n: int, k: int, l: int, r: int, first, second, table=None) -> dict:
    """Order-r part of the star as a polynomial in contraction generators.

    ``first`` and ``second`` list the slots merged into each factor: a factor
    made of several slots differentiates by the sum of their partials.
    """
    B = table or (lambda *i: coeff_B(n, k, l, *i))

    def contraction(fibers, bases):
        return _linear(*[(u, v) for u in fibers for v in bases])

    D_xiy = contraction(first, second)
    D_etax = contraction(second, first)
    D_xix = contraction(first, first)
    D_etay = contraction(second, second)
    out = {}
    for idx in index_tuples(r):
        c = B(*idx)
        if not c:
            continue
        term = _pmul(_pmul(_ppow(D_xiy, idx[0]), _ppow(D_etax, idx[1])),
                     _pmul(_ppow(D_xix, idx[2]), _ppow(D_etay, idx[3])))
        for e, v in term.items():
            out[e] = out.get(e, 0) + c * v
    return out


def residual_assoc(n: int, k: int, l: int, m: int, r: int, table_for=None) -> dict:
    """Order-r associator (F*G)*H - F*(G*H) on S_k (x) S_l (x) S_m.

    The result maps generator-exponent tuples (see ``GENERATORS``) to their
    coefficients; monomials that annihilate S_k (x) S_l (x) S_m are dropped.
    ``table_for(k, l)`` may supply a replacement coefficient table.
    """

    def table(kk, ll):
        return table_for(kk, ll) if table_for else None

    total = {}
    for r1 in range(r + 1):
        r2 = r - r1
        left = _pmul(
            _star_operator(n, k, l, r1, (0,), (1,), table(k, l)),
            _star_operator(n, k + l - r1, m, r2, (0, 1), (2,), table(k + l - r1, m)),
        )
        right = _pmul(
            _star_operator(n, l, m, r1, (1,), (2,), table(l, m)),
            _star_operator(n, k, l + m - r1, r2, (0,), (1, 2), table(k, l + m - r1)),
        )
        for e, v in left.items():
            total[e] = total.get(e, 0) + v
        for e, v in right.items():
            total[e] = total.get(e, 0) - v
    bounds = (k, l, m)
    out = {}
    for e, v in total.items():
        if not v:
            continue
        rows = [sum(e[_GEN_INDEX[(u, w)]] for w in range(3)) for u in range(3)]
        if all(rows[u] <= bounds[u] for u in range(3)):
            out[e] = v
    return out


def format_generator_monomial(e) -> str:
    parts = []
    for g, p in zip(GENERATORS, e):
        if p:
            parts.append(generator_name(g) + (f"^{p}" if p > 1 else ""))
    return "*".join(parts) or "1"


# -- the star itself ---------------------------------------------------------------


@lru_cache(maxsize=None)
def _axis_options(a1, b1, a2, b2):
    # (m_xiy, m_etax, m_xix, m_etay) on one axis, weighted by derivative factors / m!
    opts = []
    for m1 in range(min(b1, a2) + 1):
        for m3 in range(min(b1 - m1, a1) + 1):
            for m2 in range(min(a1 - m3, b2) + 1):
                for m4 in range(min(b2 - m2, a2 - m1) + 1):
                    w = Q(
                        _falling(b1, m1 + m3) * _falling(a1, m2 + m3)
                        * _falling(b2, m2 + m4) * _falling(a2, m1 + m4),
                        factorial(m1) * factorial(m2) * factorial(m3) * factorial(m4),
                    )
                    opts.append(((m1, m2, m3, m4), m1 + m2 + m3 + m4, w))
    return tuple(opts)


@lru_cache(maxsize=None)
def _coeff_q(n, k, l, a, b, c, d):
    v = coeff_B(n, k, l, a, b, c, d)
    return Q(v.numerator, v.denominator) * (factorial(a) * factorial(b) * factorial(c) * factorial(d))


@lru_cache(maxsize=None)
def _star_monomials(k1, k2) -> dict:
    (a1, b1, p1), (a2, b2, p2) = k1, k2
    n = len(a1)
    k, l = sum(b1), sum(b2)
    # convolve the per-axis choices; state is (alpha, beta, gamma, delta, a, b)
    states = {((0, 0, 0, 0), (), ()): Q(1)}
    for i in range(n):
        opts = _axis_options(a1[i], b1[i], a2[i], b2[i])
        sa, sb = a1[i] + a2[i], b1[i] + b2[i]
        nxt: dict = {}
        for (ms, a, b), w in states.items():
            for (m1, m2, m3, m4), tot, wi in opts:
                key = (
                    (ms[0] + m1, ms[1] + m2, ms[2] + m3, ms[3] + m4),
                    a + (sa - tot,),
                    b + (sb - tot,),
                )
                nxt[key] = nxt.get(key, 0) + w * wi
        states = nxt
    out: dict = {}
    for (ms, a, b), w in states.items():
        c = _coeff_q(n, k, l, *ms)
        if c:
            addto(out, (a, b, p1 + p2 + sum(ms)), c * w)
    return out


def star_explicit(F: SymbolPoly, G: SymbolPoly, n: int | None = None) -> SymbolPoly:
    """F * G from the closed-form coefficients, extended bilinearly over graded parts."""
    if F.n != G.n:
        raise DimensionError(f"dimension mismatch: {F.n} != {G.n}")
    if n is not None and n != F.n:
        raise DimensionError(f"symbols have n={F.n}, expected {n}")
    out: dict = {}
    for k1, v1 in F.items():
        q1 = Q(v1.numerator, v1.denominator)
        for k2, v2 in G.items():
            v = q1 * Q(v2.numerator, v2.denominator)
            for key, c in _star_monomials(k1, k2).items():
                addto(out, key, v * c)
    return SymbolPoly._raw(F.n, to_fraction_dict(out))


def star_explicit_via_bidiff(F: SymbolPoly, G: SymbolPoly) -> SymbolPoly:
    """Same product, computed literally with :func:`bidiff` (slow, for cross-checks)."""
    out = SymbolPoly.zero(F.n)
    for Fk in _graded(F):
        for Gl in _graded(G):
            k, l = Fk[0], Gl[0]
            P0 = PairSymbol.tensor(Fk[1], Gl[1])
            for r in range(k + l + 1):
                for idx in index_tuples(r):
                    c = coeff_B(F.n, k, l, *idx)
                    if not c:
                        continue
                    P = P0
                    for tag, times in zip(TAGS, idx):
                        for _ in range(times):
                            P = bidiff(tag, P)
                    out = out + P.restrict().scale(c).times_nu(r)
    return out


def _graded(F: SymbolPoly):
    degrees = sorted({sum(b) for (a, b, p), _ in F.items()})
    return [(k, F.xi_part(k)) for k in degrees]


__all__ = [
    "GENERATORS",
    "PairSymbol",
    "TAGS",
    "admissible",
    "bidiff",
    "coeff_B",
    "coeff_stage1",
    "coeff_table",
    "format_generator_monomial",
    "in_range",
    "index_tuples",
    "residual_assoc",
    "residual_inversion",
    "star_explicit",
    "star_explicit_via_bidiff",
    "table_lookup",
]
