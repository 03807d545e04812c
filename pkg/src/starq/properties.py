"""Structural checks on a star-product, plus seeded random inputs for them.

Each ``check_*`` returns ``None`` when the identity holds and otherwise a
witness dict describing the failing inputs.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable, Iterable

from .geometry import GeneratorFamily, VectorField, lift_lie, moment
from .hochschild import Star, star_commutator
from .symbols import SymbolPoly, euler, poisson

Witness = dict | None


def random_symbol(
    rng: random.Random,
    n: int,
    max_deg: int = 3,
    terms: int = 3,
    nu: bool = False,
    max_x: int | None = None,
) -> SymbolPoly:
    """A few random monomials with small rational coefficients.

    ``max_deg`` bounds the xi-degree and (unless ``max_x`` is given) the x-degree.
    """
    max_x = max_deg if max_x is None else max_x
    out = {}
    for _ in range(terms):
        a = _random_exponents(rng, n, rng.randint(0, max_x))
        b = _random_exponents(rng, n, rng.randint(0, max_deg))
        p = rng.randint(0, 1) if nu else 0
        c = Fraction(rng.choice([-3, -2, -1, 1, 2, 3, 5]), rng.choice([1, 1, 2, 3]))
        out[(a, b, p)] = out.get((a, b, p), 0) + c
    return SymbolPoly(n, out)


def _random_exponents(rng: random.Random, n: int, total: int) -> tuple[int, ...]:
    v = [0] * n
    for _ in range(total):
        v[rng.randrange(n)] += 1
    return tuple(v)


def random_generator(rng: random.Random, family: GeneratorFamily) -> tuple[str, VectorField]:
    """Random integer combination of two or three members of ``family``."""
    picks = rng.sample(range(len(family)), k=min(len(family), rng.randint(2, 3)))
    X = None
    parts = []
    for i in picks:
        c = rng.choice([-2, -1, 1, 2, 3])
        Y = family.members[i].scale(c)
        X = Y if X is None else X + Y
        parts.append(f"{c}*({family.labels[i]})")
    return " + ".join(parts), X


def _w(**kw) -> dict:
    return {k: str(v) for k, v in kw.items()}


def check_invariance(star: Star, X: VectorField, F: SymbolPoly, G: SymbolPoly) -> Witness:
    """L_X(F*G) = L_X F * G + F * L_X G."""
    lhs = lift_lie(X, star(F, G))
    rhs = star(lift_lie(X, F), G) + star(F, lift_lie(X, G))
    return None if lhs == rhs else _w(F=F, G=G, lhs=lhs, rhs=rhs)


def check_strong_invariance(star: Star, X: VectorField, F: SymbolPoly) -> Witness:
    """J_X * F - F * J_X = nu {J_X, F}."""
    J = moment(X)
    lhs = star(J, F) - star(F, J)
    rhs = poisson(J, F).times_nu()
    return None if lhs == rhs else _w(F=F, lhs=lhs, rhs=rhs)


def check_covariance(star: Star, X: VectorField, Y: VectorField) -> Witness:
    """(J_X * J_Y - J_Y * J_X) / nu = {J_X, J_Y}."""
    JX, JY = moment(X), moment(Y)
    lhs = star_commutator(JX, JY, star)
    rhs = poisson(JX, JY)
    return None if lhs == rhs else _w(J_X=JX, J_Y=JY, lhs=lhs, rhs=rhs)


def check_symmetry(star: Star, F: SymbolPoly, G: SymbolPoly) -> Witness:
    """conj(F*G) = conj(G) * conj(F), conj being nu -> -nu."""
    lhs = star(F, G).conj()
    rhs = star(G.conj(), F.conj())
    return None if lhs == rhs else _w(F=F, G=G, lhs=lhs, rhs=rhs)


def check_homogeneity(star: Star, F: SymbolPoly, G: SymbolPoly, order: int | None = None) -> Witness:
    """E_hat = E + nu d/dnu is a derivation of the star (compared up to ``order``)."""

    def t(P):
        return P if order is None else P.truncate_nu(order)

    lhs = t(euler(star(F, G), "E_hat"))
    rhs = t(star(euler(F, "E_hat"), G) + star(F, euler(G, "E_hat")))
    return None if lhs == rhs else _w(F=F, G=G, lhs=lhs, rhs=rhs)


def check_associativity(star: Star, F: SymbolPoly, G: SymbolPoly, H: SymbolPoly) -> Witness:
    lhs = star(star(F, G), H)
    rhs = star(F, star(G, H))
    return None if lhs == rhs else _w(F=F, G=G, H=H, lhs=lhs, rhs=rhs)


def first_failure(results: Iterable[Witness]) -> Witness:
    for w in results:
        if w is not None:
            return w
    return None


__all__ = [
    "check_associativity",
    "check_covariance",
    "check_homogeneity",
    "check_invariance",
    "check_strong_invariance",
    "check_symmetry",
    "first_failure",
    "random_generator",
    "random_symbol",
]
