"""Hochschild coboundaries, star-commutators and changes of star-product.

A star here is any callable ``(F, G) -> SymbolPoly``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .symbols import ScalarLike, SymbolPoly, scalar

Star = Callable[[SymbolPoly, SymbolPoly], SymbolPoly]


@dataclass(frozen=True)
class Cochain:
    """A linear (arity 1), bilinear (2) or trilinear (3) map on symbols."""

    arity: int
    fn: Callable[..., SymbolPoly]
    name: str = "C"

    def __call__(self, *args: SymbolPoly) -> SymbolPoly:
        if len(args) != self.arity:
            raise TypeError(f"{self.name} takes {self.arity} arguments, got {len(args)}")
        return self.fn(*args)

    @classmethod
    def from_op(cls, op) -> "Cochain":
        """Wrap an :class:`~starq.operators.Op` as a 1-cochain."""
        return cls(1, op.fn, op.name)


def hochschild_delta(C: Cochain) -> Cochain:
    """Coboundary of a 1- or 2-cochain for the commutative product of symbols."""
    if C.arity == 1:
        def d1(F, G):
            return F * C(G) - C(F * G) + C(F) * G

        return Cochain(2, d1, f"δ{C.name}")
    if C.arity == 2:
        def d2(F, G, H):
            return F * C(G, H) - C(F * G, H) + C(F, G * H) - C(F, G) * H

        return Cochain(3, d2, f"δ{C.name}")
    raise ValueError(f"coboundary of arity-{C.arity} cochains is not supported")


def is_linear(C: Cochain, samples: Sequence[SymbolPoly], scalars=(2, -3)) -> bool:
    """Spot-check linearity in every slot."""
    if len(samples) < C.arity + 1:
        raise ValueError("need at least arity + 1 samples")
    base = list(samples[: C.arity])
    extra = samples[C.arity]
    for slot in range(C.arity):
        for c in scalars:
            args = list(base)
            args[slot] = base[slot].scale(c) + extra
            other = list(base)
            other[slot] = extra
            if C(*args) != C(*base).scale(c) + C(*other):
                return False
    return True


def star_commutator(F: SymbolPoly, G: SymbolPoly, star: Star | None = None) -> SymbolPoly:
    """(F*G - G*F) / nu; the division is exact for a symmetric star."""
    if star is None:
        from .quantization import star_quant as star
    diff = star(F, G) - star(G, F)
    try:
        return diff.div_nu()
    except ValueError as exc:
        raise ValueError("star commutator is not divisible by nu; the star is not symmetric") from exc


def _nu_powers(F: SymbolPoly) -> list[int]:
    return sorted({k[2] for k, _ in F.items()})


def transform_star(
    star: Star,
    phi: Sequence[tuple[int, Cochain]] = (),
    mu: Sequence[ScalarLike] = (1,),
    order: int | None = None,
) -> Star:
    """The star  F, G -> Phi^{-1}(Phi(F) * Phi(G))  with nu reparametrized.

    ``phi`` lists ``(j, A_j)`` so that Phi = Id + sum_j nu^j A_j (j >= 1); each
    A_j acts on nu-free symbols and is extended nu-linearly.  ``mu`` holds the
    coefficients of nu, nu^2, ... in the new parameter (``mu[0]`` must be 1).
    Phi^{-1} never terminates for a nontrivial Phi, so ``order`` (the highest
    nu-power kept) is required in that case; results are exact to that order.
    """
    phi = list(phi)
    mu = [scalar(c) for c in mu]
    if not mu or mu[0] != 1:
        raise ValueError("the reparametrization must start with nu")
    if any(j < 1 for j, _ in phi):
        raise ValueError("Phi - Id must start at order nu^1 or higher")
    if phi and order is None:
        raise ValueError("a nontrivial Phi needs an explicit truncation order")

    def trunc(F: SymbolPoly) -> SymbolPoly:
        return F if order is None else F.truncate_nu(order)

    def N(F: SymbolPoly) -> SymbolPoly:
        out = SymbolPoly.zero(F.n)
        for p in _nu_powers(F):
            f = F.nu_part(p)
            for j, A in phi:
                out = out + A(f).times_nu(p + j)
        return trunc(out)

    def Phi(F):
        return trunc(F + N(F))

    def Phi_inv(F):
        out, term = F, F
        while term:
            term = -N(term)
            out = out + term
        return trunc(out)

    def mu_power(r: int, n: int) -> SymbolPoly:
        m = SymbolPoly.zero(n)
        for i, c in enumerate(mu):
            m = m + SymbolPoly.const(n, c).times_nu(i + 1)
        out = SymbolPoly.one(n)
        for _ in range(r):
            out = trunc(out * m)
        return out

    def reparam_star(F, G):
        if len(mu) == 1:
            return star(F, G)
        out = SymbolPoly.zero(F.n)
        for p in _nu_powers(F):
            for q in _nu_powers(G):
                prod = star(F.nu_part(p), G.nu_part(q))
                for r in _nu_powers(prod):
                    out = out + prod.nu_part(r) * mu_power(r, F.n).times_nu(p + q)
        return trunc(out)

    def new_star(F, G):
        if not phi:
            return reparam_star(F, G)
        return Phi_inv(reparam_star(Phi(F), Phi(G)))

    return new_star


__all__ = ["Cochain", "Star", "hochschild_delta", "is_linear", "star_commutator", "transform_star"]
