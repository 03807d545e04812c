"""Named linear operators on symbols and extensional operator identities.

Operators are plain callables ``SymbolPoly -> SymbolPoly`` wrapped in
:class:`Op` so they can be composed (``A @ B``), added and scaled.  Equality of
operators is decided on the monomial basis of a bounded symbol space.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Sequence

from .geometry import GeneratorFamily, VectorField, lift_lie
from .symbols import ScalarLike, SymbolPoly, euler, scalar


class MetricRequired(ValueError):
    """A conformal operator (R, T, G, Delta, ...) was built without a metric."""


@dataclass(frozen=True)
class Op:
    name: str
    fn: Callable[[SymbolPoly], SymbolPoly]

    def __call__(self, F: SymbolPoly) -> SymbolPoly:
        return self.fn(F)

    def __matmul__(self, other: "Op") -> "Op":
        return Op(f"{self.name}∘{other.name}", lambda F: self.fn(other.fn(F)))

    def __add__(self, other: "Op") -> "Op":
        return Op(f"({self.name} + {other.name})", lambda F: self.fn(F) + other.fn(F))

    def __sub__(self, other: "Op") -> "Op":
        return Op(f"({self.name} - {other.name})", lambda F: self.fn(F) - other.fn(F))

    def __neg__(self) -> "Op":
        return Op(f"-{self.name}", lambda F: -self.fn(F))

    def scale(self, c: ScalarLike) -> "Op":
        c = scalar(c)
        return Op(f"{c}*{self.name}", lambda F: self.fn(F).scale(c))

    def __rmul__(self, c: ScalarLike) -> "Op":
        return self.scale(c)

    def shift(self, c: ScalarLike) -> "Op":
        """``self + c*Id``."""
        c = scalar(c)
        return Op(f"({self.name} + {c})", lambda F: self.fn(F) + F.scale(c))


def apply(op: Op, F: SymbolPoly) -> SymbolPoly:
    return op(F)


def commutator(A: Op, B: Op) -> Op:
    return Op(f"[{A.name}, {B.name}]", lambda F: A(B(F)) - B(A(F)))


# -- the operator ring --------------------------------------------------------

IDENTITY = Op("Id", lambda F: F)
E = Op("E", lambda F: euler(F, "E"))
E_HAT = Op("E_hat", lambda F: euler(F, "E_hat"))


def _D(F: SymbolPoly) -> SymbolPoly:
    out = SymbolPoly.zero(F.n)
    for i in range(F.n):
        out = out + F.diff_xi(i).diff_x(i)
    return out


D = Op("D", _D)


def dxi(i: int) -> Op:
    return Op(f"d/dxi{i + 1}", lambda F: F.diff_xi(i))


def dx(i: int) -> Op:
    return Op(f"d/dx{i + 1}", lambda F: F.diff_x(i))


def mult(G: SymbolPoly, name: str | None = None) -> Op:
    return Op(name or f"mult({G})", lambda F: G * F)


def lift(X: VectorField, name: str = "L_X") -> Op:
    return Op(name, lambda F: lift_lie(X, F))


def _need_metric(metric):
    if metric is None:
        raise MetricRequired("conformal operators need a diagonal metric")
    return tuple(metric)


def R(metric: Sequence[int] | None) -> Op:
    """Multiplication by g^{ij} xi_i xi_j."""
    g = _need_metric(metric)

    def fn(F):
        n = F.n
        q = SymbolPoly.zero(n)
        for i in range(n):
            q = q + (SymbolPoly.xi(i, n) * SymbolPoly.xi(i, n)).scale(g[i])
        return q * F

    return Op("R", fn)


def T(metric: Sequence[int] | None) -> Op:
    """Trace g_{ij} d^2/dxi_i dxi_j."""
    g = _need_metric(metric)
    return Op("T", lambda F: _sum(F.n, (F.diff_xi(i, 2).scale(g[i]) for i in range(F.n))))


def G(metric: Sequence[int] | None) -> Op:
    """xi^i d/dx^i."""
    g = _need_metric(metric)
    return Op(
        "G",
        lambda F: _sum(F.n, (SymbolPoly.xi(i, F.n).scale(g[i]) * F.diff_x(i) for i in range(F.n))),
    )


def Delta(metric: Sequence[int] | None) -> Op:
    """g^{ij} d^2/dx^i dx^j."""
    g = _need_metric(metric)
    return Op("Delta", lambda F: _sum(F.n, (F.diff_x(i, 2).scale(g[i]) for i in range(F.n))))


def R0(metric: Sequence[int] | None) -> Op:
    op = R(metric) @ T(metric)
    return Op("R0", op.fn)


def G0(metric: Sequence[int] | None) -> Op:
    op = G(metric) @ T(metric)
    return Op("G0", op.fn)


def Delta0(metric: Sequence[int] | None) -> Op:
    op = Delta(metric) @ T(metric)
    return Op("Delta0", op.fn)


def _sum(n: int, polys) -> SymbolPoly:
    out = SymbolPoly.zero(n)
    for p in polys:
        out = out + p
    return out


def named(tag: str, *, metric=None, index: int | None = None, symbol=None, field=None) -> Op:
    """Look an operator up by its tag (``"E"``, ``"D"``, ``"R0"``, ``"dxi"``...)."""
    simple = {"E": E, "E_hat": E_HAT, "D": D, "Id": IDENTITY}
    if tag in simple:
        return simple[tag]
    conformal_ops = {"R": R, "T": T, "G": G, "Delta": Delta, "R0": R0, "G0": G0, "Delta0": Delta0}
    if tag in conformal_ops:
        return conformal_ops[tag](metric)
    if tag == "dxi":
        return dxi(index)
    if tag == "dx":
        return dx(index)
    if tag == "mult":
        return mult(symbol)
    if tag == "lift":
        return lift(field)
    raise ValueError(f"unknown operator tag {tag!r}")


# -- extensional tables -------------------------------------------------------


@dataclass(frozen=True)
class Bounds:
    """Total x-degree, total xi-degree and nu-power limits of a truncated space."""

    dx_max: int = 3
    dxi_max: int = 4
    p_max: int = 0


def _exponent_vectors(n: int, max_total: int) -> Iterator[tuple[int, ...]]:
    for total in range(max_total + 1):
        for combo in itertools.combinations_with_replacement(range(n), total):
            v = [0] * n
            for c in combo:
                v[c] += 1
            yield tuple(v)


def basis_monomials(n: int, bounds: Bounds) -> list[SymbolPoly]:
    out = []
    for b in _exponent_vectors(n, bounds.dxi_max):
        for a in _exponent_vectors(n, bounds.dx_max):
            for p in range(bounds.p_max + 1):
                out.append(SymbolPoly._raw(n, {(a, b, p): Fraction(1)}))
    return out


@dataclass(frozen=True)
class OpTable:
    bounds: Bounds
    n: int
    images: dict

    def __eq__(self, other) -> bool:
        if not isinstance(other, OpTable):
            return NotImplemented
        return (self.bounds, self.n, self.images) == (other.bounds, other.n, other.images)

    def is_zero(self) -> bool:
        return all(not v for v in self.images.values())

    def first_difference(self, other: "OpTable"):
        for key, img in self.images.items():
            if other.images.get(key) != img:
                return key
        return None


def op_table(A: Op, n: int, bounds: Bounds = Bounds()) -> OpTable:
    images = {}
    for m in basis_monomials(n, bounds):
        (key,) = [k for k, _ in m.items()]
        images[key] = A(m)
    return OpTable(bounds, n, images)


def commutator_table(A: Op, B: Op, n: int, bounds: Bounds = Bounds()) -> OpTable:
    return op_table(commutator(A, B), n, bounds)


def same_operator(A: Op, B: Op, n: int, bounds: Bounds = Bounds()):
    """Return ``None`` if A and B agree on the bounded basis, else a witness monomial."""
    for m in basis_monomials(n, bounds):
        if A(m) != B(m):
            return m
    return None


@dataclass(frozen=True)
class CommutantResult:
    commutes: bool
    witness: SymbolPoly | None = None
    generator: str | None = None

    def __bool__(self) -> bool:
        return self.commutes


def commutant_check(family: GeneratorFamily, candidate: Op, bounds: Bounds = Bounds()) -> CommutantResult:
    """Does ``candidate`` commute with the lift of every generator on the bounded basis?"""
    basis = basis_monomials(family.n, bounds)
    for label, X in family.labelled():
        L = lift(X, label)
        for m in basis:
            if L(candidate(m)) != candidate(L(m)):
                return CommutantResult(False, m, label)
    return CommutantResult(True)
