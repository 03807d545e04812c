"""Vector fields on R^n, their cotangent lifts and multivectors on T*R^n."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .symbols import DimensionError, Scalar, ScalarLike, SymbolPoly, poisson, scalar


@dataclass(frozen=True)
class VectorField:
    """X = X^i d/dx^i with polynomial components in x only."""

    components: tuple[SymbolPoly, ...]

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise ValueError("a vector field needs at least one component")
        n = comps[0].n
        for c in comps:
            if c.n != n:
                raise DimensionError("components live over different dimensions")
            if not c.is_x_only():
                raise ValueError("vector field components must depend on x only")
        if len(comps) != n:
            raise DimensionError(f"expected {n} components, got {len(comps)}")
        object.__setattr__(self, "components", comps)

    @property
    def n(self) -> int:
        return len(self.components)

    def __call__(self, f: SymbolPoly) -> SymbolPoly:
        """Directional derivative X(f) = X^i df/dx^i."""
        out = SymbolPoly.zero(self.n)
        for i, c in enumerate(self.components):
            if c:
                out = out + c * f.diff_x(i)
        return out

    def divergence(self) -> SymbolPoly:
        out = SymbolPoly.zero(self.n)
        for i, c in enumerate(self.components):
            out = out + c.diff_x(i)
        return out

    def bracket(self, other: "VectorField") -> "VectorField":
        """Lie bracket [X, Y]^j = X(Y^j) - Y(X^j)."""
        if other.n != self.n:
            raise DimensionError("dimension mismatch")
        return VectorField(
            tuple(self(yc) - other(xc) for xc, yc in zip(self.components, other.components))
        )

    def __add__(self, other: "VectorField") -> "VectorField":
        return VectorField(tuple(a + b for a, b in zip(self.components, other.components)))

    def scale(self, c: ScalarLike) -> "VectorField":
        return VectorField(tuple(a.scale(c) for a in self.components))


def moment(X: VectorField) -> SymbolPoly:
    """Hamiltonian of the cotangent lift: J_X = xi_i X^i."""
    out = SymbolPoly.zero(X.n)
    for i, c in enumerate(X.components):
        out = out + c * SymbolPoly.xi(i, X.n)
    return out


def lift_lie(X: VectorField, F: SymbolPoly) -> SymbolPoly:
    """Lie derivative of ``F`` along the canonical lift of ``X``."""
    if F.n != X.n:
        raise DimensionError("dimension mismatch")
    return poisson(moment(X), F)


def density_lie(X: VectorField, lam: ScalarLike, f: SymbolPoly) -> SymbolPoly:
    """Lie derivative of a lambda-density written as a function in the chart."""
    if f.n != X.n:
        raise DimensionError("dimension mismatch")
    if any(any(b) for _, b, _ in (k for k, _ in f.items())):
        raise ValueError("density_lie expects a xi-independent function")
    return X(f) + X.divergence().scale(lam) * f


# -- generator families ------------------------------------------------


@dataclass(frozen=True)
class GeneratorFamily:
    """Basis of the projective or conformal Lie algebra in an adapted chart."""

    kind: str
    n: int
    members: tuple[VectorField, ...]
    labels: tuple[str, ...]
    metric: tuple[int, ...] | None = None
    signature: tuple[int, int] | None = None

    def __iter__(self):
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def labelled(self):
        return zip(self.labels, self.members)

    def inversions(self) -> list[VectorField]:
        return [X for lab, X in self.labelled() if lab.startswith("inversion")]


def _field(n: int, comps: Mapping[int, SymbolPoly]) -> VectorField:
    return VectorField(tuple(comps.get(i, SymbolPoly.zero(n)) for i in range(n)))


def projective(n: int) -> GeneratorFamily:
    """d/dx^i, x^i d/dx^j and x^i x^j d/dx^j: n^2 + 2n fields."""
    if n < 1:
        raise ValueError("n must be >= 1")
    xs = [SymbolPoly.x(i, n) for i in range(n)]
    members, labels = [], []
    for i in range(n):
        members.append(_field(n, {i: SymbolPoly.one(n)}))
        labels.append(f"translation {i + 1}")
    for i in range(n):
        for j in range(n):
            members.append(_field(n, {j: xs[i]}))
            labels.append(f"linear {i + 1},{j + 1}")
    for i in range(n):
        members.append(_field(n, {j: xs[i] * xs[j] for j in range(n)}))
        labels.append(f"inversion {i + 1}")
    return GeneratorFamily("projective", n, tuple(members), tuple(labels))


def conformal(p: int, q: int) -> GeneratorFamily:
    """Translations, rotations, homothety and inversions for signature (p, q)."""
    n = p + q
    if p < 0 or q < 0 or n < 1:
        raise ValueError("need p, q >= 0 and p + q >= 1")
    g = (1,) * p + (-1,) * q
    xs = [SymbolPoly.x(i, n) for i in range(n)]
    lowered = [xs[i].scale(g[i]) for i in range(n)]  # x_i = g_ij x^j
    square = SymbolPoly.zero(n)
    for i in range(n):
        square = square + lowered[i] * xs[i]
    members, labels = [], []
    for i in range(n):
        members.append(_field(n, {i: SymbolPoly.one(n)}))
        labels.append(f"translation {i + 1}")
    for i in range(n):
        for j in range(i + 1, n):
            members.append(_field(n, {j: lowered[i], i: -lowered[j]}))
            labels.append(f"rotation {i + 1},{j + 1}")
    members.append(_field(n, {j: xs[j] for j in range(n)}))
    labels.append("homothety")
    for i in range(n):
        comps = {j: (lowered[i] * xs[j]).scale(-2) for j in range(n)}
        comps[i] = comps[i] + square
        members.append(_field(n, comps))
        labels.append(f"inversion {i + 1}")
    return GeneratorFamily("conformal", n, tuple(members), tuple(labels), g, (p, q))


def generators(kind: str | tuple, n: int | None = None) -> GeneratorFamily:
    """``generators("projective", 2)`` or ``generators(("conformal", 2, 0))``."""
    if isinstance(kind, tuple):
        name, *args = kind
    else:
        name, args = kind, ([n] if n is not None else [])
    if name == "projective":
        return projective(*args)
    if name == "conformal":
        return conformal(*args)
    raise ValueError(f"unknown geometry {name!r}")


# -- multivectors ---------------------------------------------------------
#
# Frame directions on T*R^n are numbered 0..n-1 for d/dx^i and n..2n-1 for
# d/dxi_i.  A d-vector is stored as a polynomial in anticommuting symbols
# theta_c dual to those directions, keyed by strictly increasing tuples.


def _sort_sign(idx: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    """Sign of the permutation sorting ``idx`` (0 if an index repeats)."""
    if len(set(idx)) != len(idx):
        return 0, ()
    arr = list(idx)
    sign = 1
    for i in range(len(arr)):
        for j in range(len(arr) - 1 - i):
            if arr[j] > arr[j + 1]:
                arr[j], arr[j + 1] = arr[j + 1], arr[j]
                sign = -sign
    return sign, tuple(arr)


@dataclass(frozen=True)
class Multivector:
    n: int
    degree: int
    terms: Mapping[tuple[int, ...], SymbolPoly] = field(default_factory=dict)

    def __post_init__(self):
        clean: dict[tuple[int, ...], SymbolPoly] = {}
        for idx, coeff in dict(self.terms).items():
            if len(idx) != self.degree:
                raise ValueError(f"index tuple {idx} does not have length {self.degree}")
            if any(not 0 <= c < 2 * self.n for c in idx):
                raise IndexError(f"frame index out of range in {idx}")
            if coeff.n != self.n:
                raise DimensionError("coefficient dimension mismatch")
            sign, key = _sort_sign(tuple(idx))
            if sign == 0 or not coeff:
                continue
            total = clean.get(key, SymbolPoly.zero(self.n)) + coeff.scale(sign)
            if total:
                clean[key] = total
            else:
                clean.pop(key, None)
        object.__setattr__(self, "terms", clean)

    @classmethod
    def from_vector_components(cls, x_part: Sequence[SymbolPoly], xi_part: Sequence[SymbolPoly]):
        n = len(x_part)
        terms = {(i,): c for i, c in enumerate(x_part)}
        terms.update({(n + i,): c for i, c in enumerate(xi_part)})
        return cls(n, 1, terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Multivector):
            return NotImplemented
        if not self.terms and not other.terms:
            return self.n == other.n
        return (self.n, self.degree, self.terms) == (other.n, other.degree, other.terms)

    def __hash__(self):
        return hash((self.n, self.degree, frozenset(self.terms.items())))

    def __add__(self, other: "Multivector") -> "Multivector":
        if other.n != self.n:
            raise DimensionError("dimension mismatch")
        if not other.terms:
            return self
        if not self.terms:
            return other
        if other.degree != self.degree:
            raise ValueError("cannot add multivectors of different degree")
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms.get(k, SymbolPoly.zero(self.n)) + v
        return Multivector(self.n, self.degree, terms)

    def __neg__(self) -> "Multivector":
        return self.scale(-1)

    def __sub__(self, other: "Multivector") -> "Multivector":
        return self + (-other)

    def scale(self, c) -> "Multivector":
        if isinstance(c, SymbolPoly):
            return Multivector(self.n, self.degree, {k: v * c for k, v in self.terms.items()})
        return Multivector(self.n, self.degree, {k: v.scale(c) for k, v in self.terms.items()})

    def wedge(self, other: "Multivector") -> "Multivector":
        if other.n != self.n:
            raise DimensionError("dimension mismatch")
        terms: dict[tuple[int, ...], SymbolPoly] = {}
        for i1, c1 in self.terms.items():
            for i2, c2 in other.terms.items():
                sign, key = _sort_sign(i1 + i2)
                if sign:
                    prod = (c1 * c2).scale(sign)
                    terms[key] = terms.get(key, SymbolPoly.zero(self.n)) + prod
        return Multivector(self.n, self.degree + other.degree, terms)

    def __call__(self, *funcs: SymbolPoly) -> SymbolPoly:
        """Evaluate on differentials: W(dF_1, ..., dF_d)."""
        if len(funcs) != self.degree:
            raise ValueError(f"expected {self.degree} arguments")
        import itertools

        out = SymbolPoly.zero(self.n)
        for idx, coeff in self.terms.items():
            for perm in itertools.permutations(range(self.degree)):
                sign, _ = _sort_sign(perm)
                prod = coeff.scale(sign)
                for slot, f in zip(perm, funcs):
                    prod = prod * _partial(f, idx[slot], self.n)
                out = out + prod
        return out


def _partial(F: SymbolPoly, c: int, n: int) -> SymbolPoly:
    return F.diff_x(c) if c < n else F.diff_xi(c - n)


def _theta_derivative(idx: tuple[int, ...], c: int, side: str):
    """Left or right derivative of theta_idx with respect to theta_c."""
    if c not in idx:
        return 0, ()
    pos = idx.index(c)
    rest = idx[:pos] + idx[pos + 1:]
    moves = pos if side == "left" else len(idx) - 1 - pos
    return (-1) ** moves, rest


def schouten(P: Multivector, Q: Multivector) -> Multivector:
    """Schouten-Nijenhuis bracket of polynomial multivectors.

    Computed as the odd Poisson bracket on the shifted cotangent bundle,
    ``[P, Q] = sum_c (dP/dq^c) (d_L Q/dtheta_c) - (d_R P/dtheta_c) (dQ/dq^c)``.
    With this sign convention two vector fields give minus their Lie bracket,
    and the Lie derivative of W along X is ``schouten(W, X)``.
    """
    if P.n != Q.n:
        raise DimensionError("dimension mismatch")
    n = P.n
    degree = P.degree + Q.degree - 1
    terms: dict[tuple[int, ...], SymbolPoly] = {}

    def accumulate(idx, coeff):
        sign, key = _sort_sign(idx)
        if sign and coeff:
            terms[key] = terms.get(key, SymbolPoly.zero(n)) + coeff.scale(sign)

    for c in range(2 * n):
        for ip, cp in P.terms.items():
            dp = _partial(cp, c, n)
            if dp:
                for iq, cq in Q.terms.items():
                    s, rest = _theta_derivative(iq, c, "left")
                    if s:
                        accumulate(ip + rest, (dp * cq).scale(s))
        for ip, cp in P.terms.items():
            s, rest = _theta_derivative(ip, c, "right")
            if not s:
                continue
            for iq, cq in Q.terms.items():
                dq = _partial(cq, c, n)
                if dq:
                    accumulate(rest + iq, (cp * dq).scale(-s))
    return Multivector(n, max(degree, 0), terms)


def hamiltonian_vector(F: SymbolPoly) -> Multivector:
    """The 1-vector v with v(G) = {F, G}."""
    n = F.n
    return Multivector.from_vector_components(
        [F.diff_xi(i) for i in range(n)], [-F.diff_x(i) for i in range(n)]
    )


def lifted_vector(X: VectorField) -> Multivector:
    """Canonical lift of ``X`` to T*R^n as a 1-vector."""
    return hamiltonian_vector(moment(X))


def lie_derivative(X: VectorField, W: Multivector) -> Multivector:
    return schouten(W, lifted_vector(X))


def canonical_bivectors(n: int, kind: GeneratorFamily | str = "projective"):
    """Return ``{"Pi": ..., "Lambda": ...}``; Lambda only for conformal n = 2."""
    pi = Multivector(
        n, 2, {(n + i, i): SymbolPoly.one(n) for i in range(n)}
    )  # d/dxi_i ^ d/dx^i
    out = {"Pi": pi, "Lambda": None}
    family = kind if isinstance(kind, GeneratorFamily) else generators(kind, n)
    if family.n != n:
        raise DimensionError("generator family and bivector dimension differ")
    if family.kind == "conformal":
        if n != 2:
            raise ValueError("the extra invariant bivector exists only for n = 2")
        g = family.metric
        R = SymbolPoly.zero(2)
        for i in range(2):
            R = R + (SymbolPoly.xi(i, 2) ** 2).scale(g[i])
        # 1/2 R sigma_kl dxi_k ^ dxi_l with sigma = epsilon
        out["Lambda"] = Multivector(
            2, 2, {(2, 3): R.scale(Fraction(1, 2)), (3, 2): R.scale(Fraction(-1, 2))}
        )
    return out


def g_vector(n: int, metric: Sequence[int] | None = None) -> Multivector:
    """The 1-vector xi^i d/dx^i (indices raised with a diagonal metric)."""
    metric = metric or (1,) * n
    return Multivector(n, 1, {(i,): SymbolPoly.xi(i, n).scale(metric[i]) for i in range(n)})


__all__ = [
    "VectorField",
    "GeneratorFamily",
    "Multivector",
    "moment",
    "lift_lie",
    "density_lie",
    "projective",
    "conformal",
    "generators",
    "schouten",
    "canonical_bivectors",
    "hamiltonian_vector",
    "lifted_vector",
    "lie_derivative",
    "g_vector",
    "Scalar",
    "scalar",
]
